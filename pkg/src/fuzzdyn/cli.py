"""Command-line front end.

Subcommands::

    fuzzdyn metric {infty,skorokhod,sendo} LHS RHS
    fuzzdyn witness --map tent U V --eps 1/8 [--out cert.json]
    fuzzdyn transit CONFIG [--csv out.csv] [--plot out.plot] [--timing]
    fuzzdyn check {metrics,zadeh,entourage,witness} [--seed 1] [--count N]

Exit codes: 0 ok, 1 property failures, 2 map without a mixing oracle,
3 post-check failure, 64 usage or input errors. Errors are also reported
as one JSON line on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import checks
from .campaign import ConfigError, load_config, run_campaign
from .dynamics import METRICS, ConstructionError, fuzzy_witness
from .fuzzy import FuzzySetError
from .ground import NoMixingOracle, SpaceMismatch
from .io import FormatError, certificate_to_json, load_fuzzy, map_from_json
from .rational import as_fraction, decimal, fmt

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_NO_ORACLE = 2
EXIT_POSTCHECK = 3
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fail(code: int, kind: str, message: str) -> int:
    print(json.dumps({"error": kind, "message": message, "exit": code}), file=sys.stderr)
    return code


def _positive_rational(text: str):
    try:
        q = as_fraction(text)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if q <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
    return q


def _show(value, approx: bool) -> str:
    return f"{fmt(value)}\t{decimal(value)}" if approx else fmt(value)


def cmd_metric(args) -> int:
    u, v = load_fuzzy(args.lhs), load_fuzzy(args.rhs)
    print(_show(METRICS[args.kind](u, v), args.approx))
    return EXIT_OK


def cmd_witness(args) -> int:
    u, v = load_fuzzy(args.u), load_fuzzy(args.v)
    f = map_from_json(args.map, u.space)
    cert = fuzzy_witness(f, u, v, args.eps)
    text = json.dumps(certificate_to_json(cert), indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(f"n={cert.n}")
    print(f"d_source={_show(cert.d_source, args.approx)}")
    print(f"d_target={_show(cert.d_target, args.approx)}")
    return EXIT_OK


def cmd_transit(args) -> int:
    cfg = load_config(args.config)
    campaign = run_campaign(cfg)
    csv_path = args.csv or cfg.csv_path
    plot_path = args.plot or cfg.plot_path
    text = campaign.csv_text(approx=args.approx, timing=args.timing)
    if csv_path:
        Path(csv_path).write_text(text)
    else:
        sys.stdout.write(text)
    if plot_path:
        Path(plot_path).write_text(campaign.plot_text())
    for line in campaign.summary_lines():
        print(line, file=sys.stderr if not csv_path else sys.stdout)
    return EXIT_OK


def cmd_check(args) -> int:
    reports = checks.run_suite(args.suite, args.seed, args.count)
    for r in reports:
        status = "PASS" if r.ok else "FAIL"
        print(f"{status} {r.name}: {r.passed}/{r.passed + r.failed}")
        if r.first_failure:
            print(f"  first failure: {r.first_failure}")
    ok = all(r.ok for r in reports)
    print(f"suite {args.suite} seed={args.seed}: {'pass' if ok else 'fail'}")
    return EXIT_OK if ok else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--approx", action="store_true", help="add decimal renderings for human reading")
    p = _Parser(prog="fuzzdyn", description="Exact hyperspace dynamics for step fuzzy sets.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("metric", parents=[common], help="distance between two fuzzy-set files")
    m.add_argument("kind", choices=sorted(METRICS))
    m.add_argument("lhs")
    m.add_argument("rhs")
    m.set_defaults(func=cmd_metric)

    w = sub.add_parser("witness", parents=[common], help="build a transitivity witness certificate")
    w.add_argument("--map", default="tent", help="tent, doubling, rotation:THETA, ...")
    w.add_argument("u")
    w.add_argument("v")
    w.add_argument("--eps", required=True, type=_positive_rational)
    w.add_argument("--out", help="certificate JSON path")
    w.set_defaults(func=cmd_witness)

    t = sub.add_parser("transit", parents=[common], help="run a hitting-time campaign")
    t.add_argument("config")
    t.add_argument("--csv", help="CSV output path (default: stdout)")
    t.add_argument("--plot", help="plot-data output path")
    t.add_argument("--timing", action="store_true", help="add a wall-clock column (not reproducible)")
    t.set_defaults(func=cmd_transit)

    c = sub.add_parser("check", parents=[common], help="run a property suite")
    c.add_argument("suite", choices=sorted(checks.SUITES))
    c.add_argument("--seed", type=int, default=1)
    c.add_argument("--count", type=int, default=None, help="cases per property")
    c.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _fail(EXIT_USAGE, "usage", str(exc))
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except NoMixingOracle as exc:
        return _fail(EXIT_NO_ORACLE, "no-oracle", str(exc))
    except ConstructionError as exc:
        return _fail(EXIT_POSTCHECK, "post-check", str(exc))
    except ConfigError as exc:
        return _fail(EXIT_USAGE, "config", str(exc))
    except (FormatError, FuzzySetError, SpaceMismatch, OSError, ValueError) as exc:
        return _fail(EXIT_USAGE, "input", str(exc))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
