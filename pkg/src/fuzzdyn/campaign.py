"""Hitting-time campaigns: config parsing, per-trial CSV rows, summaries.

A config is a JSON object::

    {
      "id": "tent-demo",
      "map": "tent",                      # or {"kind": "rotation", "theta": "1/3"}
      "metric": "infty",                  # infty | skorokhod | sendo
      "eps": ["1/10", "1/20"],            # one experiment per value
      "eps_v": "1/10",                    # optional; defaults to eps
      "trials": 32,
      "max_iterate": 64,
      "seed": 7,
      "u": "u.json",                      # path (relative to the config) or inline fuzzy set
      "v": "v.json",
      "csv": "out.csv",                   # optional output paths
      "plot": "out.plot"
    }

Rows are deterministic given the seed. Wall-clock columns are only added
on request because they would break byte-identical reruns.
"""

from __future__ import annotations

import csv
import io
import json
import os
import statistics
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .dynamics import METRICS, isometry_separation_certificate, run_trial
from .fuzzy import StepFuzzySet
from .ground import DynMap
from .io import FormatError, fuzzy_from_json, load_fuzzy, map_from_json
from .rational import as_fraction, decimal, fmt

__all__ = ["ConfigError", "ExperimentConfig", "ResultRow", "load_config", "run_campaign", "Campaign"]


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    id: str
    map: DynMap
    metric: str
    eps_values: tuple[Fraction, ...]
    eps_v: Fraction | None
    trials: int
    max_iterate: int
    seed: int
    u: StepFuzzySet
    v: StepFuzzySet
    csv_path: Path | None = None
    plot_path: Path | None = None


@dataclass(frozen=True)
class ResultRow:
    experiment: str
    trial: int
    outcome: str
    n: int | None
    distance: Fraction
    metric: str
    certificate: str
    wall_us: int | None = None


def _load_side(value, base: Path) -> StepFuzzySet:
    if isinstance(value, dict):
        return fuzzy_from_json(value)
    if isinstance(value, str):
        path = Path(value)
        if not path.is_absolute():
            path = base / path
        if not path.exists():
            raise ConfigError(f"input file not found: {path}")
        return load_fuzzy(path)
    raise ConfigError("'u' and 'v' must be paths or inline fuzzy sets")


def _positive_int(obj: dict, key: str, default=None) -> int:
    value = obj.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(f"'{key}' must be a positive integer")
    return value


def parse_config(obj: dict, base: Path = Path("."), env=None) -> ExperimentConfig:
    """Validate a config object; ``FUZZDYN_SEED`` in ``env`` overrides the seed."""
    env = os.environ if env is None else env
    if not isinstance(obj, dict):
        raise ConfigError("config must be a JSON object")
    try:
        for key in ("map", "u", "v", "eps"):
            if key not in obj:
                raise ConfigError(f"missing '{key}'")
        u, v = _load_side(obj["u"], base), _load_side(obj["v"], base)
        f = map_from_json(obj["map"], u.space)
        if f.space != u.space or u.space != v.space:
            raise ConfigError("map and fuzzy sets live on different spaces")
        metric = obj.get("metric", "infty")
        if metric not in METRICS:
            raise ConfigError(f"unknown metric {metric!r}")
        raw = obj["eps"] if isinstance(obj["eps"], list) else [obj["eps"]]
        eps_values = tuple(as_fraction(e) for e in raw)
        eps_v = as_fraction(obj["eps_v"]) if "eps_v" in obj else None
        if not eps_values or any(e <= 0 for e in eps_values) or (eps_v is not None and eps_v <= 0):
            raise ConfigError("eps values must be positive")
        seed = obj.get("seed", 0)
        if "FUZZDYN_SEED" in env:
            seed = int(env["FUZZDYN_SEED"])
        if isinstance(seed, bool) or not isinstance(seed, int):
            raise ConfigError("'seed' must be an integer")
        out = {}
        for key in ("csv", "plot"):
            if obj.get(key):
                p = Path(obj[key])
                out[key] = p if p.is_absolute() else base / p
        return ExperimentConfig(
            id=str(obj.get("id", "experiment")),
            map=f,
            metric=metric,
            eps_values=eps_values,
            eps_v=eps_v,
            trials=_positive_int(obj, "trials", 1),
            max_iterate=_positive_int(obj, "max_iterate", 64),
            seed=seed,
            u=u,
            v=v,
            csv_path=out.get("csv"),
            plot_path=out.get("plot"),
        )
    except ConfigError:
        raise
    except (FormatError, ValueError, TypeError, KeyError) as exc:
        raise ConfigError(str(exc)) from None


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return parse_config(obj, path.parent)


@dataclass
class Campaign:
    config: ExperimentConfig
    rows: list[ResultRow]
    # per-eps summaries, in config order
    summaries: list[dict]

    def csv_text(self, approx: bool = False, timing: bool = False) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header = ["experiment", "trial", "outcome", "n", "distance", "metric_kind", "certificate"]
        if approx:
            header.append("distance_approx")
        if timing:
            header.append("wall_us")
        writer.writerow(header)
        for r in self.rows:
            line = [r.experiment, r.trial, r.outcome, "" if r.n is None else r.n, fmt(r.distance), r.metric, r.certificate]
            if approx:
                line.append(decimal(r.distance))
            if timing:
                line.append(r.wall_us)
            writer.writerow(line)
        return buf.getvalue()

    def plot_text(self) -> str:
        lines = ["# eps median_n"]
        for s in self.summaries:
            lines.append(f"{fmt(s['eps'])} {'nan' if s['median_n'] is None else fmt(s['median_n'])}")
        return "\n".join(lines) + "\n"

    def summary_lines(self) -> list[str]:
        out = []
        for s in self.summaries:
            median = "NA" if s["median_n"] is None else fmt(s["median_n"])
            out.append(
                f"summary experiment={s['experiment']} eps={fmt(s['eps'])} trials={s['trials']} "
                f"hits={s['hits']} hit_rate={fmt(s['hit_rate'])} median_n={median} "
                f"witness_backed={s['witness_backed']} certified_impossible={s['certified_impossible']}"
            )
        return out


def run_campaign(cfg: ExperimentConfig) -> Campaign:
    rows: list[ResultRow] = []
    summaries = []
    f = cfg.map
    for k, eps in enumerate(cfg.eps_values):
        eps_v = cfg.eps_v if cfg.eps_v is not None else eps
        exp_id = cfg.id if len(cfg.eps_values) == 1 else f"{cfg.id}-{k}"
        cert = "none"
        if f.is_isometry and cfg.metric != "sendo":
            cert = isometry_separation_certificate(f, cfg.u, eps, cfg.v, eps_v).status
        elif f.has_mixing_oracle:
            cert = "witness"
        batch = []
        for t in range(cfg.trials):
            start = time.perf_counter_ns()
            res = run_trial(f, cfg.u, eps, cfg.v, eps_v, cfg.max_iterate, cfg.metric, cfg.seed, t)
            wall = (time.perf_counter_ns() - start) // 1000
            if res.found and cert == "certified-impossible":
                raise AssertionError("certified-impossible pair produced a hit")
            batch.append(
                ResultRow(exp_id, t, "hit" if res.found else "miss", res.n, res.distance, cfg.metric, cert, wall)
            )
        rows.extend(batch)
        hits = [r.n for r in batch if r.outcome == "hit"]
        summaries.append(
            {
                "experiment": exp_id,
                "eps": eps,
                "trials": len(batch),
                "hits": len(hits),
                "hit_rate": Fraction(len(hits), len(batch)),
                "median_n": Fraction(statistics.median(hits)) if hits else None,
                "witness_backed": sum(r.certificate == "witness" for r in batch),
                "certified_impossible": sum(r.certificate == "certified-impossible" for r in batch),
            }
        )
    return Campaign(cfg, rows, summaries)
