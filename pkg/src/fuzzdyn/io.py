"""JSON formats for spaces, maps, fuzzy sets and certificates.

Rationals are written as ``"p/q"`` strings (``"p"`` for integers); finite
space elements are plain integers. A fuzzy-set file looks like::

    {"space": "interval", "levels": ["1/2", "1"], "cuts": [["0", "1"], ["0"]]}

``space`` may also be ``"circle"`` or ``{"finite": n, "dist": [[...]]}``.
Levels exclude the implicit 0 and end at ``"1"``; loading validates and
canonicalizes.
"""

from __future__ import annotations

import json
from pathlib import Path

from .dynamics import WitnessCertificate
from .fuzzy import StepFuzzySet, fuzzy_set
from .ground import (
    CIRCLE,
    UNIT_INTERVAL,
    DynMap,
    Space,
    doubling,
    finite_space,
    finite_table,
    identity_map,
    piecewise_linear,
    rotation,
    tent,
)
from .rational import as_fraction, fmt

__all__ = [
    "FormatError",
    "space_to_json",
    "space_from_json",
    "point_to_json",
    "point_from_json",
    "fuzzy_to_json",
    "fuzzy_from_json",
    "load_fuzzy",
    "dump_fuzzy",
    "map_from_json",
    "map_to_json",
    "certificate_to_json",
]


class FormatError(ValueError):
    pass


def space_to_json(space: Space):
    if space.is_finite:
        return {"finite": space.size, "dist": [[fmt(d) for d in row] for row in space.dist]}
    return space.kind


def space_from_json(obj) -> Space:
    if obj == "interval":
        return UNIT_INTERVAL
    if obj == "circle":
        return CIRCLE
    if isinstance(obj, dict) and "finite" in obj:
        dist = obj.get("dist")
        if not isinstance(dist, list) or len(dist) != obj["finite"]:
            raise FormatError("finite space needs an n x n 'dist' table")
        return finite_space([[_rational(d) for d in row] for row in dist])
    raise FormatError(f"unknown space {obj!r}")


def _rational(x):
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise FormatError(f"rationals must be 'p/q' strings, got {x!r}")
    try:
        return as_fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(str(exc)) from None


def point_to_json(space: Space, x):
    return x if space.is_finite else fmt(x)


def point_from_json(space: Space, x):
    if space.is_finite:
        if isinstance(x, bool) or not isinstance(x, int):
            raise FormatError(f"finite-space points are integers, got {x!r}")
        return x
    return _rational(x)


def fuzzy_to_json(u: StepFuzzySet) -> dict:
    return {
        "space": space_to_json(u.space),
        "levels": [fmt(a) for a in u.levels],
        "cuts": [[point_to_json(u.space, x) for x in c.points] for c in u.cuts],
    }


def fuzzy_from_json(obj) -> StepFuzzySet:
    if not isinstance(obj, dict) or not {"space", "levels", "cuts"} <= obj.keys():
        raise FormatError("a fuzzy set needs 'space', 'levels' and 'cuts'")
    space = space_from_json(obj["space"])
    levels = [_rational(a) for a in obj["levels"]]
    if not levels or levels[-1] != 1:
        raise FormatError("levels must end at '1'")
    if not isinstance(obj["cuts"], list) or any(not isinstance(c, list) for c in obj["cuts"]):
        raise FormatError("'cuts' must be a list of point lists")
    cuts = [[point_from_json(space, x) for x in c] for c in obj["cuts"]]
    return fuzzy_set(space, levels, cuts)


def load_fuzzy(path) -> StepFuzzySet:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from None
    return fuzzy_from_json(obj)


def dump_fuzzy(u: StepFuzzySet, path=None) -> str:
    text = json.dumps(fuzzy_to_json(u), sort_keys=True)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def map_from_json(desc, space: Space | None = None) -> DynMap:
    """Parse a map descriptor.

    Accepts ``"tent"``, ``"doubling"``, ``"identity"``, ``"rotation:1/3"`` or
    a dict ``{"kind": ..., ...}`` with ``theta``, ``breakpoints``/``values``
    or ``targets``. Finite tables and the identity need ``space``.
    """
    if isinstance(desc, str):
        kind, _, arg = desc.partition(":")
        desc = {"kind": kind}
        if arg:
            desc["theta"] = arg
    if not isinstance(desc, dict) or "kind" not in desc:
        raise FormatError(f"bad map descriptor {desc!r}")
    kind = desc["kind"]
    if kind == "tent":
        return tent()
    if kind == "doubling":
        return doubling()
    if kind == "rotation":
        if "theta" not in desc:
            raise FormatError("rotation needs 'theta'")
        return rotation(_rational(desc["theta"]))
    if kind == "piecewise_linear":
        return piecewise_linear([_rational(b) for b in desc["breakpoints"]], [_rational(v) for v in desc["values"]])
    if kind in ("finite", "identity"):
        if space is None:
            raise FormatError(f"a {kind} map needs its space")
        if kind == "identity":
            return identity_map(space)
        return finite_table(space, desc["targets"])
    raise FormatError(f"unknown map kind {kind!r}")


def map_to_json(f: DynMap) -> dict:
    return f.describe()


def certificate_to_json(cert: WitnessCertificate) -> dict:
    return {
        "map": {"kind": cert.map_kind},
        "eps": fmt(cert.eps),
        "n": cert.n,
        "u": fuzzy_to_json(cert.u),
        "v": fuzzy_to_json(cert.v),
        "w": fuzzy_to_json(cert.w),
        "d_source": fmt(cert.d_source),
        "d_target": fmt(cert.d_target),
        "d_skorokhod_target": fmt(cert.d_skorokhod_target),
        "d_sendo_target": fmt(cert.d_sendo_target),
        "per_level_log": [{"alpha": fmt(a), "size": k} for a, k in cert.per_level_log],
    }
