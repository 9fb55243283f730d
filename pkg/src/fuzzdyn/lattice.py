"""Exact integer encoding of fuzzy-set pairs for the accelerated kernels.

All coordinates, levels and distances of an instance are rewritten as
numerators over one common denominator ``L``. The tent, doubling and
rational-rotation maps send this lattice to itself, so whole orbits can be
scanned in int64 arithmetic and decoded back to exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable

import numpy as np

from . import _accel
from .fuzzy import StepFuzzySet, _hausdorff_table
from .ground import DynMap, SpaceMismatch

__all__ = ["Encoded", "encode", "orbit_distances", "lattice_distance", "skorokhod_grid_oracle", "MAX_SCALE"]

# keeps 4 * L well inside int64
MAX_SCALE = 2**60


@dataclass(frozen=True)
class Encoded:
    scale: int
    space: int
    table: np.ndarray
    xs: np.ndarray
    lw: np.ndarray
    a: np.ndarray
    ys: np.ndarray
    lv: np.ndarray
    b: np.ndarray
    mapk: int = 0
    param: int = 0
    targets: np.ndarray = np.zeros(1, dtype=np.int64)

    def decode(self, value: int) -> Fraction:
        return Fraction(int(value), self.scale)


def _points_and_depths(u: StepFuzzySet):
    depth: dict = {}
    for i, cut in enumerate(u.cuts, start=1):
        for x in cut.points:
            depth[x] = i
    pts = sorted(depth)
    return pts, [depth[x] for x in pts]


def _denominators(values: Iterable) -> int:
    out = 1
    for q in values:
        out = lcm(out, Fraction(q).denominator)
    return out


def encode(u: StepFuzzySet, v: StepFuzzySet, f: DynMap | None = None, extra: Iterable = ()) -> Encoded | None:
    """Encode ``(u, v)`` (and optionally ``f``) on a common lattice.

    Returns ``None`` when the map has no lattice action (piecewise-linear
    maps) or the common denominator would overflow.
    """
    if u.space != v.space:
        raise SpaceMismatch()
    space = u.space
    if f is not None and f.space != space:
        raise SpaceMismatch()
    if f is not None and f.kind not in _accel.MAP_CODES:
        return None
    pu, du = _points_and_depths(u)
    pv, dv = _points_and_depths(v)
    vals = list(u.levels) + list(v.levels) + [Fraction(e) for e in extra]
    if space.is_finite:
        vals += [d for row in space.dist for d in row]
    else:
        vals += pu + pv
    if f is not None and f.kind == "rotation":
        vals.append(f.theta)
    L = _denominators(vals)
    if L > MAX_SCALE:
        return None
    i64 = lambda xs: np.array(xs, dtype=np.int64)  # noqa: E731
    if space.is_finite:
        table = i64([[int(d * L) for d in row] for row in space.dist])
        xs, ys = i64(pu), i64(pv)
    else:
        table = np.zeros((1, 1), dtype=np.int64)
        xs, ys = i64([int(x * L) for x in pu]), i64([int(y * L) for y in pv])
    mapk, param, targets = 0, 0, np.zeros(1, dtype=np.int64)
    if f is not None:
        mapk = _accel.MAP_CODES[f.kind]
        if f.kind == "rotation":
            param = int(f.theta * L)
        elif f.kind == "finite":
            targets = i64(f.targets)
    return Encoded(
        scale=L,
        space=_accel.SPACE_CODES[space.kind],
        table=table,
        xs=xs,
        lw=i64(du),
        a=i64([int(x * L) for x in u.levels]),
        ys=ys,
        lv=i64(dv),
        b=i64([int(x * L) for x in v.levels]),
        mapk=mapk,
        param=param,
        targets=targets,
    )


def orbit_distances(f: DynMap, w: StepFuzzySet, v: StepFuzzySet, steps: int, metric: str, *, backend=None):
    """Exact distances ``d(f^n(w), v)`` for ``n = 1..steps``, or ``None``
    when the instance has no lattice encoding."""
    enc = encode(w, v, f)
    if enc is None:
        return None
    raw = _accel.orbit_distances(
        enc.xs, enc.lw, enc.a, enc.ys, enc.lv, enc.b, enc.space, enc.mapk, enc.param,
        enc.targets, enc.table, enc.scale, _accel.METRIC_CODES[metric], steps, backend=backend,
    )
    return [enc.decode(x) for x in raw]


def lattice_distance(u: StepFuzzySet, v: StepFuzzySet, metric: str, *, backend=None) -> Fraction | None:
    enc = encode(u, v)
    if enc is None:
        return None
    raw = _accel.metric_value(
        enc.xs, enc.lw, enc.a, enc.ys, enc.lv, enc.b, enc.space, enc.scale, enc.table,
        _accel.METRIC_CODES[metric], backend=backend,
    )
    return enc.decode(raw)


def skorokhod_grid_oracle(u: StepFuzzySet, v: StepFuzzySet, resolution: int = 32, *, backend=None) -> Fraction:
    """Brute-force Skorokhod upper bound over grid warps.

    Searches every piecewise-linear warp that sends v's interior jump levels
    to strictly increasing grid levels ``k / resolution``; v's own levels
    must lie on the grid. The value can only exceed the true infimum.
    """
    if u.space != v.space:
        raise SpaceMismatch()
    if any((b * resolution).denominator != 1 for b in v.levels):
        raise ValueError("v's jump levels must lie on the oracle grid")
    table = _hausdorff_table(u, v)
    flat = [h for row in table for h in row]
    L = _denominators(list(u.levels) + list(v.levels) + flat + [Fraction(1, resolution)])
    h = np.array([[int(x * L) for x in row] for row in table], dtype=np.int64)
    a = np.array([int(x * L) for x in u.levels], dtype=np.int64)
    b = np.array([int(x * L) for x in v.levels], dtype=np.int64)
    grid = np.array([k * L // resolution for k in range(1, resolution)], dtype=np.int64)
    return Fraction(_accel.grid_warp_oracle(h, a, b, grid, backend=backend), L)
