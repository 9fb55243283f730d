"""Ground spaces, exact distances and dynamical maps.

Three kinds of metric space are supported: the unit interval, the circle of
circumference one (arc-length metric) and finite spaces given by a distance
table. Points are plain values: a :class:`~fractions.Fraction` for the two
continuous spaces and an ``int`` index for finite ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .rational import as_fraction

__all__ = [
    "SpaceMismatch",
    "NoMixingOracle",
    "Space",
    "UNIT_INTERVAL",
    "CIRCLE",
    "finite_space",
    "distance",
    "metric_of",
    "DynMap",
    "tent",
    "doubling",
    "rotation",
    "piecewise_linear",
    "finite_table",
    "identity_map",
    "apply_map",
    "iterate_map",
    "preimage_points",
    "tent_inverse_branch",
    "Span",
    "interval_cover_time",
]

HALF = Fraction(1, 2)
ZERO = Fraction(0)
ONE = Fraction(1)


class SpaceMismatch(ValueError):
    def __init__(self, detail: str = ""):
        msg = "space mismatch" + (f": {detail}" if detail else "")
        super().__init__(msg)


class NoMixingOracle(ValueError):
    def __init__(self):
        super().__init__("map does not expose a mixing oracle")


@dataclass(frozen=True)
class Space:
    """A metric ground space.

    ``kind`` is ``"interval"``, ``"circle"`` or ``"finite"``. Finite spaces
    carry a symmetric table of rational distances, validated on creation by
    :func:`finite_space`.
    """

    kind: str
    dist: tuple[tuple[Fraction, ...], ...] | None = field(default=None, repr=False)

    @property
    def size(self) -> int | None:
        return None if self.dist is None else len(self.dist)

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def point(self, x):
        """Validate ``x`` as a point of this space and return its canonical value."""
        if self.kind == "finite":
            if type(x) is not int or not 0 <= x < len(self.dist):
                raise SpaceMismatch(f"{x!r} is not an element of a {len(self.dist)}-point space")
            return x
        if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
            raise SpaceMismatch(f"{x!r} is not a rational point")
        q = Fraction(x)
        if self.kind == "circle":
            return q - (q.numerator // q.denominator)
        if not ZERO <= q <= ONE:
            raise SpaceMismatch(f"{q} lies outside [0, 1]")
        return q

    def elements(self) -> range:
        if self.kind != "finite":
            raise TypeError("only finite spaces can be enumerated")
        return range(len(self.dist))

    def __repr__(self) -> str:
        if self.kind == "finite":
            return f"Space(finite, n={len(self.dist)})"
        return f"Space({self.kind})"


UNIT_INTERVAL = Space("interval")
CIRCLE = Space("circle")


def finite_space(table: Sequence[Sequence]) -> Space:
    """Build a finite metric space, checking the metric axioms exactly."""
    rows = tuple(tuple(as_fraction(d) for d in row) for row in table)
    n = len(rows)
    if n == 0:
        raise ValueError("a finite space needs at least one element")
    if any(len(row) != n for row in rows):
        raise ValueError("distance table must be square")
    for i in range(n):
        if rows[i][i] != 0:
            raise ValueError(f"d({i},{i}) must be 0")
        for j in range(n):
            if rows[i][j] != rows[j][i]:
                raise ValueError(f"distance table is not symmetric at ({i},{j})")
            if i != j and rows[i][j] <= 0:
                raise ValueError(f"d({i},{j}) must be positive")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if rows[i][k] > rows[i][j] + rows[j][k]:
                    raise ValueError(f"triangle inequality fails for ({i},{j},{k})")
    return Space("finite", rows)


def distance(space: Space, a, b) -> Fraction:
    """Exact distance between two points of ``space``."""
    a = space.point(a)
    b = space.point(b)
    if space.kind == "finite":
        return space.dist[a][b]
    gap = abs(a - b)
    if space.kind == "circle":
        return min(gap, 1 - gap)
    return gap


def metric_of(space: Space):
    """Unchecked distance function for already-validated points (hot path)."""
    if space.kind == "finite":
        table = space.dist
        return lambda a, b: table[a][b]
    if space.kind == "circle":

        def arc(a, b):
            gap = abs(a - b)
            return min(gap, 1 - gap)

        return arc
    return lambda a, b: abs(a - b)


# -- dynamical maps ---------------------------------------------------------


@dataclass(frozen=True)
class Span:
    """A closed interval ``[lo, hi]`` of the interval, or a lifted closed arc
    of the circle (``hi - lo`` is the arc length, ``lo`` in ``[0, 1)``)."""

    lo: Fraction
    hi: Fraction

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo


@dataclass(frozen=True)
class DynMap:
    """Descriptor of a continuous self-map of a ground space.

    Build instances with the factory functions (:func:`tent`,
    :func:`rotation`, ...); they validate parameters.
    """

    kind: str
    space: Space
    theta: Fraction | None = None
    breakpoints: tuple[Fraction, ...] = ()
    values: tuple[Fraction, ...] = ()
    targets: tuple[int, ...] = ()

    def __call__(self, x):
        return apply_map(self, x)

    @property
    def is_isometry(self) -> bool:
        if self.kind == "rotation":
            return True
        if self.kind == "finite":
            n = len(self.targets)
            dist = self.space.dist
            return all(
                dist[self.targets[i]][self.targets[j]] == dist[i][j]
                for i in range(n)
                for j in range(i + 1, n)
            )
        return False

    @property
    def has_mixing_oracle(self) -> bool:
        return self.kind in ("tent", "doubling")

    def describe(self) -> dict:
        from .rational import fmt

        d: dict = {"kind": self.kind}
        if self.kind == "rotation":
            d["theta"] = fmt(self.theta)
        elif self.kind == "piecewise_linear":
            d["breakpoints"] = [fmt(p) for p in self.breakpoints]
            d["values"] = [fmt(v) for v in self.values]
        elif self.kind == "finite":
            d["targets"] = list(self.targets)
        return d

    # spans drive the constructive mixing oracle

    def whole(self) -> Span:
        return Span(ZERO, ONE)

    def span(self, lo, hi) -> Span:
        lo, hi = as_fraction(lo), as_fraction(hi)
        if lo >= hi:
            raise ValueError("empty interval")
        if self.space.kind == "circle":
            if hi - lo >= 1:
                return self.whole()
            shift = lo.numerator // lo.denominator
            return Span(lo - shift, hi - shift)
        return Span(max(lo, ZERO), min(hi, ONE))

    def image_span(self, s: Span) -> Span:
        if not self.has_mixing_oracle:
            raise NoMixingOracle()
        if self.kind == "tent":
            lo, hi = s.lo, s.hi
            if hi <= HALF:
                return Span(2 * lo, 2 * hi)
            if lo >= HALF:
                return Span(2 - 2 * hi, 2 - 2 * lo)
            return Span(min(2 * lo, 2 - 2 * hi), ONE)
        # doubling on the circle stretches arcs by two
        if 2 * s.length >= 1:
            return self.whole()
        lo = 2 * s.lo
        shift = lo.numerator // lo.denominator
        return Span(lo - shift, 2 * s.hi - shift)

    def span_is_full(self, s: Span) -> bool:
        if self.space.kind == "circle":
            return s.length >= 1
        return s.lo == 0 and s.hi == 1

    def span_contains(self, s: Span, y) -> bool:
        if self.space.kind == "circle":
            if s.length >= 1:
                return True
            offset = y - s.lo
            offset -= offset.numerator // offset.denominator
            return offset <= s.length
        return s.lo <= y <= s.hi


def tent() -> DynMap:
    return DynMap("tent", UNIT_INTERVAL)


def doubling() -> DynMap:
    """The angle-doubling map ``x -> 2x mod 1`` on the circle."""
    return DynMap("doubling", CIRCLE)


def rotation(theta) -> DynMap:
    theta = CIRCLE.point(as_fraction(theta))
    return DynMap("rotation", CIRCLE, theta=theta)


def piecewise_linear(breakpoints: Sequence, values: Sequence) -> DynMap:
    """Continuous piecewise-linear self-map of ``[0, 1]``.

    Segments must be strictly monotone so preimages stay finite.
    """
    bps = tuple(as_fraction(b) for b in breakpoints)
    vals = tuple(as_fraction(v) for v in values)
    if len(bps) < 2 or len(bps) != len(vals):
        raise ValueError("need matching breakpoints and values, at least two of each")
    if bps[0] != 0 or bps[-1] != 1:
        raise ValueError("breakpoints must start at 0 and end at 1")
    if any(b >= c for b, c in zip(bps, bps[1:])):
        raise ValueError("breakpoints must be strictly increasing")
    if any(not 0 <= v <= 1 for v in vals):
        raise ValueError("values must lie in [0, 1]")
    if any(v == w for v, w in zip(vals, vals[1:])):
        raise ValueError("flat segments have infinite preimages")
    return DynMap("piecewise_linear", UNIT_INTERVAL, breakpoints=bps, values=vals)


def finite_table(space: Space, targets: Sequence[int]) -> DynMap:
    if not space.is_finite:
        raise SpaceMismatch("finite tables need a finite space")
    targets = tuple(int(t) for t in targets)
    if len(targets) != space.size:
        raise ValueError("table must assign a target to every element")
    for t in targets:
        space.point(t)
    return DynMap("finite", space, targets=targets)


def identity_map(space: Space) -> DynMap:
    if space.is_finite:
        return finite_table(space, range(space.size))
    if space.kind == "circle":
        return rotation(0)
    return piecewise_linear((0, 1), (0, 1))


def apply_map(f: DynMap, x):
    x = f.space.point(x)
    kind = f.kind
    if kind == "tent":
        return 2 * x if x <= HALF else 2 * (1 - x)
    if kind == "doubling":
        return f.space.point(2 * x)
    if kind == "rotation":
        return f.space.point(x + f.theta)
    if kind == "finite":
        return f.targets[x]
    bps, vals = f.breakpoints, f.values
    for k in range(len(bps) - 1):
        if x <= bps[k + 1]:
            p0, p1, v0, v1 = bps[k], bps[k + 1], vals[k], vals[k + 1]
            return v0 + (x - p0) * (v1 - v0) / (p1 - p0)
    raise AssertionError("unreachable: x validated in [0, 1]")


def iterate_map(f: DynMap, x, n: int):
    for _ in range(n):
        x = apply_map(f, x)
    return x


def preimage_points(f: DynMap, y) -> frozenset:
    """The full preimage ``f^{-1}(y)``; may be empty."""
    y = f.space.point(y)
    kind = f.kind
    if kind == "tent":
        return frozenset((y / 2, 1 - y / 2))
    if kind == "doubling":
        return frozenset((y / 2, (y + 1) / 2))
    if kind == "rotation":
        return frozenset((f.space.point(y - f.theta),))
    if kind == "finite":
        return frozenset(i for i, t in enumerate(f.targets) if t == y)
    out = set()
    bps, vals = f.breakpoints, f.values
    for k in range(len(bps) - 1):
        v0, v1 = vals[k], vals[k + 1]
        if min(v0, v1) <= y <= max(v0, v1):
            out.add(bps[k] + (y - v0) * (bps[k + 1] - bps[k]) / (v1 - v0))
    return frozenset(out)


def tent_inverse_branch(y, branch: str) -> Fraction:
    """Point of ``[0, 1/2]`` (``"left"``) or ``[1/2, 1]`` (``"right"``) that the
    tent map sends to ``y``."""
    y = UNIT_INTERVAL.point(y)
    if branch == "left":
        return y / 2
    if branch == "right":
        return 1 - y / 2
    raise ValueError(f"unknown branch {branch!r}")


def interval_cover_time(f: DynMap, lo, hi, max_steps: int = 10_000) -> int:
    """Smallest ``n`` with ``f^n([lo, hi])`` equal to the whole space.

    The image of a closed interval (arc) under the tent (doubling) map is
    again one, so the iteration is tracked exactly.
    """
    if not f.has_mixing_oracle:
        raise NoMixingOracle()
    s = f.span(lo, hi)
    for n in range(max_steps + 1):
        if f.span_is_full(s):
            return n
        s = f.image_span(s)
    raise RuntimeError(f"interval did not cover the space within {max_steps} steps")


def span_orbit(f: DynMap, s: Span, n: int) -> list[Span]:
    """``[s, f(s), ..., f^n(s)]`` as exact spans."""
    out = [s]
    for _ in range(n):
        s = f.image_span(s)
        out.append(s)
    return out
