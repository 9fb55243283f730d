"""Step fuzzy sets and the metrics and uniformities they carry.

A step fuzzy set is described by levels ``0 = a_0 < a_1 < ... < a_n = 1``
and a decreasing chain of compacta ``C_1 ⊇ ... ⊇ C_n``; its ``alpha``-cut
is ``C_i`` for ``alpha`` in ``(a_{i-1}, a_i]`` and its support is ``C_1``.
Only ``a_1, ..., a_n`` are stored (``levels``); ``partition`` prepends 0.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .compacta import (
    Compactum,
    Metric,
    Relational,
    hausdorff_distance,
    image_compactum,
    k_entourage_contains,
)
from .ground import DynMap, Space, SpaceMismatch, apply_map, metric_of, preimage_points
from .rational import as_fraction

__all__ = [
    "FuzzySetError",
    "StepFuzzySet",
    "fuzzy_set",
    "validate",
    "Validation",
    "canonicalize",
    "alpha_cut",
    "right_limit_cut",
    "characteristic",
    "membership",
    "zadeh_extend",
    "zadeh_pointwise",
    "iterate_zadeh",
    "TimeWarp",
    "time_warp",
    "identity_warp",
    "warp_norm",
    "warp_apply",
    "piece_pairs",
    "d_infty",
    "d_sendo",
    "d_skorokhod",
    "SkorokhodResult",
    "f_entourage_contains",
    "g_entourage_contains",
    "s_entourage_contains",
    "level_partition",
    "partition_property",
    "merge_partitions",
    "SendographSegment",
    "sendograph",
    "map_sendograph",
]

ZERO = Fraction(0)
ONE = Fraction(1)


class FuzzySetError(ValueError):
    pass


@dataclass(frozen=True)
class StepFuzzySet:
    """Levels ``a_1 < ... < a_n = 1`` with cuts ``C_1 ⊇ ... ⊇ C_n``.

    Instances built by :func:`fuzzy_set` are validated and canonical; the
    raw constructor only checks shapes so :func:`validate` can report on
    malformed data.
    """

    space: Space
    levels: tuple[Fraction, ...]
    cuts: tuple[Compactum, ...]

    def __post_init__(self):
        if len(self.levels) != len(self.cuts) or not self.levels:
            raise FuzzySetError("need one cut per level and at least one level")

    @property
    def partition(self) -> tuple[Fraction, ...]:
        return (ZERO,) + self.levels

    @property
    def support(self) -> Compactum:
        return self.cuts[0]

    @property
    def core(self) -> Compactum:
        return self.cuts[-1]

    def __len__(self) -> int:
        return len(self.levels)

    def heights(self) -> dict:
        """Membership grade of every support point."""
        out = {}
        for level, cut in zip(self.levels, self.cuts):
            for x in cut.points:
                out[x] = level
        return out

    def __repr__(self) -> str:
        from .rational import fmt

        body = ", ".join(f"{fmt(a)}: {list(map(fmt, c.points))}" for a, c in zip(self.levels, self.cuts))
        return f"StepFuzzySet({body})"


@dataclass(frozen=True)
class Validation:
    ok: bool
    violations: tuple[str, ...]
    canonical: StepFuzzySet | None = None


def validate(u: StepFuzzySet) -> Validation:
    """Check monotone levels, nested cuts and normality; canonicalize if ok."""
    problems = []
    levels = u.levels
    if any(not isinstance(a, Fraction) for a in levels):
        problems.append("levels must be rationals")
    elif levels[0] <= 0 or any(a >= b for a, b in zip(levels, levels[1:])):
        problems.append("levels not increasing in (0, 1]")
    elif levels[-1] != 1:
        problems.append("top level must be 1")
    if any(c.space != u.space for c in u.cuts):
        problems.append("space mismatch")
    elif any(not later.issubset(earlier) for earlier, later in zip(u.cuts, u.cuts[1:])):
        problems.append("cuts not decreasing")
    if problems:
        return Validation(False, tuple(problems))
    return Validation(True, (), canonicalize(u))


def canonicalize(u: StepFuzzySet) -> StepFuzzySet:
    """Merge adjacent pieces with equal cuts."""
    levels, cuts = [], []
    for a, c in zip(u.levels, u.cuts):
        if cuts and cuts[-1] == c:
            levels[-1] = a
        else:
            levels.append(a)
            cuts.append(c)
    if len(levels) == len(u.levels):
        return u
    return StepFuzzySet(u.space, tuple(levels), tuple(cuts))


def fuzzy_set(space: Space, levels: Sequence, cuts: Sequence[Iterable]) -> StepFuzzySet:
    """Build a validated, canonical step fuzzy set.

    ``levels`` lists ``a_1, ..., a_n`` (a leading 0 is tolerated); ``cuts``
    gives one iterable of points (or a :class:`Compactum`) per level.
    """
    levels = [as_fraction(a) for a in levels]
    if levels and levels[0] == 0:
        levels = levels[1:]
    raw = [list(c.points) if isinstance(c, Compactum) else list(c) for c in cuts]
    if len(levels) != len(raw) or not levels:
        raise FuzzySetError("need one cut per level and at least one level")
    if not raw[-1]:
        raise FuzzySetError("not normal: the level-1 cut is empty")
    if any(not c for c in raw):
        raise FuzzySetError("cuts not decreasing")
    comps = []
    for pts in raw:
        if space.is_finite:
            vals = {space.point(p) for p in pts}
        else:
            vals = {space.point(as_fraction(p)) for p in pts}
        comps.append(Compactum(space, tuple(sorted(vals))))
    report = validate(StepFuzzySet(space, tuple(levels), tuple(comps)))
    if not report.ok:
        raise FuzzySetError("; ".join(report.violations))
    return report.canonical


def characteristic(k: Compactum) -> StepFuzzySet:
    return StepFuzzySet(k.space, (ONE,), (k,))


def alpha_cut(u: StepFuzzySet, alpha) -> Compactum:
    alpha = as_fraction(alpha)
    if not 0 <= alpha <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    if alpha == 0:
        return u.cuts[0]
    return u.cuts[bisect_left(u.levels, alpha)]


def right_limit_cut(u: StepFuzzySet, alpha) -> Compactum:
    """``u_{alpha+}``: the cut just above ``alpha``."""
    alpha = as_fraction(alpha)
    if not 0 <= alpha < 1:
        raise ValueError("alpha must lie in [0, 1)")
    return u.cuts[bisect_right(u.levels, alpha)]


def membership(u: StepFuzzySet, x) -> Fraction:
    x = u.space.point(x)
    grade = ZERO
    for a, c in zip(u.levels, u.cuts):
        if x not in c:
            break
        grade = a
    return grade


# -- Zadeh's extension ---------------------------------------------------------


def zadeh_extend(f: DynMap, u: StepFuzzySet) -> StepFuzzySet:
    """Level-wise image: the ``alpha``-cut of the result is ``f(u_alpha)``."""
    if f.space != u.space:
        raise SpaceMismatch()
    return canonicalize(StepFuzzySet(u.space, u.levels, tuple(image_compactum(f, c) for c in u.cuts)))


def iterate_zadeh(f: DynMap, u: StepFuzzySet, n: int) -> StepFuzzySet:
    for _ in range(n):
        u = zadeh_extend(f, u)
    return u


def zadeh_pointwise(f: DynMap, u: StepFuzzySet, y) -> Fraction:
    """``sup{u(z): z in f^{-1}(y)}``, or 0 when the preimage is empty."""
    return max((membership(u, z) for z in preimage_points(f, y)), default=ZERO)


# -- time warps ---------------------------------------------------------------


@dataclass(frozen=True)
class TimeWarp:
    """Increasing piecewise-linear homeomorphism of ``[0, 1]`` through ``knots``."""

    knots: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        k = self.knots
        if len(k) < 2 or k[0] != (0, 0) or k[-1] != (1, 1):
            raise ValueError("a warp must run from (0, 0) to (1, 1)")
        for (s0, t0), (s1, t1) in zip(k, k[1:]):
            if not (s0 < s1 and t0 < t1):
                raise ValueError("warp knots must be strictly increasing in both coordinates")

    def __call__(self, alpha) -> Fraction:
        alpha = as_fraction(alpha)
        xs = [s for s, _ in self.knots]
        i = bisect_left(xs, alpha)
        if xs[i] == alpha:
            return self.knots[i][1]
        (s0, t0), (s1, t1) = self.knots[i - 1], self.knots[i]
        return t0 + (alpha - s0) * (t1 - t0) / (s1 - s0)

    def inverse(self) -> "TimeWarp":
        return TimeWarp(tuple((t, s) for s, t in self.knots))

    @property
    def norm(self) -> Fraction:
        return warp_norm(self)


def time_warp(knots: Iterable[tuple]) -> TimeWarp:
    pts = [(as_fraction(s), as_fraction(t)) for s, t in knots]
    if not pts or pts[0] != (0, 0):
        pts.insert(0, (ZERO, ZERO))
    if pts[-1] != (1, 1):
        pts.append((ONE, ONE))
    return TimeWarp(tuple(pts))


def identity_warp() -> TimeWarp:
    return TimeWarp(((ZERO, ZERO), (ONE, ONE)))


def warp_norm(t: TimeWarp) -> Fraction:
    # |t(a) - a| is piecewise linear, so its sup sits on a knot
    return max(abs(tt - s) for s, tt in t.knots)


def warp_apply(t: TimeWarp, v: StepFuzzySet) -> StepFuzzySet:
    """``(tv)(x) = t(v(x))``: the jump levels move through ``t``, cuts stay."""
    return StepFuzzySet(v.space, tuple(t(a) for a in v.levels), v.cuts)


# -- metrics ------------------------------------------------------------------


def _check_pair(u: StepFuzzySet, v: StepFuzzySet) -> None:
    if u.space != v.space:
        raise SpaceMismatch()


def piece_pairs(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[tuple[int, int]]:
    """Index pairs ``(i, j)`` of pieces overlapping in the merged partition
    of two level vectors (both ending at 1)."""
    i = j = 0
    out = [(0, 0)]
    while not (a[i] == 1 and b[j] == 1):
        if a[i] == b[j]:
            i, j = i + 1, j + 1
        elif a[i] < b[j]:
            i += 1
        else:
            j += 1
        out.append((i, j))
    return out


def d_infty(u: StepFuzzySet, v: StepFuzzySet) -> Fraction:
    """Level-wise distance ``sup_alpha d_H(u_alpha, v_alpha)``."""
    _check_pair(u, v)
    # the alpha = 0 pair (C_1, D_1) is the first merged piece
    return max(hausdorff_distance(u.cuts[i], v.cuts[j]) for i, j in piece_pairs(u.levels, v.levels))


def _directed_sendo(hu: dict, hv: dict, d) -> Fraction:
    worst = ZERO
    for x, a in hu.items():
        best = min(max(d(x, y), a - b if a > b else ZERO) for y, b in hv.items())
        if best > worst:
            worst = best
    return worst


def d_sendo(u: StepFuzzySet, v: StepFuzzySet) -> Fraction:
    """Hausdorff distance between sendographs under ``max(d(x, y), |a - b|)``.

    A sendograph is a finite union of vertical segments ``{x} x [0, u(x)]``;
    the distance from ``(x, a)`` to a segment grows with ``a``, so only
    segment tops need to be compared.
    """
    _check_pair(u, v)
    d = metric_of(u.space)
    hu, hv = u.heights(), v.heights()
    return max(_directed_sendo(hu, hv, d), _directed_sendo(hv, hu, d))


def _hausdorff_table(u: StepFuzzySet, v: StepFuzzySet) -> list[list[Fraction]]:
    return [[hausdorff_distance(c, e) for e in v.cuts] for c in u.cuts]


def _jump_cost(b: Fraction, lo: Fraction, hi: Fraction) -> Fraction:
    if b < lo:
        return lo - b
    if b > hi:
        return b - hi
    return ZERO


RIGHT, DOWN, DIAG = "right", "down", "diag"


def _align(a, b, cell, jump_ok=None):
    """Bottleneck shortest path over piece pairs.

    State ``(i, j)``: piece ``i`` of ``u`` overlaps piece ``j`` of ``v``.
    ``right`` slides v's jump ``j`` into u's piece ``i``; ``down`` lets u's
    jump ``a[i]`` fall inside v's piece ``j``; ``diag`` aligns v's jump ``j``
    with ``a[i]``. A path's cost is the max over its cell costs ``cell(i, j)``
    and its jump displacements. ``cell`` returns None for forbidden cells and
    ``jump_ok`` may veto displacements. Returns (cost, moves) or None.
    """
    n, m = len(a), len(b)
    inf = None
    best = [[inf] * m for _ in range(n)]
    back = [[None] * m for _ in range(n)]
    c0 = cell(0, 0)
    if c0 is None:
        return None
    best[0][0] = c0
    for i in range(n):
        lo = a[i - 1] if i else ZERO
        for j in range(m):
            cur = best[i][j]
            if cur is None:
                continue
            steps = []
            if j + 1 < m:
                steps.append((i, j + 1, RIGHT, _jump_cost(b[j], lo, a[i])))
            if i + 1 < n:
                steps.append((i + 1, j, DOWN, ZERO))
            if i + 1 < n and j + 1 < m:
                steps.append((i + 1, j + 1, DIAG, abs(b[j] - a[i])))
            for ni, nj, move, jc in steps:
                if jump_ok is not None and not jump_ok(jc):
                    continue
                cc = cell(ni, nj)
                if cc is None:
                    continue
                val = max(cur, jc, cc)
                if best[ni][nj] is None or val < best[ni][nj]:
                    best[ni][nj] = val
                    back[ni][nj] = (i, j, move)
    if best[n - 1][m - 1] is None:
        return None
    moves = []
    i, j = n - 1, m - 1
    while (i, j) != (0, 0):
        pi, pj, move = back[i][j]
        moves.append((pi, pj, move))
        i, j = pi, pj
    moves.reverse()
    return best[n - 1][m - 1], moves


@dataclass(frozen=True)
class SkorokhodResult:
    """Value of the Skorokhod distance plus the alignment realizing it.

    ``targets[j]`` is where v's ``j``-th jump level is sent. When two targets
    coincide the infimum is only approached; :meth:`warp` then spreads them
    by an amount controlled by ``slack``.
    """

    value: Fraction
    path: tuple[tuple[int, int], ...]
    sources: tuple[Fraction, ...]
    targets: tuple[Fraction, ...]
    moves: tuple[str, ...] = field(repr=False)
    rows: tuple[int, ...] = field(repr=False)
    u_levels: tuple[Fraction, ...] = field(repr=False)

    @property
    def attained(self) -> bool:
        return all(x < y for x, y in zip(self.targets, self.targets[1:]))

    def warp(self, slack=None) -> TimeWarp:
        if self.attained:
            return time_warp(zip(self.sources, self.targets))
        if slack is None:
            raise ValueError("the infimum is not attained; pass a positive slack")
        slack = as_fraction(slack)
        marks = sorted({ZERO, ONE, *self.u_levels, *self.sources, *self.targets})
        gap = min(y - x for x, y in zip(marks, marks[1:]))
        delta = min(slack, gap) / (2 * (len(self.targets) + 1))
        out = list(self.targets)
        k = 0
        while k < len(out):
            e = k
            while e + 1 < len(out) and self.targets[e + 1] == self.targets[k]:
                e += 1
            if e > k:
                p = self.targets[k]
                group = range(k, e + 1)
                below = [j for j in group if self.moves[j] == RIGHT and self.u_levels[self.rows[j]] == p]
                above = [j for j in group if self.moves[j] == RIGHT and j not in below]
                for r, j in enumerate(reversed(below), start=1):
                    out[j] = p - r * delta
                for r, j in enumerate(above, start=1):
                    out[j] = p + r * delta
            k = e + 1
        return time_warp(zip(self.sources, out))


def d_skorokhod(u: StepFuzzySet, v: StepFuzzySet, *, detail: bool = False):
    """Skorokhod distance ``inf_t max(||t||, d_infty(u, t v))``.

    Only the positions of v's jump levels matter, and for a fixed alignment of
    the two jump sequences the cheapest warp clamps each jump into the level
    interval it must land in; the minimax alignment then gives the exact
    infimum. With ``detail=True`` a :class:`SkorokhodResult` is returned.
    """
    _check_pair(u, v)
    table = _hausdorff_table(u, v)
    a, b = u.levels, v.levels
    cost, moves = _align(a, b, lambda i, j: table[i][j])
    if not detail:
        return cost
    path = [(0, 0)]
    sources, targets, kinds, rows = [], [], [], []
    for i, j, move in moves:
        if move == RIGHT:
            lo = a[i - 1] if i else ZERO
            sources.append(b[j])
            targets.append(min(max(b[j], lo), a[i]))
            kinds.append(RIGHT)
            rows.append(i)
            path.append((i, j + 1))
        elif move == DIAG:
            sources.append(b[j])
            targets.append(a[i])
            kinds.append(DIAG)
            rows.append(i)
            path.append((i + 1, j + 1))
        else:
            path.append((i + 1, j))
    return SkorokhodResult(
        cost, tuple(path), tuple(sources), tuple(targets), tuple(kinds), tuple(rows), tuple(a)
    )


# -- uniformities ---------------------------------------------------------------


def f_entourage_contains(eps, u: StepFuzzySet, v: StepFuzzySet) -> bool:
    """``(u, v)`` in the level-wise entourage of radius ``eps``."""
    _check_pair(u, v)
    ent = Metric(eps)
    return all(k_entourage_contains(ent, u.cuts[i], v.cuts[j]) for i, j in piece_pairs(u.levels, v.levels))


def g_entourage_contains(eps_metric, eps_warp, u: StepFuzzySet, v: StepFuzzySet) -> bool:
    """Is there a warp ``t`` with ``||t|| < eps_warp`` and every
    ``(u_alpha, v_t(alpha))`` in ``K[V_eps_metric]``?"""
    _check_pair(u, v)
    eps_metric, eps_warp = as_fraction(eps_metric), as_fraction(eps_warp)
    table = _hausdorff_table(u, v)
    found = _align(
        u.levels,
        v.levels,
        lambda i, j: ZERO if table[i][j] < eps_metric else None,
        jump_ok=lambda c: c < eps_warp,
    )
    return found is not None


def s_entourage_contains(eps_metric, eps_height, u: StepFuzzySet, v: StepFuzzySet) -> bool:
    """Sendograph entourage: every segment top of one side has a partner
    within ``eps_metric`` horizontally and ``eps_height`` vertically."""
    _check_pair(u, v)
    eps_metric, eps_height = as_fraction(eps_metric), as_fraction(eps_height)
    d = metric_of(u.space)
    hu, hv = u.heights(), v.heights()

    def covered(src, dst):
        return all(any(d(x, y) < eps_metric and a - b < eps_height for y, b in dst.items()) for x, a in src.items())

    return covered(hu, hv) and covered(hv, hu)


# -- partitions -------------------------------------------------------------------


def _as_entourage(w):
    if isinstance(w, (Metric, Relational)):
        return w
    return Metric(w)


def partition_property(u: StepFuzzySet, partition: Sequence, w) -> bool:
    """``(u_{p_k+}, u_{p_{k+1}})`` lies in ``K[W]`` for every consecutive pair."""
    w = _as_entourage(w)
    p = [as_fraction(x) for x in partition]
    return all(k_entourage_contains(w, right_limit_cut(u, lo), alpha_cut(u, hi)) for lo, hi in zip(p, p[1:]))


def level_partition(u: StepFuzzySet, w) -> tuple[Fraction, ...]:
    """A partition of ``[0, 1]`` whose pieces see a ``W``-small cut jump.

    For a step fuzzy set its own jump levels work for every entourage,
    because the cut is constant on each piece.
    """
    w = _as_entourage(w)
    p = u.partition
    if not partition_property(u, p, w):
        raise AssertionError("jump levels failed the partition check")
    return p


def merge_partitions(p: Sequence, q: Sequence) -> tuple[Fraction, ...]:
    p = [as_fraction(x) for x in p]
    q = [as_fraction(x) for x in q]
    for part in (p, q):
        if not part or part[0] != 0 or part[-1] != 1:
            raise ValueError("partitions must start at 0 and end at 1")
    return tuple(sorted(set(p) | set(q)))


# -- sendographs ----------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class SendographSegment:
    """The vertical segment ``{base} x [0, height]``."""

    base: object
    height: Fraction


def sendograph(u: StepFuzzySet) -> frozenset:
    return frozenset(SendographSegment(x, h) for x, h in u.heights().items())


def map_sendograph(f: DynMap, segments: Iterable[SendographSegment]) -> frozenset:
    """Image under ``f x id``; segments landing on one base merge to the tallest."""
    tops: dict = {}
    for s in segments:
        y = apply_map(f, s.base)
        if s.height > tops.get(y, -1):
            tops[y] = s.height
    return frozenset(SendographSegment(y, h) for y, h in tops.items())
