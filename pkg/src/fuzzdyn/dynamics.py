"""Orbits of Zadeh extensions, transitivity witnesses and testers.

The central routine is :func:`fuzzy_witness`: given two step fuzzy sets
``u`` and ``v`` and a radius ``eps``, it builds ``w`` with
``d_infty(u, w) < eps`` and ``d_infty(f^n(w), v) < eps`` for the tent
(or doubling) map. It refines both level partitions, builds one finite
compactum per level from exact inverse-branch preimages with a single
shared iterate, and nests them by taking unions from the top level down.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import lattice
from .compacta import (
    Compactum,
    ball_cover_time,
    ball_preimage,
    diameter,
    iterate_compactum,
    k_entourage_contains,
    Metric,
    union,
)
from .fuzzy import (
    StepFuzzySet,
    alpha_cut,
    canonicalize,
    d_infty,
    d_sendo,
    d_skorokhod,
    iterate_zadeh,
    level_partition,
    merge_partitions,
    zadeh_extend,
)
from .ground import DynMap, NoMixingOracle, SpaceMismatch
from .rational import as_fraction

__all__ = [
    "METRICS",
    "HittingResult",
    "TrialOutcome",
    "WitnessCertificate",
    "SeparationCertificate",
    "HyperspaceExtraction",
    "ConstructionError",
    "orbit_fuzzy",
    "fuzzy_witness",
    "sample_ball",
    "empirical_hitting",
    "run_trial",
    "weak_mixing_check",
    "sendograph_to_hyperspace",
    "isometry_separation_certificate",
]

METRICS = {"infty": d_infty, "skorokhod": d_skorokhod, "sendo": d_sendo}


class ConstructionError(RuntimeError):
    """A self-verifying construction failed its own post-check (a defect)."""

    def __init__(self, detail: str = ""):
        super().__init__("construction failed post-check" + (f": {detail}" if detail else ""))


def _positive(eps, name: str = "eps") -> Fraction:
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError(f"{name} must be positive")
    return eps


def _metric(kind: str):
    try:
        return METRICS[kind]
    except KeyError:
        raise ValueError(f"unknown metric {kind!r}; expected one of {sorted(METRICS)}") from None


def orbit_fuzzy(f: DynMap, u: StepFuzzySet, n: int) -> list[StepFuzzySet]:
    """``[u, f(u), ..., f^n(u)]`` under the Zadeh extension."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if f.space != u.space:
        raise SpaceMismatch()
    out = [u]
    for _ in range(n):
        out.append(zadeh_extend(f, out[-1]))
    return out


# -- constructive witness -------------------------------------------------------------


@dataclass(frozen=True)
class WitnessCertificate:
    """A start ``w`` near ``u`` whose ``n``-th image is near ``v``.

    ``d_source`` and ``d_target`` are level-wise distances recomputed after
    construction; ``d_skorokhod_target`` and ``d_sendo_target`` record the
    same hit in the two coarser metrics. ``per_level_log`` lists
    ``(alpha_i, |K_i|)`` for each level of the refined partition.
    """

    u: StepFuzzySet
    v: StepFuzzySet
    eps: Fraction
    w: StepFuzzySet
    n: int
    d_source: Fraction
    d_target: Fraction
    d_skorokhod_target: Fraction
    d_sendo_target: Fraction
    per_level_log: tuple[tuple[Fraction, int], ...]
    map_kind: str = "tent"


def fuzzy_witness(f: DynMap, u: StepFuzzySet, v: StepFuzzySet, eps) -> WitnessCertificate:
    """Build and verify a transitivity witness for the Zadeh extension.

    Steps:

    1. refine: the merged jump levels of ``u`` and ``v`` give levels
       ``alpha_1 < ... < alpha_m = 1`` on which both cut chains are constant;
    2. one iterate ``n`` (the largest cover time of a closed ``eps/2``-ball
       around any support point of ``u``, at least 1) serves every level;
    3. ``K_i`` holds, for every ``k`` in ``u_{alpha_i}`` and ``l`` in
       ``v_{alpha_i}``, a point of the ball around ``k`` with
       ``f^n(point) == l``, so ``f^n(K_i) == v_{alpha_i}``;
    4. ``w_{alpha_i}`` is the union of ``K_k`` for ``k >= i``, which is a
       decreasing chain and keeps both Hausdorff bounds;
    5. all distances are recomputed from scratch before returning.

    Raises:
        NoMixingOracle: if ``f`` has no constructive mixing oracle.
        ValueError: if ``eps <= 0``.
        ConstructionError: if the recomputed bounds fail.
    """
    if not f.has_mixing_oracle:
        raise NoMixingOracle()
    eps = _positive(eps)
    if not (u.space == v.space == f.space):
        raise SpaceMismatch()
    partition = merge_partitions(level_partition(u, eps), level_partition(v, eps))
    levels = partition[1:]
    radius = eps / 2
    n = max(1, max(ball_cover_time(f, x, radius) for x in u.support.points))
    blocks = []
    for alpha in levels:
        src, dst = alpha_cut(u, alpha), alpha_cut(v, alpha)
        pts = {ball_preimage(f, x, radius, y, n) for x in src.points for y in dst.points}
        blocks.append(Compactum(u.space, tuple(sorted(pts))))
    cuts = [union(blocks[i:]) for i in range(len(blocks))]
    w = canonicalize(StepFuzzySet(u.space, tuple(levels), tuple(cuts)))
    image = iterate_zadeh(f, w, n)
    d_source, d_target = d_infty(u, w), d_infty(image, v)
    d_sk, d_se = d_skorokhod(image, v), d_sendo(image, v)
    if not (d_source < eps and d_target < eps and d_sk < eps and d_se < eps):
        raise ConstructionError(f"d_source={d_source}, d_target={d_target}")
    log = tuple((alpha, len(b)) for alpha, b in zip(levels, blocks))
    return WitnessCertificate(u, v, eps, w, n, d_source, d_target, d_sk, d_se, log, f.kind)


# -- sampling tester -------------------------------------------------------------------


@dataclass(frozen=True)
class TrialOutcome:
    trial: int
    found: bool
    n: int | None
    distance: Fraction
    start_distance: Fraction
    witness_backed: bool


@dataclass(frozen=True)
class HittingResult:
    """Outcome of :func:`empirical_hitting`.

    When ``found``, ``n`` is the smallest iterate that hit over all trials and
    ``achieved_distance`` the distance at that hit; otherwise
    ``achieved_distance`` is the closest approach seen.
    """

    found: bool
    n: int | None
    achieved_distance: Fraction
    metric_kind: str
    trials: tuple[TrialOutcome, ...] = field(default=(), repr=False)


def _random_offset(rng: random.Random, radius: Fraction, grain: int = 64) -> Fraction:
    """A rational in the open interval ``(-radius, radius)``."""
    return radius * Fraction(rng.randint(-(grain - 1), grain - 1), grain)


def _perturb_point(space, x, radius: Fraction, rng: random.Random):
    if space.is_finite:
        d = space.dist
        near = [y for y in space.elements() if d[x][y] < radius]
        return rng.choice(near)
    y = x + _random_offset(rng, radius)
    if space.kind == "circle":
        return space.point(y)
    return min(max(y, Fraction(0)), Fraction(1))


def _perturb_levels(levels: Sequence[Fraction], radius: Fraction, rng: random.Random, attempts: int = 8):
    inner = list(levels[:-1])
    for _ in range(attempts):
        moved = [a + _random_offset(rng, radius) for a in inner]
        chain = [Fraction(0)] + moved + [Fraction(1)]
        if all(p < q for p, q in zip(chain, chain[1:])):
            return tuple(moved) + (Fraction(1),)
    return tuple(levels)


def sample_ball(u: StepFuzzySet, eps, rng: random.Random, metric_kind: str = "infty") -> StepFuzzySet:
    """A random fuzzy set within distance ``eps / 2`` of ``u``.

    Support points move by less than ``eps / 2`` (one displacement per point,
    shared by every cut, so the chain stays nested). For the Skorokhod and
    sendograph metrics jump levels also move by less than ``eps / 2``; the
    level-wise metric is discontinuous in the levels, so they stay put there.
    The distance is re-measured and the sample discarded if it is too large.
    """
    eps = _positive(eps)
    metric = _metric(metric_kind)
    radius = eps / 2
    for _ in range(8):
        moved = {x: _perturb_point(u.space, x, radius, rng) for x in u.support.points}
        cuts = tuple(Compactum(u.space, tuple(sorted({moved[x] for x in c.points}))) for c in u.cuts)
        levels = u.levels if metric_kind == "infty" else _perturb_levels(u.levels, radius, rng)
        w = canonicalize(StepFuzzySet(u.space, levels, cuts))
        if metric(u, w) < radius:
            return w
    return u


def _first_hit(f: DynMap, w: StepFuzzySet, v: StepFuzzySet, eps_v: Fraction, steps: int, metric_kind: str):
    dists = lattice.orbit_distances(f, w, v, steps, metric_kind)
    if dists is None:
        metric = _metric(metric_kind)
        dists = []
        cur = w
        for _ in range(steps):
            cur = zadeh_extend(f, cur)
            dists.append(metric(cur, v))
            if dists[-1] < eps_v:
                break
    for k, d in enumerate(dists, start=1):
        if d < eps_v:
            return k, d
    return None, min(dists)


def run_trial(
    f: DynMap,
    u: StepFuzzySet,
    eps_u,
    v: StepFuzzySet,
    eps_v,
    max_iterate: int,
    metric_kind: str,
    seed: int,
    trial: int,
) -> TrialOutcome:
    """One independent trial of :func:`empirical_hitting`.

    Draws ``w'`` from :func:`sample_ball`; when ``f`` has a mixing oracle the
    start is the constructive witness from ``w'`` towards ``v`` with radius
    ``min(eps_u / 2, eps_v)``, otherwise ``w'`` itself. The orbit is then
    scanned without reference to how the start was built. The generator is
    seeded from ``(seed, trial)`` so trials can run in any order.
    """
    eps_u, eps_v = _positive(eps_u, "eps_u"), _positive(eps_v, "eps_v")
    metric = _metric(metric_kind)
    rng = random.Random(f"{seed}:{trial}")
    w = sample_ball(u, eps_u, rng, metric_kind)
    backed = f.has_mixing_oracle
    if backed:
        w = fuzzy_witness(f, w, v, min(eps_u / 2, eps_v)).w
    start = metric(u, w)
    if not start < eps_u:
        raise ConstructionError(f"sampled start left the ball: {start} >= {eps_u}")
    n, d = _first_hit(f, w, v, eps_v, max_iterate, metric_kind)
    return TrialOutcome(trial, n is not None, n, d, start, backed)


def empirical_hitting(
    f: DynMap,
    u: StepFuzzySet,
    eps_u,
    v: StepFuzzySet,
    eps_v,
    max_iterate: int,
    metric_kind: str = "infty",
    trials: int = 1,
    seed: int = 0,
) -> HittingResult:
    """Search for ``n >= 1`` with ``d(f^n(w), v) < eps_v`` from starts ``w``
    in the ``eps_u``-ball of ``u``; see :func:`run_trial`."""
    if max_iterate < 1:
        raise ValueError("max_iterate must be at least 1")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    outcomes = [run_trial(f, u, eps_u, v, eps_v, max_iterate, metric_kind, seed, t) for t in range(trials)]
    hits = [o for o in outcomes if o.found]
    if hits:
        best = min(hits, key=lambda o: (o.n, o.trial))
        return HittingResult(True, best.n, best.distance, metric_kind, tuple(outcomes))
    closest = min(o.distance for o in outcomes)
    return HittingResult(False, None, closest, metric_kind, tuple(outcomes))


# -- weak mixing -----------------------------------------------------------------------


def _span_covers(f: DynMap, outer, inner) -> bool:
    if f.span_is_full(outer):
        return True
    if f.space.kind == "circle":
        offset = (inner.lo - outer.lo) % 1
        return offset + inner.length <= outer.length
    return outer.lo <= inner.lo and inner.hi <= outer.hi


def weak_mixing_check(f: DynMap, pairs: Sequence[tuple[tuple, tuple]]) -> int:
    """Common iterate ``n`` with ``f^n(U_i) ⊇ V_i`` for every pair.

    ``pairs`` holds ``((lo, hi), (lo, hi))`` interval pairs, at least two.
    For the tent map every ``f^n(U_i)`` is the whole space once ``n`` reaches
    the cover time, so the answer is the largest cover time; the inclusions
    are re-checked by exact interval iteration.
    """
    if not f.has_mixing_oracle:
        raise NoMixingOracle()
    if len(pairs) < 2:
        raise ValueError("weak mixing of order m needs m >= 2 pairs")
    spans = [(f.span(*src), f.span(*dst)) for src, dst in pairs]
    n = 0
    for src, _ in spans:
        s, k = src, 0
        while not f.span_is_full(s):
            s, k = f.image_span(s), k + 1
        n = max(n, k)
    for src, dst in spans:
        s = src
        for _ in range(n):
            s = f.image_span(s)
        if not _span_covers(f, s, dst):
            raise ConstructionError("iterate does not cover a target interval")
    return n


# -- sendograph to hyperspace ---------------------------------------------------------------


@dataclass(frozen=True)
class HyperspaceExtraction:
    """``A = w_0`` together with the two entourage checks."""

    a: Compactum
    near_source: bool
    near_target: bool | None


def sendograph_to_hyperspace(
    f: DynMap, k: Compactum, w: StepFuzzySet, n: int, eps, l: Compactum | None = None
) -> HyperspaceExtraction:
    """Read a hyperspace witness off a fuzzy one.

    ``A`` is the support of ``w``; the result records whether ``A`` is in
    the ``eps``-entourage of ``k`` and, when ``l`` is given, whether
    ``f^n(A)`` is in the ``eps``-entourage of ``l``.
    """
    eps = _positive(eps)
    a = w.support
    ent = Metric(eps)
    near_source = k_entourage_contains(ent, a, k)
    near_target = None if l is None else k_entourage_contains(ent, iterate_compactum(f, a, n), l)
    return HyperspaceExtraction(a, near_source, near_target)


# -- isometries -------------------------------------------------------------------------------


@dataclass(frozen=True)
class SeparationCertificate:
    """``status`` is ``"certified-impossible"`` or ``"inconclusive"``.

    ``gap`` is the difference of the core diameters and ``threshold`` the
    value ``2 eps_u + 2 eps_v`` it must exceed.
    """

    status: str
    gap: Fraction
    threshold: Fraction

    @property
    def impossible(self) -> bool:
        return self.status == "certified-impossible"


def isometry_separation_certificate(f: DynMap, u: StepFuzzySet, eps_u, v: StepFuzzySet, eps_v) -> SeparationCertificate:
    """Certify that no orbit from the ``eps_u``-ball of ``u`` reaches the
    ``eps_v``-ball of ``v``.

    An isometry preserves the diameter of every cut, and cut diameters are
    2-Lipschitz for the Hausdorff distance. So for ``w`` within ``eps_u`` of
    ``u`` every image has core diameter within ``2 eps_u`` of ``diam(u_1)``,
    and it stays more than ``eps_v`` from ``v`` once the core diameters differ
    by more than ``2 eps_u + 2 eps_v``. The argument applies to the level-wise
    and Skorokhod metrics (warps fix level 1), not to the sendograph metric.
    """
    if not f.is_isometry:
        raise ValueError("certificate requires an isometry")
    eps_u, eps_v = _positive(eps_u, "eps_u"), _positive(eps_v, "eps_v")
    if not (u.space == v.space == f.space):
        raise SpaceMismatch()
    gap = abs(diameter(u.core) - diameter(v.core))
    threshold = 2 * eps_u + 2 * eps_v
    status = "certified-impossible" if gap > threshold else "inconclusive"
    return SeparationCertificate(status, gap, threshold)

