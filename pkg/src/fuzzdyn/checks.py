"""Seeded property suites behind ``fuzzdyn check``.

Each property draws a random instance from its own generator and returns
whether the law held exactly. A suite runs every property ``count`` times
and reports pass/fail counts; the first counterexample is kept for the
report.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import generate as gen
from . import lattice
from .compacta import (
    Compactum,
    FiniteUniformity,
    Metric,
    Relational,
    ball_cover_time,
    compact_witness,
    diameter,
    hausdorff_distance,
    image_compactum,
    iterate_compactum,
    k_entourage_contains,
    union,
)
from .dynamics import (
    empirical_hitting,
    fuzzy_witness,
    isometry_separation_certificate,
    weak_mixing_check,
)
from .fuzzy import (
    alpha_cut,
    characteristic,
    d_infty,
    d_sendo,
    d_skorokhod,
    f_entourage_contains,
    g_entourage_contains,
    iterate_zadeh,
    level_partition,
    map_sendograph,
    merge_partitions,
    partition_property,
    s_entourage_contains,
    sendograph,
    warp_apply,
    zadeh_extend,
    zadeh_pointwise,
    membership,
)
from .ground import CIRCLE, UNIT_INTERVAL, finite_table, interval_cover_time, iterate_map, tent

__all__ = ["SUITES", "PropertyReport", "run_suite"]

Property = Callable[[random.Random], bool]


@dataclass
class PropertyReport:
    name: str
    passed: int = 0
    failed: int = 0
    first_failure: str | None = None

    @property
    def ok(self) -> bool:
        return self.failed == 0


def _space(rng: random.Random):
    k = rng.randrange(3)
    if k == 0:
        return UNIT_INTERVAL
    if k == 1:
        return CIRCLE
    return gen.random_finite_space(rng, rng.randint(1, 5))


def _fuzzy(rng, space=UNIT_INTERVAL):
    return gen.random_fuzzy(rng, space, max_levels=4, max_points=6)


# -- metrics -----------------------------------------------------------------------------


def _axioms(d, x, y, z) -> bool:
    return (
        d(x, x) == 0
        and d(x, y) >= 0
        and d(x, y) == d(y, x)
        and (d(x, y) == 0) == (x == y)
        and d(x, z) <= d(x, y) + d(y, z)
    )


def hausdorff_axioms(rng) -> bool:
    s = _space(rng)
    a, b, c = (gen.random_compactum(rng, s) for _ in range(3))
    return _axioms(hausdorff_distance, a, b, c)


def infty_axioms(rng) -> bool:
    s = _space(rng)
    return _axioms(d_infty, _fuzzy(rng, s), _fuzzy(rng, s), _fuzzy(rng, s))


def sendo_axioms(rng) -> bool:
    s = _space(rng)
    return _axioms(d_sendo, _fuzzy(rng, s), _fuzzy(rng, s), _fuzzy(rng, s))


def skorokhod_axioms(rng) -> bool:
    s = _space(rng)
    return _axioms(d_skorokhod, _fuzzy(rng, s), _fuzzy(rng, s), _fuzzy(rng, s))


def metric_ordering(rng) -> bool:
    s = _space(rng)
    u, v = _fuzzy(rng, s), _fuzzy(rng, s)
    d0, di, ds = d_skorokhod(u, v), d_infty(u, v), d_sendo(u, v)
    return d0 <= di and ds <= di and ds <= 2 * d0 and ds <= d0


def skorokhod_warp_realizes(rng) -> bool:
    u, v = _fuzzy(rng), _fuzzy(rng)
    res = d_skorokhod(u, v, detail=True)
    if not res.attained:
        return True
    t = res.warp()
    return max(t.norm, d_infty(u, warp_apply(t, v))) == res.value


def kernels_agree(rng) -> bool:
    s = _space(rng)
    u, v = _fuzzy(rng, s), _fuzzy(rng, s)
    exact = {"infty": d_infty(u, v), "skorokhod": d_skorokhod(u, v), "sendo": d_sendo(u, v)}
    return all(
        lattice.lattice_distance(u, v, kind, backend=backend) == value
        for kind, value in exact.items()
        for backend in ("numba", "numpy")
    )


def diameter_lipschitz(rng) -> bool:
    s = _space(rng)
    a, b = gen.random_compactum(rng, s), gen.random_compactum(rng, s)
    return abs(diameter(a) - diameter(b)) <= 2 * hausdorff_distance(a, b)


# -- zadeh ---------------------------------------------------------------------------------


def _space_and_map(rng):
    s = _space(rng)
    return s, gen.random_map(rng, s)


def level_identity(rng) -> bool:
    s, f = _space_and_map(rng)
    u = _fuzzy(rng, s)
    fu = zadeh_extend(f, u)
    alphas = {0, *u.levels, *(a / 2 for a in u.levels)}
    return all(alpha_cut(fu, a) == image_compactum(f, alpha_cut(u, a)) for a in alphas)


def characteristic_law(rng) -> bool:
    s, f = _space_and_map(rng)
    k = gen.random_compactum(rng, s)
    return zadeh_extend(f, characteristic(k)) == characteristic(image_compactum(f, k))


def warp_commutation(rng) -> bool:
    s, f = _space_and_map(rng)
    u, t = _fuzzy(rng, s), gen.random_warp(rng)
    return zadeh_extend(f, warp_apply(t, u)) == warp_apply(t, zadeh_extend(f, u))


def iterate_law(rng) -> bool:
    s = gen.random_finite_space(rng, rng.randint(1, 4))
    f = gen.random_finite_map(rng, s)
    n = rng.randint(0, 4)
    fn = finite_table(s, [iterate_map(f, x, n) for x in s.elements()])
    u = _fuzzy(rng, s)
    return iterate_zadeh(f, u, n) == zadeh_extend(fn, u)


def pointwise_sup(rng) -> bool:
    s, f = _space_and_map(rng)
    u = _fuzzy(rng, s)
    fu = zadeh_extend(f, u)
    ys = set(fu.support.points)
    if s.is_finite:
        ys |= set(s.elements())
    return all(zadeh_pointwise(f, u, y) == membership(fu, y) for y in ys)


def sendograph_lemma(rng) -> bool:
    s, f = _space_and_map(rng)
    u = _fuzzy(rng, s)
    return sendograph(zadeh_extend(f, u)) == map_sendograph(f, sendograph(u))


def isometry_invariance(rng) -> bool:
    f = gen.random_rotation(rng)
    u, v = _fuzzy(rng, CIRCLE), _fuzzy(rng, CIRCLE)
    return d_infty(zadeh_extend(f, u), zadeh_extend(f, v)) == d_infty(u, v)


# -- entourages ------------------------------------------------------------------------------


def k_entourage_is_hausdorff(rng) -> bool:
    s = _space(rng)
    a, b = gen.random_compactum(rng, s), gen.random_compactum(rng, s)
    eps = gen.random_rational(rng, 0, 1)
    if eps == 0:
        return True
    return k_entourage_contains(Metric(eps), a, b) == (hausdorff_distance(a, b) < eps)


def f_entourage_is_infty(rng) -> bool:
    u, v = _fuzzy(rng), _fuzzy(rng)
    eps = gen.random_rational(rng, 0, 1)
    return eps == 0 or f_entourage_contains(eps, u, v) == (d_infty(u, v) < eps)


def g_entourage_is_skorokhod(rng) -> bool:
    u, v = _fuzzy(rng), _fuzzy(rng)
    eps = gen.random_rational(rng, 0, 1)
    return eps == 0 or g_entourage_contains(eps, eps, u, v) == (d_skorokhod(u, v) < eps)


def s_entourage_is_sendo(rng) -> bool:
    u, v = _fuzzy(rng), _fuzzy(rng)
    eps = gen.random_rational(rng, 0, 1)
    return eps == 0 or s_entourage_contains(eps, eps, u, v) == (d_sendo(u, v) < eps)


def random_uniformity(rng) -> FiniteUniformity:
    """A uniformity base on a small finite set: the diagonal, an equivalence
    relation and the full relation (a chain closed under the base axioms)."""
    size = rng.randint(1, 4)
    s = gen.random_finite_space(rng, size)
    labels = [rng.randrange(size) for _ in range(size)]
    equiv = {(x, y) for x in range(size) for y in range(size) if labels[x] == labels[y]}
    full = {(x, y) for x in range(size) for y in range(size)}
    return FiniteUniformity.of(s, [set(), equiv, full])


def monotonicity_law(rng) -> bool:
    un = random_uniformity(rng)
    s = un.space
    ent = Relational(un, rng.randrange(len(un.base)))
    c = gen.random_compactum(rng, s)
    b = Compactum(s, tuple(x for x in c.points if rng.random() < 0.7) or c.points[:1])
    a = Compactum(s, tuple(x for x in b.points if rng.random() < 0.7) or b.points[:1])
    if not k_entourage_contains(ent, a, c):
        return True
    return k_entourage_contains(ent, a, b) and k_entourage_contains(ent, b, c)


def union_law(rng) -> bool:
    un = random_uniformity(rng)
    s = un.space
    ent = Relational(un, rng.randrange(len(un.base)))
    a, f_, g, h = (gen.random_compactum(rng, s) for _ in range(4))
    if not (k_entourage_contains(ent, a, f_) and k_entourage_contains(ent, g, h)):
        return True
    return k_entourage_contains(ent, union((a, g)), union((f_, h)))


def partition_and_refinement(rng) -> bool:
    u = _fuzzy(rng)
    eps = gen.random_rational(rng, 0, 1) or 1
    p = level_partition(u, eps)
    q = merge_partitions(p, (0,) + gen.random_levels(rng, rng.randint(1, 4)))
    return partition_property(u, p, eps) and partition_property(u, q, eps)


# -- witnesses ----------------------------------------------------------------------------------


def witness_reverifies(rng) -> bool:
    u, v = _fuzzy(rng), _fuzzy(rng)
    eps = Fraction(1, rng.choice((4, 16, 64)))
    cert = fuzzy_witness(tent(), u, v, eps)
    image = iterate_zadeh(tent(), cert.w, cert.n)
    return (
        cert.n >= 1
        and d_infty(u, cert.w) < eps
        and d_infty(image, v) < eps
        and d_skorokhod(image, v) < eps
        and d_sendo(image, v) < eps
    )


def compact_witness_reverifies(rng) -> bool:
    k, l = gen.random_compactum(rng, UNIT_INTERVAL), gen.random_compactum(rng, UNIT_INTERVAL)
    eps = gen.random_rational(rng, 0, 1) or 1
    a, n = compact_witness(tent(), k, l, eps)
    return n >= 1 and hausdorff_distance(a, k) < eps and hausdorff_distance(iterate_compactum(tent(), a, n), l) < eps


def cover_time_antitone(rng) -> bool:
    f = tent()
    c, d = sorted((gen.random_rational(rng), gen.random_rational(rng)))
    if c == d:
        return True
    a, b = sorted((gen.random_rational(rng, c, d), gen.random_rational(rng, c, d)))
    if a == b:
        return True
    return interval_cover_time(f, a, b) >= interval_cover_time(f, c, d)


def weak_mixing_covers(rng) -> bool:
    f = tent()
    pairs = []
    for _ in range(rng.randint(2, 4)):
        lo, hi = sorted((gen.random_rational(rng), gen.random_rational(rng)))
        if lo == hi:
            return True
        pairs.append(((lo, hi), (0, 1)))
    n = weak_mixing_check(f, pairs)
    return n == max(interval_cover_time(f, *src) for src, _ in pairs)


def certificates_hold(rng) -> bool:
    f = gen.random_rotation(rng)
    u, v = _fuzzy(rng, CIRCLE), _fuzzy(rng, CIRCLE)
    eps = Fraction(1, 64)
    cert = isometry_separation_certificate(f, u, eps, v, eps)
    if not cert.impossible:
        return True
    hit = empirical_hitting(f, u, eps, v, eps, 200, "infty", trials=2, seed=rng.randrange(2**31))
    return not hit.found


def ball_cover_matches_interval(rng) -> bool:
    x = gen.random_rational(rng)
    r = gen.random_rational(rng, 0, 1) or 1
    f = tent()
    lo, hi = max(x - r, 0), min(x + r, 1)
    return ball_cover_time(f, x, r) == interval_cover_time(f, lo, hi)


SUITES: dict[str, list[tuple[str, Property]]] = {
    "metrics": [
        ("hausdorff metric axioms", hausdorff_axioms),
        ("level-wise metric axioms", infty_axioms),
        ("sendograph metric axioms", sendo_axioms),
        ("skorokhod metric axioms", skorokhod_axioms),
        ("metric ordering", metric_ordering),
        ("skorokhod warp realizes value", skorokhod_warp_realizes),
        ("lattice kernels agree", kernels_agree),
        ("diameter is 2-lipschitz", diameter_lipschitz),
    ],
    "zadeh": [
        ("level identity", level_identity),
        ("characteristic law", characteristic_law),
        ("warp commutation", warp_commutation),
        ("iterate law", iterate_law),
        ("pointwise sup agrees", pointwise_sup),
        ("sendograph lemma", sendograph_lemma),
        ("isometry invariance", isometry_invariance),
    ],
    "entourage": [
        ("hyperspace entourage is hausdorff ball", k_entourage_is_hausdorff),
        ("level-wise entourage is d_infty ball", f_entourage_is_infty),
        ("warp entourage is skorokhod ball", g_entourage_is_skorokhod),
        ("sendograph entourage is d_S ball", s_entourage_is_sendo),
        ("monotonicity law", monotonicity_law),
        ("union law", union_law),
        ("partition and refinement", partition_and_refinement),
    ],
    "witness": [
        ("fuzzy witness re-verifies", witness_reverifies),
        ("compact witness re-verifies", compact_witness_reverifies),
        ("cover time antitone", cover_time_antitone),
        ("ball cover time", ball_cover_matches_interval),
        ("weak mixing covers", weak_mixing_covers),
        ("separation certificates hold", certificates_hold),
    ],
}

DEFAULT_COUNTS = {"metrics": 200, "zadeh": 200, "entourage": 200, "witness": 40}


def run_suite(name: str, seed: int, count: int | None = None) -> list[PropertyReport]:
    """Run every property of suite ``name`` ``count`` times."""
    if name not in SUITES:
        raise KeyError(name)
    count = DEFAULT_COUNTS[name] if count is None else count
    reports = []
    for label, prop in SUITES[name]:
        rep = PropertyReport(label)
        for k in range(count):
            rng = random.Random(f"{seed}:{label}:{k}")
            try:
                ok = prop(rng)
                why = "law violated"
            except Exception as exc:  # a crash is a failure of the property
                ok, why = False, f"{type(exc).__name__}: {exc}"
            if ok:
                rep.passed += 1
            else:
                rep.failed += 1
                rep.first_failure = rep.first_failure or f"case {k}: {why}"
        reports.append(rep)
    return reports
