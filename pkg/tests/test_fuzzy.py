from fractions import Fraction as F

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from fuzzdyn import (
    CIRCLE,
    UNIT_INTERVAL,
    FuzzySetError,
    SendographSegment,
    SpaceMismatch,
    StepFuzzySet,
    TimeWarp,
    alpha_cut,
    canonicalize,
    characteristic,
    compactum,
    d_infty,
    d_sendo,
    d_skorokhod,
    f_entourage_contains,
    fuzzy_set,
    g_entourage_contains,
    hausdorff_distance,
    identity_map,
    identity_warp,
    image_compactum,
    level_partition,
    map_sendograph,
    membership,
    merge_partitions,
    partition_property,
    right_limit_cut,
    s_entourage_contains,
    sendograph,
    tent,
    time_warp,
    validate,
    warp_apply,
    warp_norm,
    zadeh_extend,
    zadeh_pointwise,
)

from strategies import compacta, fuzzy_sets, unit_rationals

I = UNIT_INTERVAL


def K(*pts):
    return compactum(I, pts)


def chi(*pts):
    return characteristic(K(*pts))


# u(0)=1, u(1)=3/5 and v(0)=1, v(1)=1/2
HEIGHT_U = fuzzy_set(I, [F(3, 5), 1], [[0, 1], [0]])
HEIGHT_V = fuzzy_set(I, [F(1, 2), 1], [[0, 1], [0]])


# -- representation ----------------------------------------------------------------------


def test_characteristic_validates():
    assert validate(chi(0, F(1, 2))).ok


def test_cuts_must_decrease():
    with pytest.raises(FuzzySetError, match="cuts not decreasing"):
        fuzzy_set(I, [0, F(1, 2), 1], [[0], [0, 1]])
    raw = StepFuzzySet(I, (F(1, 2), F(1)), (K(0), K(0, 1)))
    report = validate(raw)
    assert not report.ok and "cuts not decreasing" in report.violations


def test_empty_top_cut_is_not_normal():
    with pytest.raises(FuzzySetError, match="not normal"):
        fuzzy_set(I, [F(1, 2), 1], [[0], []])


def test_adjacent_equal_cuts_merge():
    u = fuzzy_set(I, [0, F(1, 2), 1], [[0, 1], [0, 1]])
    assert u.partition == (0, 1)
    assert canonicalize(u) == u


def test_levels_must_end_at_one():
    with pytest.raises(FuzzySetError, match="top level"):
        fuzzy_set(I, [F(1, 2)], [[0]])


@given(fuzzy_sets())
def test_canonicalize_is_idempotent(u):
    assert canonicalize(canonicalize(u)) == canonicalize(u)
    assert validate(u).canonical == u


# -- cuts --------------------------------------------------------------------------------------


@given(compacta(), unit_rationals())
def test_characteristic_cuts(k, alpha):
    assert alpha_cut(characteristic(k), alpha) == k


def test_alpha_cut_uses_left_closed_pieces():
    u = fuzzy_set(I, [F(1, 2), 1], [[0, 1], [0]])
    assert alpha_cut(u, F(1, 2)) == K(0, 1)
    assert alpha_cut(u, F(3, 4)) == K(0)
    assert alpha_cut(u, 0) == K(0, 1)
    with pytest.raises(ValueError):
        alpha_cut(u, F(3, 2))


def test_right_limit_cut():
    u = fuzzy_set(I, [F(1, 3), F(2, 3), 1], [[0, 1, F(1, 2)], [0, 1], [0]])
    assert right_limit_cut(u, F(1, 3)) == K(0, 1)
    assert right_limit_cut(u, 0) == u.support
    assert right_limit_cut(u, F(1, 2)) == K(0, 1)
    with pytest.raises(ValueError):
        right_limit_cut(u, 1)


def test_membership_reads_heights():
    assert membership(HEIGHT_U, 1) == F(3, 5)
    assert membership(HEIGHT_U, 0) == 1
    assert membership(HEIGHT_U, F(1, 2)) == 0


# -- Zadeh extension -------------------------------------------------------------------------------


def test_zadeh_examples():
    assert zadeh_extend(tent(), chi(F(1, 4), 1)) == chi(F(1, 2), 0)
    u = fuzzy_set(I, [F(1, 2), 1], [[F(1, 4), 1], [F(1, 4)]])
    fu = zadeh_extend(tent(), u)
    assert fu.cuts == (K(F(1, 2), 0), K(F(1, 2)))
    assert zadeh_extend(identity_map(I), u) == u


@given(fuzzy_sets(), st.lists(unit_rationals(), max_size=5))
def test_zadeh_matches_pointwise_sup(u, ys):
    f = tent()
    fu = zadeh_extend(f, u)
    for y in set(ys) | set(fu.support.points):
        assert membership(fu, y) == zadeh_pointwise(f, u, y)


@given(fuzzy_sets(), unit_rationals())
def test_zadeh_level_identity(u, alpha):
    assert alpha_cut(zadeh_extend(tent(), u), alpha) == image_compactum(tent(), alpha_cut(u, alpha))


# -- warps ----------------------------------------------------------------------------------------------


def test_warp_examples():
    assert warp_norm(identity_warp()) == 0
    t = time_warp([(F(1, 2), F(3, 4))])
    assert warp_norm(t) == F(1, 4)
    assert warp_norm(t.inverse()) == warp_norm(t)
    assert t(F(1, 4)) == F(3, 8)


def test_warp_apply_moves_levels():
    v = fuzzy_set(I, [F(1, 2), 1], [[0, 1], [0]])
    t = time_warp([(F(1, 2), F(3, 5))])
    tv = warp_apply(t, v)
    assert tv.levels == (F(3, 5), 1) and tv.cuts == v.cuts
    assert warp_apply(identity_warp(), v) == v
    assert warp_apply(t.inverse(), tv) == v


def test_warp_must_be_increasing():
    with pytest.raises(ValueError):
        TimeWarp(((0, 0), (F(1, 2), F(1, 2)), (F(1, 3), F(2, 3)), (1, 1)))


@st.composite
def warps(draw):
    k = draw(st.integers(0, 3))
    s = sorted(draw(st.sets(unit_rationals().filter(lambda q: 0 < q < 1), min_size=k, max_size=k)))
    t = sorted(draw(st.sets(unit_rationals().filter(lambda q: 0 < q < 1), min_size=k, max_size=k)))
    return time_warp(list(zip(s, t)))


@given(warps(), unit_rationals())
def test_warp_norm_bounds_displacement(t, alpha):
    assert abs(t(alpha) - alpha) <= warp_norm(t)


@given(warps(), fuzzy_sets())
def test_warp_relabels_membership(t, v):
    tv = warp_apply(t, v)
    for x in v.support.points:
        assert membership(tv, x) == t(membership(v, x))


# -- metrics ----------------------------------------------------------------------------------------


def test_d_infty_examples():
    assert d_infty(HEIGHT_U, HEIGHT_U) == 0
    assert d_infty(chi(F(1, 4)), chi(F(3, 4))) == F(1, 2)
    v = fuzzy_set(I, [F(1, 2), 1], [[0, 1], [0]])
    assert d_infty(chi(0), v) == 1


def test_d_sendo_examples():
    assert d_sendo(HEIGHT_U, HEIGHT_U) == 0
    assert d_sendo(chi(F(1, 4)), chi(F(3, 4))) == F(1, 2)
    assert d_sendo(HEIGHT_U, HEIGHT_V) == F(1, 10)


def test_d_skorokhod_examples():
    assert d_skorokhod(HEIGHT_U, HEIGHT_U) == 0
    assert d_skorokhod(chi(0, 1), chi(F(1, 2))) == F(1, 2)
    res = d_skorokhod(HEIGHT_U, HEIGHT_V, detail=True)
    assert res.value == F(1, 10)
    t = res.warp()
    assert t(F(1, 2)) == F(3, 5)
    assert max(warp_norm(t), d_infty(HEIGHT_U, warp_apply(t, HEIGHT_V))) == F(1, 10)


def test_metrics_reject_mixed_spaces():
    for d in (d_infty, d_sendo, d_skorokhod):
        with pytest.raises(SpaceMismatch):
            d(chi(0), characteristic(compactum(CIRCLE, [0])))


def _sendo_brute(u, v, grid=16):
    # Hausdorff distance between sampled segment sets under the max metric;
    # heights on the 1/grid lattice plus the exact segment tops
    def points(w):
        out = []
        for x, h in w.heights().items():
            hs = {F(k, grid) for k in range(grid + 1) if F(k, grid) <= h} | {h}
            out += [(x, a) for a in hs]
        return out

    def dist(p, q):
        return max(abs(p[0] - q[0]), abs(p[1] - q[1]))

    pu, pv = points(u), points(v)
    return max(
        max(min(dist(p, q) for q in pv) for p in pu),
        max(min(dist(p, q) for p in pu) for q in pv),
    )


@given(fuzzy_sets(max_levels=3, max_points=3), fuzzy_sets(max_levels=3, max_points=3))
def test_d_sendo_matches_sampled_segments(u, v):
    assume(all(h.denominator in (1, 2, 4, 8, 16) for h in {*u.levels, *v.levels}))
    assert d_sendo(u, v) == _sendo_brute(u, v)


@given(fuzzy_sets(), fuzzy_sets())
def test_metric_ordering(u, v):
    d0, di, ds = d_skorokhod(u, v), d_infty(u, v), d_sendo(u, v)
    assert d0 <= di
    assert ds <= di
    assert ds <= 2 * d0


@given(fuzzy_sets(), fuzzy_sets())
def test_skorokhod_alignment_realizes_value(u, v):
    res = d_skorokhod(u, v, detail=True)
    slack = F(1, 1000)
    t = res.warp(slack)
    achieved = max(warp_norm(t), d_infty(u, warp_apply(t, v)))
    if res.attained:
        assert achieved == res.value
    else:
        assert res.value <= achieved <= res.value + slack


def test_skorokhod_infimum_not_attained():
    # the optimal alignment sends both of v's jumps onto u's jump at 1/2, which
    # no increasing warp does; the reported warp separates them by the slack
    u = fuzzy_set(I, [F(1, 2), 1], [[F(3, 5), F(11, 12)], [F(11, 12)]])
    v = fuzzy_set(
        I, [F(1, 2), F(7, 10), 1], [[0, F(1, 2), F(2, 3), F(7, 8)], [0, F(1, 2), F(2, 3)], [F(2, 3)]]
    )
    res = d_skorokhod(u, v, detail=True)
    assert not res.attained and res.value == F(3, 5)
    with pytest.raises(ValueError, match="not attained"):
        res.warp()
    for slack in (F(1, 10), F(1, 1000)):
        t = res.warp(slack)
        achieved = max(warp_norm(t), d_infty(u, warp_apply(t, v)))
        assert res.value <= achieved <= res.value + slack


@given(fuzzy_sets(), fuzzy_sets(), fuzzy_sets())
def test_skorokhod_triangle(u, v, w):
    assert d_skorokhod(u, w) <= d_skorokhod(u, v) + d_skorokhod(v, w)


# -- entourages ----------------------------------------------------------------------------------------


def test_f_entourage_examples():
    assert f_entourage_contains(F(1, 100), HEIGHT_U, HEIGHT_U)
    assert not f_entourage_contains(1, chi(0), chi(1))
    assert f_entourage_contains(F(51, 100), chi(F(1, 4)), chi(F(3, 4)))


def test_g_entourage_examples():
    assert g_entourage_contains(F(1, 100), F(1, 100), HEIGHT_U, HEIGHT_U)
    assert g_entourage_contains(F(1, 100), F(1, 8), HEIGHT_U, HEIGHT_V)
    assert not g_entourage_contains(F(1, 2), F(1, 100), HEIGHT_U, HEIGHT_V)


def test_s_entourage_examples():
    assert s_entourage_contains(F(1, 100), F(1, 100), HEIGHT_U, HEIGHT_U)
    assert s_entourage_contains(F(1, 2), F(1, 100), chi(0), chi(F(1, 4)))
    assert s_entourage_contains(F(1, 100), F(1, 8), HEIGHT_U, HEIGHT_V)
    assert not s_entourage_contains(F(1, 100), F(1, 20), HEIGHT_U, HEIGHT_V)


@given(fuzzy_sets(), fuzzy_sets(), unit_rationals())
def test_entourages_are_metric_balls(u, v, eps):
    assume(eps > 0)
    assert f_entourage_contains(eps, u, v) == (d_infty(u, v) < eps)
    assert g_entourage_contains(eps, eps, u, v) == (d_skorokhod(u, v) < eps)
    assert s_entourage_contains(eps, eps, u, v) == (d_sendo(u, v) < eps)


# -- partitions -------------------------------------------------------------------------------------------


def test_level_partition_examples():
    assert level_partition(chi(0), F(1, 2)) == (0, 1)
    u = fuzzy_set(I, [F(1, 3), F(2, 3), 1], [[0, 1, F(1, 2)], [0, 1], [0]])
    assert level_partition(u, F(1, 10**6)) == (0, F(1, 3), F(2, 3), 1)


def test_merge_partitions_examples():
    assert merge_partitions((0, 1), (0, F(1, 2), 1)) == (0, F(1, 2), 1)
    assert merge_partitions((0, F(1, 3), 1), (0, F(1, 2), 1)) == (0, F(1, 3), F(1, 2), 1)
    p = (0, F(1, 5), 1)
    assert merge_partitions(p, p) == p
    with pytest.raises(ValueError):
        merge_partitions((F(1, 2), 1), (0, 1))


@given(fuzzy_sets(), st.lists(unit_rationals(), max_size=4), unit_rationals())
def test_refinement_keeps_partition_property(u, extra, eps):
    assume(eps > 0)
    p = level_partition(u, eps)
    q = merge_partitions(p, (0, *extra, 1))
    assert partition_property(u, q, eps)


def test_coarse_partition_fails_property():
    u = fuzzy_set(I, [F(1, 2), 1], [[0, 1], [0]])
    assert not partition_property(u, (0, 1), F(1, 2))


# -- sendographs ------------------------------------------------------------------------------------------


def test_sendograph_examples():
    assert sendograph(chi(F(1, 3))) == {SendographSegment(F(1, 3), 1)}
    assert sendograph(HEIGHT_V) == {SendographSegment(0, 1), SendographSegment(1, F(1, 2))}


@given(fuzzy_sets())
def test_sendograph_lemma(u):
    assert sendograph(zadeh_extend(tent(), u)) == map_sendograph(tent(), sendograph(u))


def test_hausdorff_of_characteristics():
    a, b = K(0, F(1, 3)), K(F(1, 2))
    assert d_skorokhod(characteristic(a), characteristic(b)) == hausdorff_distance(a, b)
