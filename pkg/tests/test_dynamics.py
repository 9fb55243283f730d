import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzdyn import (
    CIRCLE,
    UNIT_INTERVAL,
    ConstructionError,
    NoMixingOracle,
    characteristic,
    compactum,
    d_infty,
    d_sendo,
    d_skorokhod,
    doubling,
    empirical_hitting,
    fuzzy_set,
    fuzzy_witness,
    hausdorff_distance,
    isometry_separation_certificate,
    iterate_zadeh,
    orbit_fuzzy,
    rotation,
    run_trial,
    s_entourage_contains,
    sample_ball,
    sendograph_to_hyperspace,
    tent,
    weak_mixing_check,
    zadeh_extend,
)
from fuzzdyn.generate import random_fuzzy

from strategies import compacta, fuzzy_sets, unit_rationals

I = UNIT_INTERVAL


def chi(*pts, space=I):
    return characteristic(compactum(space, pts))


THREE_LEVELS = fuzzy_set(I, [F(1, 4), F(1, 2), 1], [[0, F(1, 3), F(3, 4), 1], [F(1, 3), F(3, 4)], [F(1, 3)]])


# -- orbits ---------------------------------------------------------------------------------------------


def test_orbit_examples():
    assert orbit_fuzzy(tent(), THREE_LEVELS, 0) == [THREE_LEVELS]
    assert orbit_fuzzy(tent(), chi(F(1, 2)), 2) == [chi(F(1, 2)), chi(1), chi(0)]


@given(fuzzy_sets(max_levels=3, max_points=4), st.integers(0, 4))
def test_orbit_end_is_repeated_extension(u, n):
    orbit = orbit_fuzzy(tent(), u, n)
    assert len(orbit) == n + 1
    cur = u
    for _ in range(n):
        cur = zadeh_extend(tent(), cur)
    assert orbit[-1] == cur == iterate_zadeh(tent(), u, n)


def test_orbit_rejects_negative_length():
    with pytest.raises(ValueError):
        orbit_fuzzy(tent(), chi(0), -1)


@given(fuzzy_sets(CIRCLE, max_levels=3, max_points=4), fuzzy_sets(CIRCLE, max_levels=3, max_points=4), unit_rationals())
def test_rotation_preserves_level_distance(u, v, theta):
    f = rotation(theta)
    assert d_infty(zadeh_extend(f, u), zadeh_extend(f, v)) == d_infty(u, v)


# -- witnesses ---------------------------------------------------------------------------------------------


def test_witness_point_example():
    cert = fuzzy_witness(tent(), chi(F(1, 2)), chi(F(1, 4)), F(1, 8))
    assert cert.n >= 1
    assert cert.d_source < F(1, 8) and cert.d_target < F(1, 8)
    assert d_infty(cert.u, cert.w) == cert.d_source
    assert d_infty(iterate_zadeh(tent(), cert.w, cert.n), cert.v) == cert.d_target


def test_witness_self_target():
    cert = fuzzy_witness(tent(), THREE_LEVELS, THREE_LEVELS, F(1, 4))
    assert cert.n >= 1
    assert [a for a, _ in cert.per_level_log][-1] == 1
    assert all(size >= 1 for _, size in cert.per_level_log)


def test_witness_errors():
    with pytest.raises(NoMixingOracle, match="map does not expose a mixing oracle"):
        fuzzy_witness(rotation(F(1, 3)), chi(0, space=CIRCLE), chi(F(1, 2), space=CIRCLE), F(1, 8))
    with pytest.raises(ValueError):
        fuzzy_witness(tent(), chi(0), chi(1), 0)
    assert issubclass(ConstructionError, RuntimeError)
    assert "construction failed post-check" in str(ConstructionError())


@settings(max_examples=60)
@given(fuzzy_sets(max_levels=3, max_points=4), fuzzy_sets(max_levels=3, max_points=4), st.sampled_from([F(1, 2), F(1, 7), F(1, 32)]))
def test_witness_reverifies_independently(u, v, eps):
    cert = fuzzy_witness(tent(), u, v, eps)
    image = orbit_fuzzy(tent(), cert.w, cert.n)[-1]
    assert d_infty(u, cert.w) < eps
    assert d_infty(image, v) < eps
    assert d_skorokhod(image, v) < eps
    assert d_sendo(image, v) < eps


@settings(max_examples=30)
@given(fuzzy_sets(CIRCLE, max_levels=3, max_points=3), fuzzy_sets(CIRCLE, max_levels=3, max_points=3))
def test_witness_for_doubling_on_circle(u, v):
    cert = fuzzy_witness(doubling(), u, v, F(1, 16))
    assert d_infty(u, cert.w) < F(1, 16)
    assert d_infty(iterate_zadeh(doubling(), cert.w, cert.n), v) < F(1, 16)


# -- sampling tester ------------------------------------------------------------------------------------------


@pytest.mark.parametrize("kind", ["infty", "skorokhod", "sendo"])
def test_sample_ball_stays_in_half_ball(kind):
    rng = random.Random(5)
    metric = {"infty": d_infty, "skorokhod": d_skorokhod, "sendo": d_sendo}[kind]
    for _ in range(50):
        u = random_fuzzy(rng, I)
        w = sample_ball(u, F(1, 8), rng, kind)
        assert metric(u, w) < F(1, 16)


def test_hitting_tent_example():
    res = empirical_hitting(tent(), chi(F(1, 2)), F(1, 8), chi(F(1, 4)), F(1, 8), 64, "infty", trials=32, seed=7)
    assert res.found and 1 <= res.n <= 64 and res.achieved_distance < F(1, 8)
    assert len(res.trials) == 32 and all(t.found for t in res.trials)


def test_hitting_rotation_never_hits():
    v = fuzzy_set(CIRCLE, [F(1, 2), 1], [[0, F(1, 4), F(1, 2)], [0, F(1, 2)]])
    u = chi(0, space=CIRCLE)
    res = empirical_hitting(rotation(F(1, 3)), u, F(1, 100), v, F(1, 100), 200, "infty", trials=8, seed=1)
    assert not res.found and res.n is None
    assert res.achieved_distance >= F(1, 4) - F(1, 100)


@pytest.mark.parametrize("kind", ["infty", "skorokhod", "sendo"])
def test_hitting_self_target_with_unit_radius(kind):
    res = empirical_hitting(tent(), THREE_LEVELS, F(1, 4), THREE_LEVELS, 1, 8, kind, trials=2, seed=0)
    assert res.found and res.n == 1


def test_hitting_one_step_orbit():
    u = THREE_LEVELS
    res = empirical_hitting(tent(), u, F(1, 100), zadeh_extend(tent(), u), 2, 1, "infty", trials=1, seed=3)
    assert res.found and res.n == 1


def test_hitting_is_deterministic():
    args = (tent(), THREE_LEVELS, F(1, 10), chi(F(1, 5)), F(1, 10), 32, "skorokhod")
    a = empirical_hitting(*args, trials=4, seed=11)
    b = empirical_hitting(*args, trials=4, seed=11)
    assert a == b and a.trials == b.trials
    assert run_trial(*args, 11, 2) == a.trials[2]


def test_hitting_argument_errors():
    with pytest.raises(ValueError):
        empirical_hitting(tent(), chi(0), F(1, 4), chi(1), F(1, 4), 0)
    with pytest.raises(ValueError):
        empirical_hitting(tent(), chi(0), F(1, 4), chi(1), F(1, 4), 4, trials=0)
    with pytest.raises(ValueError, match="unknown metric"):
        empirical_hitting(tent(), chi(0), F(1, 4), chi(1), F(1, 4), 4, "bogus")


# -- weak mixing --------------------------------------------------------------------------------------------------


def _iterate_interval(lo, hi, n):
    # tent image of an interval: images of the endpoints plus the peak if 1/2 is inside
    for _ in range(n):
        ends = {tent()(lo), tent()(hi)}
        if lo <= F(1, 2) <= hi:
            ends.add(F(1))
        lo, hi = min(ends), max(ends)
    return lo, hi


@pytest.mark.parametrize(
    "pairs, n",
    [
        ([((0, 1), (0, 1)), ((0, 1), (0, 1))], 0),
        ([((0, F(1, 2)), (F(1, 4), F(1, 2))), ((F(1, 4), F(1, 2)), (0, 1))], 2),
        ([((F(k, 8), F(k + 1, 8)), (F(k, 8), F(k + 1, 8))) for k in (0, 3, 6)], 3),
    ],
)
def test_weak_mixing_examples(pairs, n):
    assert weak_mixing_check(tent(), pairs) == n


@given(st.lists(st.tuples(unit_rationals(), unit_rationals(), unit_rationals(), unit_rationals()), min_size=2, max_size=4))
def test_weak_mixing_inclusions_hold(raw):
    pairs = []
    for a, b, c, d in raw:
        (a, b), (c, d) = sorted((a, b)), sorted((c, d))
        if a == b or c == d:
            return
        pairs.append(((a, b), (c, d)))
    n = weak_mixing_check(tent(), pairs)
    for (a, b), (c, d) in pairs:
        lo, hi = _iterate_interval(a, b, n)
        assert lo <= c and d <= hi


def test_weak_mixing_errors():
    with pytest.raises(NoMixingOracle):
        weak_mixing_check(rotation(F(1, 3)), [((0, F(1, 2)), (0, F(1, 2)))] * 2)
    with pytest.raises(ValueError, match="m >= 2"):
        weak_mixing_check(tent(), [((0, 1), (0, 1))])


# -- hyperspace extraction ------------------------------------------------------------------------------------------


@given(compacta(max_points=4), unit_rationals())
def test_extraction_from_exact_characteristic(k, eps):
    if eps == 0:
        return
    ex = sendograph_to_hyperspace(tent(), k, characteristic(k), 0, eps)
    assert ex.a == k and ex.near_source and ex.near_target is None


def test_extraction_from_sendograph_ball():
    rng = random.Random(2)
    k = compactum(I, [F(1, 5), F(1, 2), F(7, 8)])
    eps = F(1, 10)
    checked = 0
    for _ in range(400):
        w = random_fuzzy(rng, I, max_points=4)
        if s_entourage_contains(eps, 1, characteristic(k), w):
            checked += 1
            assert sendograph_to_hyperspace(tent(), k, w, 0, eps).near_source
    # a few hand-made members of the ball as well
    for w in (
        fuzzy_set(I, [F(1, 3), 1], [[F(1, 4), F(1, 2), F(9, 10)], [F(1, 2)]]),
        characteristic(compactum(I, [F(3, 20), F(11, 20), F(17, 20)])),
    ):
        assert s_entourage_contains(eps, 1, characteristic(k), w)
        assert sendograph_to_hyperspace(tent(), k, w, 0, eps).near_source
        checked += 1
    assert checked >= 2


def test_extraction_far_start_fails():
    k = compactum(I, [0])
    w = fuzzy_set(I, [F(1, 2), 1], [[0, 1], [1]])
    ex = sendograph_to_hyperspace(tent(), k, w, 0, F(1, 10))
    assert hausdorff_distance(ex.a, k) == 1 and not ex.near_source


def test_extraction_carries_witness_to_hyperspace():
    k, l = compactum(I, [F(1, 3)]), compactum(I, [F(3, 5), F(4, 5)])
    cert = fuzzy_witness(tent(), characteristic(k), characteristic(l), F(1, 8))
    ex = sendograph_to_hyperspace(tent(), k, cert.w, cert.n, F(1, 8), l)
    assert ex.near_source and ex.near_target


# -- isometry certificates ---------------------------------------------------------------------------------------------


def test_isometry_certificate_examples():
    f = rotation(F(1, 3))
    u = chi(0, space=CIRCLE)
    v = chi(0, F(1, 2), space=CIRCLE)
    cert = isometry_separation_certificate(f, u, F(1, 100), v, F(1, 100))
    assert cert.impossible and cert.gap == F(1, 2) and cert.threshold == F(1, 25)
    same = isometry_separation_certificate(f, v, F(1, 10), v, F(1, 10))
    assert same.status == "inconclusive" and same.gap == 0
    with pytest.raises(ValueError, match="certificate requires an isometry"):
        isometry_separation_certificate(tent(), chi(0), F(1, 10), chi(1), F(1, 10))


@settings(max_examples=40)
@given(fuzzy_sets(CIRCLE, max_levels=3, max_points=4), fuzzy_sets(CIRCLE, max_levels=3, max_points=4), unit_rationals())
def test_certified_pairs_never_hit(u, v, theta):
    f = rotation(theta)
    eps = F(1, 50)
    if not isometry_separation_certificate(f, u, eps, v, eps).impossible:
        return
    for kind in ("infty", "skorokhod"):
        res = empirical_hitting(f, u, eps, v, eps, 50, kind, trials=2, seed=0)
        assert not res.found
