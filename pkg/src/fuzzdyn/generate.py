"""Seeded random instances: points, compacta, step fuzzy sets, maps, warps.

All generators take a :class:`random.Random` and return exact values, so a
seed fully determines an instance.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .compacta import Compactum
from .fuzzy import StepFuzzySet, TimeWarp, fuzzy_set
from .ground import CIRCLE, UNIT_INTERVAL, DynMap, Space, finite_space, finite_table, rotation, tent

__all__ = [
    "DENOMINATORS",
    "random_rational",
    "random_point",
    "random_compactum",
    "random_levels",
    "random_fuzzy",
    "random_finite_space",
    "random_finite_map",
    "random_rotation",
    "random_warp",
    "random_map",
]

DENOMINATORS = (1, 2, 3, 4, 5, 6, 8, 10, 12, 16)


def random_rational(rng: random.Random, lo=0, hi=1, denominators: Sequence[int] = DENOMINATORS) -> Fraction:
    """A rational in ``[lo, hi]`` with a denominator drawn from ``denominators``."""
    lo, hi = Fraction(lo), Fraction(hi)
    q = rng.choice(denominators)
    a, b = -(-lo.numerator * q // lo.denominator), hi.numerator * q // hi.denominator
    if a > b:
        return lo
    return Fraction(rng.randint(a, b), q)


def random_point(rng: random.Random, space: Space, denominators: Sequence[int] = DENOMINATORS):
    if space.is_finite:
        return rng.randrange(space.size)
    x = random_rational(rng, 0, 1, denominators)
    return space.point(x)


def random_compactum(rng: random.Random, space: Space, max_points: int = 8, denominators=DENOMINATORS) -> Compactum:
    k = rng.randint(1, max_points)
    pts = {random_point(rng, space, denominators) for _ in range(k)}
    return Compactum(space, tuple(sorted(pts)))


def random_levels(rng: random.Random, count: int, denominators=DENOMINATORS) -> tuple[Fraction, ...]:
    """``count`` strictly increasing levels in ``(0, 1]`` ending at 1."""
    inner: set = set()
    for _ in range(8 * count):
        if len(inner) == count - 1:
            break
        a = random_rational(rng, 0, 1, denominators)
        if 0 < a < 1:
            inner.add(a)
    return tuple(sorted(inner)) + (Fraction(1),)


def random_fuzzy(
    rng: random.Random,
    space: Space = UNIT_INTERVAL,
    max_levels: int = 4,
    max_points: int = 6,
    denominators=DENOMINATORS,
    level_denominators=DENOMINATORS,
) -> StepFuzzySet:
    """A random canonical step fuzzy set.

    Each support point gets a depth in ``1..n`` (the number of cuts holding
    it); at least one point reaches depth ``n`` so the set is normal.
    """
    levels = random_levels(rng, rng.randint(1, max_levels), level_denominators)
    n = len(levels)
    pts = sorted({random_point(rng, space, denominators) for _ in range(rng.randint(1, max_points))})
    depth = {x: rng.randint(1, n) for x in pts}
    depth[rng.choice(pts)] = n
    cuts = [[x for x in pts if depth[x] >= i] for i in range(1, n + 1)]
    return fuzzy_set(space, levels, cuts)


def random_finite_space(rng: random.Random, size: int, max_weight: int = 4) -> Space:
    """Shortest-path metric of a random complete graph with rational weights."""
    d = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        for j in range(i + 1, size):
            d[i][j] = d[j][i] = Fraction(rng.randint(1, max_weight), rng.choice((1, 2, 4)))
    for k in range(size):
        for i in range(size):
            for j in range(size):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return finite_space(d)


def random_finite_map(rng: random.Random, space: Space) -> DynMap:
    return finite_table(space, [rng.randrange(space.size) for _ in range(space.size)])


def random_rotation(rng: random.Random, denominators=DENOMINATORS) -> DynMap:
    return rotation(random_rational(rng, 0, 1, denominators))


def random_warp(rng: random.Random, max_knots: int = 3, denominators=DENOMINATORS) -> TimeWarp:
    """A warp with up to ``max_knots`` interior knots."""
    k = rng.randint(0, max_knots)
    s = random_levels(rng, k + 1, denominators)[:-1]
    t = random_levels(rng, k + 1, denominators)[:-1]
    m = min(len(s), len(t))
    knots = ((Fraction(0), Fraction(0)),) + tuple(zip(s[:m], t[:m])) + ((Fraction(1), Fraction(1)),)
    return TimeWarp(knots)


def random_map(rng: random.Random, space: Space) -> DynMap:
    """A map with exact images on ``space``."""
    if space.is_finite:
        return random_finite_map(rng, space)
    if space == CIRCLE:
        return random_rotation(rng)
    return tent()
