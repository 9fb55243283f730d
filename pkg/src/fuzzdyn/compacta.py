"""Finite compacta, the Hausdorff metric and hyperspace entourages."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Iterable, Sequence

from .ground import (
    DynMap,
    NoMixingOracle,
    Space,
    SpaceMismatch,
    Span,
    apply_map,
    distance,
    metric_of,
    preimage_points,
)
from .rational import as_fraction

__all__ = [
    "Compactum",
    "compactum",
    "hausdorff_distance",
    "directed_distance",
    "diameter",
    "FiniteUniformity",
    "Metric",
    "Relational",
    "entourage_image",
    "k_entourage_contains",
    "image_compactum",
    "iterate_compactum",
    "union",
    "compact_witness",
    "ball_span",
    "ball_cover_time",
    "ball_preimage",
]


@dataclass(frozen=True)
class Compactum:
    """A non-empty finite subset of a ground space.

    Points are deduplicated and sorted, so ``==`` is set equality.
    """

    space: Space
    points: tuple

    def __post_init__(self):
        if not self.points:
            raise ValueError("a compactum must be non-empty")

    def __iter__(self):
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, x) -> bool:
        try:
            x = self.space.point(x)
        except SpaceMismatch:
            return False
        return x in self._set

    @property
    def _set(self) -> frozenset:
        return frozenset(self.points)

    def issubset(self, other: "Compactum") -> bool:
        _same_space(self, other)
        return self._set <= other._set

    def __le__(self, other: "Compactum") -> bool:
        return self.issubset(other)

    def __or__(self, other: "Compactum") -> "Compactum":
        return union((self, other))

    def __repr__(self) -> str:
        from .rational import fmt

        pts = ", ".join(fmt(p) for p in self.points)
        return f"Compactum({{{pts}}})"


def compactum(space: Space, points: Iterable) -> Compactum:
    if space.is_finite:
        pts = sorted({space.point(p) for p in points})
    else:
        pts = sorted({space.point(as_fraction(p)) for p in points})
    return Compactum(space, tuple(pts))


def union(parts: Iterable[Compactum]) -> Compactum:
    parts = list(parts)
    if not parts:
        raise ValueError("union of no compacta")
    space = parts[0].space
    for p in parts[1:]:
        _same_space(parts[0], p)
    return Compactum(space, tuple(sorted(set().union(*(p.points for p in parts)))))


def _same_space(a: Compactum, b: Compactum) -> Space:
    if a.space != b.space:
        raise SpaceMismatch(f"{a.space!r} vs {b.space!r}")
    return a.space


def directed_distance(a: Compactum, b: Compactum) -> Fraction:
    """``sup_{x in a} inf_{y in b} d(x, y)``."""
    d = metric_of(_same_space(a, b))
    return max(min(d(x, y) for y in b.points) for x in a.points)


def hausdorff_distance(a: Compactum, b: Compactum) -> Fraction:
    if a == b:
        return Fraction(0)
    return max(directed_distance(a, b), directed_distance(b, a))


def diameter(a: Compactum) -> Fraction:
    pts = a.points
    return max(
        (distance(a.space, pts[i], pts[j]) for i in range(len(pts)) for j in range(i + 1, len(pts))),
        default=Fraction(0),
    )


# -- entourages --------------------------------------------------------------


@dataclass(frozen=True)
class FiniteUniformity:
    """A uniformity on a finite set, given by a base of diagonal-containing
    relations (sets of ordered pairs)."""

    space: Space
    base: tuple[frozenset, ...]

    def __post_init__(self):
        if not self.space.is_finite:
            raise SpaceMismatch("relational uniformities need a finite space")
        if not self.base:
            raise ValueError("a uniformity base must be non-empty")
        diag = self.diagonal
        n = self.space.size
        for rel in self.base:
            if not diag <= rel:
                raise ValueError("every base relation must contain the diagonal")
            if any(not (0 <= x < n and 0 <= y < n) for x, y in rel):
                raise ValueError("relation mentions a non-element")
        problems = check_base_axioms(self.base, diag)
        if problems:
            raise ValueError("not a uniformity base: " + "; ".join(problems))

    @property
    def diagonal(self) -> frozenset:
        return frozenset((x, x) for x in self.space.elements())

    @classmethod
    def of(cls, space: Space, relations: Iterable[Iterable[tuple[int, int]]]) -> "FiniteUniformity":
        diag = {(x, x) for x in space.elements()}
        return cls(space, tuple(frozenset(set(r) | diag) for r in relations))


def _compose(a: frozenset, b: frozenset) -> frozenset:
    return frozenset((x, y) for x, z in a for z2, y in b if z == z2)


def check_base_axioms(base: Sequence[frozenset], diagonal: frozenset) -> list[str]:
    """Return the base axioms that fail (empty list when all hold)."""
    problems = []
    for a, b in product(base, repeat=2):
        if not any(c <= (a & b) for c in base):
            problems.append("BS1 (directed under intersection)")
            break
    for a in base:
        if not any(frozenset((y, x) for x, y in b) <= a for b in base):
            problems.append("BS2 (inverse)")
            break
    for a in base:
        if not any(_compose(b, b) <= a for b in base):
            problems.append("BS3 (square root)")
            break
    if frozenset.intersection(*base) != diagonal:
        problems.append("BS4 (intersection is the diagonal)")
    return problems


@dataclass(frozen=True)
class Metric:
    """The metric entourage ``V_eps = {(x, y): d(x, y) < eps}``."""

    eps: Fraction

    def __post_init__(self):
        object.__setattr__(self, "eps", as_fraction(self.eps))
        if self.eps <= 0:
            raise ValueError("entourage radius must be positive")


@dataclass(frozen=True)
class Relational:
    """The ``index``-th base relation of a finite uniformity."""

    uniformity: FiniteUniformity
    index: int

    def __post_init__(self):
        if not 0 <= self.index < len(self.uniformity.base):
            raise IndexError("no such base relation")

    @property
    def relation(self) -> frozenset:
        return self.uniformity.base[self.index]


class EntourageImage:
    """Membership predicate for ``U(A)``; supports ``y in image``."""

    def __init__(self, space: Space, test: Callable[[object], bool]):
        self.space = space
        self._test = test

    def __contains__(self, y) -> bool:
        return self._test(self.space.point(y))

    def __call__(self, y) -> bool:
        return y in self


def entourage_image(u: Metric | Relational, a: Compactum) -> EntourageImage:
    space = a.space
    if isinstance(u, Metric):
        return EntourageImage(space, lambda y: any(distance(space, x, y) < u.eps for x in a.points))
    if u.uniformity.space != space:
        raise SpaceMismatch()
    rel = u.relation
    return EntourageImage(space, lambda y: any((x, y) in rel for x in a.points))


def k_entourage_contains(u: Metric | Relational, a: Compactum, b: Compactum) -> bool:
    """Is ``(a, b)`` in the hyperspace entourage ``K[U]``?"""
    _same_space(a, b)
    if isinstance(u, Metric):
        return hausdorff_distance(a, b) < u.eps
    ua, ub = entourage_image(u, a), entourage_image(u, b)
    return all(x in ub for x in a.points) and all(y in ua for y in b.points)


# -- maps on compacta ---------------------------------------------------------


def image_compactum(f: DynMap, a: Compactum) -> Compactum:
    if f.space != a.space:
        raise SpaceMismatch()
    return Compactum(a.space, tuple(sorted({apply_map(f, x) for x in a.points})))


def iterate_compactum(f: DynMap, a: Compactum, n: int) -> Compactum:
    for _ in range(n):
        a = image_compactum(f, a)
    return a


def ball_span(f: DynMap, center, radius: Fraction) -> Span:
    """Closed ball of ``radius`` around ``center``, clipped to the carrier."""
    return f.span(center - radius, center + radius)


@lru_cache(maxsize=65536)
def _span_orbit(f: DynMap, span: Span, steps: int) -> tuple[Span, ...]:
    out = [span]
    for _ in range(steps):
        out.append(f.image_span(out[-1]))
    return tuple(out)


def ball_cover_time(f: DynMap, center, radius: Fraction) -> int:
    if not f.has_mixing_oracle:
        raise NoMixingOracle()
    s = ball_span(f, center, radius)
    n = 0
    while not f.span_is_full(s):
        s = f.image_span(s)
        n += 1
    return n


def ball_preimage(f: DynMap, center, radius: Fraction, target, n: int):
    """A point ``a`` of the closed ball with ``f^n(a) == target``.

    Requires ``n`` at least the ball's cover time. Walks the exact span orbit
    backwards, keeping at each step the smallest preimage that stays inside
    the corresponding span.
    """
    spans = _span_orbit(f, ball_span(f, center, radius), n)
    if not f.span_is_full(spans[-1]):
        raise ValueError(f"f^{n} does not cover the space from this ball")
    y = f.space.point(target)
    for k in range(n, 0, -1):
        candidates = [x for x in preimage_points(f, y) if f.span_contains(spans[k - 1], x)]
        if not candidates:
            raise AssertionError("span orbit is not exact")
        y = min(candidates)
    return y


def compact_witness(f: DynMap, k: Compactum, l: Compactum, eps) -> tuple[Compactum, int]:
    """A compactum ``A`` near ``k`` whose ``n``-th image is near ``l``.

    Each point of ``k`` receives one exact preimage of every point of ``l``
    inside its closed ``eps/2``-ball, so ``f^n(A) == l`` and
    ``d_H(A, k) <= eps/2``.
    """
    if not f.has_mixing_oracle:
        raise NoMixingOracle()
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    _same_space(k, l)
    if k.space != f.space:
        raise SpaceMismatch()
    radius = eps / 2
    n = max(1, max(ball_cover_time(f, x, radius) for x in k.points))
    pts = {ball_preimage(f, x, radius, y, n) for x in k.points for y in l.points}
    a = Compactum(k.space, tuple(sorted(pts)))
    if not (hausdorff_distance(a, k) < eps and hausdorff_distance(iterate_compactum(f, a, n), l) < eps):
        raise RuntimeError("construction failed post-check")
    return a, n
