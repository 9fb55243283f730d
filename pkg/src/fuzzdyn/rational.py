"""Parsing and formatting of exact rationals.

Every scalar in the package is a :class:`fractions.Fraction`; on the wire a
rational is the string ``"p/q"`` (or ``"p"`` when ``q == 1``).
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

__all__ = ["Q", "as_fraction", "fmt", "parse", "decimal"]


def Q(value, denominator=None) -> Fraction:
    """Short constructor: ``Q(1, 3)``, ``Q("1/3")`` or ``Q(2)``."""
    if denominator is not None:
        return Fraction(value, denominator)
    return as_fraction(value)


def as_fraction(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are rejected: they would silently smuggle rounding into the core.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return parse(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def parse(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    if any(c in text for c in ".eE"):
        raise ValueError(f"decimal notation is not accepted: {text!r}")
    return Fraction(text)


def fmt(value) -> str:
    q = as_fraction(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def decimal(value, digits: int = 6) -> str:
    """Human-readable decimal rendering; never used in machine outputs."""
    q = as_fraction(value)
    return f"{q.numerator / q.denominator:.{digits}f}"
