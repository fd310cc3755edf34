"""Exact rational scalars.

Everything exact in the package is a ``gmpy2.mpq``. Public entry points accept
ints, ``fractions.Fraction``, decimal or ``"p/q"`` strings and convert here.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational as _RationalABC

from gmpy2 import mpq

Rational = type(mpq(0))

ZERO = mpq(0)
ONE = mpq(1)


def to_rational(value) -> Rational:
    """Convert ``value`` to an exact ``mpq``.

    Floats are converted exactly (no rounding), strings may be ``"p/q"``,
    integers or finite decimals.
    """
    if isinstance(value, Rational):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not moment values")
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, Fraction) or isinstance(value, _RationalABC):
        return mpq(int(value.numerator), int(value.denominator))
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return mpq(*value.as_integer_ratio())
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational string")
        try:
            frac = Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse rational {value!r}") from exc
        return mpq(frac.numerator, frac.denominator)
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def format_rational(q) -> str:
    q = to_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def to_fraction(q) -> Fraction:
    q = to_rational(q)
    return Fraction(int(q.numerator), int(q.denominator))


def rational_matrix(rows) -> list[list[Rational]]:
    return [[to_rational(x) for x in row] for row in rows]


def float_matrix(rows):
    import numpy as np

    return np.array([[float(x) for x in row] for row in rows], dtype=float).reshape(
        len(rows), len(rows[0]) if rows else 0
    )
