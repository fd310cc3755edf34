"""Multi-index arithmetic and graded lexicographic monomial ordering.

Multi-indices are plain tuples of non-negative ints. Within one total degree
the order puts larger leading exponents first, so for ``d = 2``::

    1, X1, X2, X1^2, X1 X2, X2^2, X1^3, X1^2 X2, ...
"""
from __future__ import annotations

from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, Sequence

MultiIndex = tuple[int, ...]

#: Largest exponent accepted on a single axis.
MAX_AXIS_DEGREE = 32
#: ``dimension(n, d)`` refuses inputs with ``n + d`` above this.
MAX_BINOMIAL_TOP = 64


def check_multi_index(alpha: Sequence[int], d: int | None = None) -> MultiIndex:
    """Validate ``alpha`` and return it as a tuple."""
    alpha = tuple(int(a) for a in alpha)
    if d is not None and len(alpha) != d:
        raise ValueError(f"multi-index {alpha} has dimension {len(alpha)}, expected {d}")
    if not alpha:
        raise ValueError("multi-index must have at least one entry")
    for a in alpha:
        if a < 0:
            raise ValueError(f"multi-index {alpha} has a negative entry")
        if a > MAX_AXIS_DEGREE:
            raise ValueError(f"multi-index {alpha} exceeds the per-axis degree cap {MAX_AXIS_DEGREE}")
    return alpha


def degree(alpha: Sequence[int]) -> int:
    return sum(alpha)


def zero(d: int) -> MultiIndex:
    return (0,) * d


def unit(j: int, d: int) -> MultiIndex:
    """The unit multi-index ``e_j`` (0-based ``j``)."""
    return tuple(1 if i == j else 0 for i in range(d))


def add(a: Sequence[int], b: Sequence[int]) -> MultiIndex:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence[int], b: Sequence[int]) -> MultiIndex | None:
    """``a - b`` or ``None`` when some entry would go negative."""
    out = tuple(x - y for x, y in zip(a, b))
    if any(x < 0 for x in out):
        return None
    return out


def scale(alpha: Sequence[int], k: int) -> MultiIndex:
    return tuple(k * a for a in alpha)


def dimension(n: int, d: int) -> int:
    """Number of monomials of total degree at most ``n`` in ``d`` variables."""
    if n < 0 or d < 1:
        raise ValueError("need n >= 0 and d >= 1")
    if n + d > MAX_BINOMIAL_TOP:
        raise ValueError("dimension too large")
    return comb(n + d, d)


def graded_lex_key(alpha: Sequence[int]) -> tuple:
    return (sum(alpha), tuple(-a for a in alpha))


def compare_graded_lex(a: Sequence[int], b: Sequence[int]) -> int:
    """Three-way comparison: -1 if ``a`` precedes ``b``, 0 if equal, 1 otherwise."""
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {tuple(a)} vs {tuple(b)}")
    ka, kb = graded_lex_key(a), graded_lex_key(b)
    return (ka > kb) - (ka < kb)


def _fixed_degree(k: int, d: int) -> Iterator[MultiIndex]:
    if d == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in _fixed_degree(k - first, d - 1):
            yield (first,) + rest


def monomials_of_degree(k: int, d: int) -> list[MultiIndex]:
    """All multi-indices with ``|alpha| == k``, in graded lex order."""
    return list(_fixed_degree(k, d))


@lru_cache(maxsize=256)
def _enumerate(n: int, d: int) -> tuple[MultiIndex, ...]:
    out: list[MultiIndex] = []
    for k in range(n + 1):
        out.extend(_fixed_degree(k, d))
    return tuple(out)


def enumerate_monomials(n: int, d: int) -> list[MultiIndex]:
    """All multi-indices with ``|alpha| <= n`` in graded lex order."""
    dimension(n, d)
    return list(_enumerate(n, d))


def sort_graded_lex(indices: Iterable[Sequence[int]]) -> list[MultiIndex]:
    return sorted((tuple(a) for a in indices), key=graded_lex_key)


def lambda_set(m: int, d: int) -> list[MultiIndex]:
    """Multi-indices of total degree exactly ``m``."""
    return monomials_of_degree(m, d)


def lambda_saturated_set(m: int, nprime: int, d: int) -> list[MultiIndex]:
    """Degree-``m`` multi-indices dominating ``nprime * e_j`` for some axis ``j``."""
    return [g for g in monomials_of_degree(m, d) if max(g) >= nprime]


def saturation_degree(nprime: int, d: int) -> int:
    """Least ``m`` at which every degree-``m`` multi-index has an entry ``>= nprime``.

    Pigeonhole: ``(nprime - 1, ..., nprime - 1)`` is the largest index avoiding
    it, so the answer is ``d (nprime - 1) + 1 = nprime + (nprime - 1)(d - 1)``.
    """
    if nprime < 1 or d < 1:
        raise ValueError("need nprime >= 1 and d >= 1")
    return nprime + (nprime - 1) * (d - 1)


def format_monomial(alpha: Sequence[int], names: Sequence[str] | None = None) -> str:
    """Render ``alpha`` as ``X1^2 X2`` (or with the given variable names)."""
    d = len(alpha)
    if names is None:
        names = ("X", "Y", "Z") if d <= 3 else tuple(f"X{j + 1}" for j in range(d))
        if d == 1:
            names = ("X",)
    parts = []
    for name, a in zip(names, alpha):
        if a == 1:
            parts.append(name)
        elif a > 1:
            parts.append(f"{name}^{a}")
    return " ".join(parts) if parts else "1"
