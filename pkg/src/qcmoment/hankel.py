"""Moment (d-Hankel) matrices over the rationals.

A moment matrix ``M(n)`` has rows and columns labelled by the monomials of
degree at most ``n`` in graded lex order; the entry at ``(lam, xi)`` is the
moment ``s[lam + xi]``. Rank, inertia, column bases and the column relations
of such a matrix are all computed exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import kernels
from .errors import InsufficientDegreeError, MissingMomentError
from .multiindex import (
    MultiIndex,
    add,
    check_multi_index,
    degree,
    enumerate_monomials,
    format_monomial,
    graded_lex_key,
)
from .rational import ZERO, Rational, format_rational, to_rational


@dataclass(frozen=True)
class TruncatedSequence:
    """Moments ``s[gamma]`` for every ``|gamma| <= m`` in ``d`` variables."""

    d: int
    m: int
    values: Mapping[MultiIndex, Rational]

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension d must be >= 1")
        if self.m < 0:
            raise ValueError("degree m must be >= 0")
        vals = {}
        for k, v in self.values.items():
            k = check_multi_index(k, self.d)
            if degree(k) > self.m:
                raise ValueError(f"moment {k} exceeds degree {self.m}")
            vals[k] = to_rational(v)
        for gamma in enumerate_monomials(self.m, self.d):
            if gamma not in vals:
                raise MissingMomentError(f"missing moment {gamma}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_list(cls, values: Sequence, d: int = 1) -> "TruncatedSequence":
        """Build from values listed in graded lex order."""
        m = 0
        while len(enumerate_monomials(m, d)) < len(values):
            m += 1
        labels = enumerate_monomials(m, d)
        if len(labels) != len(values):
            raise ValueError(f"{len(values)} values do not fill a full degree in d={d}")
        return cls(d, m, dict(zip(labels, values)))

    def __getitem__(self, gamma) -> Rational:
        return self.values[tuple(gamma)]

    def __len__(self) -> int:
        return len(self.values)

    def indices(self) -> list[MultiIndex]:
        return enumerate_monomials(self.m, self.d)

    def truncate(self, m: int) -> "TruncatedSequence":
        return TruncatedSequence(self.d, m, {k: v for k, v in self.values.items() if degree(k) <= m})

    @property
    def half_degree(self) -> int:
        return self.m // 2


@dataclass(frozen=True)
class MomentMatrix:
    """Exact symmetric matrix with graded lex monomial labels."""

    n: int
    d: int
    labels: tuple
    entries: tuple = field(repr=False)

    @classmethod
    def from_moments(cls, moments: Mapping[MultiIndex, Rational], n: int, d: int) -> "MomentMatrix":
        labels = tuple(enumerate_monomials(n, d))
        rows = []
        for lam in labels:
            row = []
            for xi in labels:
                key = add(lam, xi)
                try:
                    row.append(moments[key])
                except KeyError:
                    raise MissingMomentError(f"missing moment {key}") from None
            rows.append(tuple(row))
        return cls(n, d, labels, tuple(rows))

    @property
    def size(self) -> int:
        return len(self.labels)

    def rows(self) -> list[list[Rational]]:
        return [list(r) for r in self.entries]

    def index(self, alpha) -> int:
        try:
            return self._positions[tuple(alpha)]
        except KeyError:
            raise KeyError(f"index out of range: {tuple(alpha)}") from None

    @property
    def _positions(self) -> dict:
        pos = self.__dict__.get("_pos")
        if pos is None:
            pos = {lab: i for i, lab in enumerate(self.labels)}
            object.__setattr__(self, "_pos", pos)
        return pos

    def entry(self, lam, xi) -> Rational:
        return self.entries[self.index(lam)][self.index(xi)]

    def column(self, alpha) -> list[Rational]:
        j = self.index(alpha)
        return [row[j] for row in self.entries]

    def moment(self, gamma) -> Rational:
        """``s[gamma]`` read off the matrix (any split of gamma into two labels)."""
        gamma = tuple(gamma)
        for lam in self.labels:
            xi = tuple(g - a for g, a in zip(gamma, lam))
            if min(xi) >= 0 and xi in self._positions:
                return self.entry(lam, xi)
        raise KeyError(f"index out of range: {gamma}")

    def moments(self) -> dict[MultiIndex, Rational]:
        out = {}
        for i, lam in enumerate(self.labels):
            for j, xi in enumerate(self.labels):
                out.setdefault(add(lam, xi), self.entries[i][j])
        return out

    def leading_block(self, n: int) -> "MomentMatrix":
        if n > self.n:
            raise ValueError(f"block degree {n} exceeds matrix degree {self.n}")
        k = len(enumerate_monomials(n, self.d))
        return MomentMatrix(n, self.d, self.labels[:k], tuple(r[:k] for r in self.entries[:k]))

    def to_float(self):
        from .rational import float_matrix

        return float_matrix(self.entries)


def build_moment_matrix(s: TruncatedSequence, n: int) -> MomentMatrix:
    """``M(n)`` for the sequence ``s``; needs ``2n <= s.m``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if 2 * n > s.m:
        raise InsufficientDegreeError(f"insufficient degree: M({n}) needs moments up to {2 * n}, have {s.m}")
    return MomentMatrix.from_moments(s.values, n, s.d)


def _labelled(M, labels=None):
    if isinstance(M, MomentMatrix):
        return M.rows(), list(M.labels)
    rows = [list(r) for r in M]
    if labels is None:
        raise ValueError("labels are required for a raw matrix")
    return rows, [tuple(l) for l in labels]


def first_hankel_violation(M, labels=None):
    """First pair of positions breaking the d-Hankel identity, or ``None``.

    Returns ``((lam, xi), (gamma, eta))`` where ``lam + xi == gamma + eta`` but
    the entries differ. Positions are scanned row by row.
    """
    rows, labels = _labelled(M, labels)
    n = len(rows)
    if any(len(r) != n for r in rows) or len(labels) != n:
        raise ValueError("matrix must be square with one label per row")
    seen: dict = {}
    for i, lam in enumerate(labels):
        for j, xi in enumerate(labels):
            key = add(lam, xi)
            v = rows[i][j]
            if key in seen:
                (pi, pj), pv = seen[key]
                if pv != v:
                    return (labels[pi], labels[pj]), (lam, xi)
            else:
                seen[key] = ((i, j), v)
    return None


def validate_d_hankel(M, labels=None) -> bool:
    """True iff each entry depends only on the sum of its row and column labels."""
    return first_hankel_violation(M, labels) is None


@dataclass(frozen=True)
class InertiaReport:
    rank: int
    i_plus: int
    i_minus: int

    def __post_init__(self):
        if self.rank != self.i_plus + self.i_minus:
            raise ValueError("rank must equal i_plus + i_minus")

    @property
    def kappa(self) -> int:
        return self.i_minus


def _rows(M):
    return M.rows() if isinstance(M, MomentMatrix) else [[to_rational(x) for x in r] for r in M]


def rank_and_inertia(M) -> InertiaReport:
    """Exact rank and inertia of a symmetric rational matrix."""
    rows = _rows(M)
    if any(rows[i][j] != rows[j][i] for i in range(len(rows)) for j in range(i)):
        raise ValueError("matrix is not symmetric")
    pos, neg = kernels.sym_inertia(rows)
    return InertiaReport(pos + neg, pos, neg)


def exact_rank(M) -> int:
    return kernels.rank(_rows(M))


def column_basis(M: MomentMatrix) -> list[MultiIndex]:
    """Greedy maximal independent column set, scanning in graded lex order."""
    if M.size == 0:
        return []
    _, pivots = kernels.rref(M.rows())
    return [M.labels[c] for c in pivots]


@dataclass(frozen=True)
class ColumnRelation:
    """The column identity ``X^target = sum_lam coeffs[lam] X^lam``.

    With ``strict=True`` every ``lam`` has smaller total degree than
    ``target``. Relations read off a matrix by :func:`kernel_relations` are
    non-strict: their indices only precede ``target`` in graded lex order.
    """

    target: MultiIndex
    coeffs: Mapping[MultiIndex, Rational]
    strict: bool = True

    def __post_init__(self):
        target = check_multi_index(self.target)
        coeffs = {}
        for k, v in self.coeffs.items():
            k = check_multi_index(k, len(target))
            v = to_rational(v)
            if v != 0:
                coeffs[k] = coeffs.get(k, ZERO) + v
        coeffs = {k: v for k, v in coeffs.items() if v != 0}
        for k in coeffs:
            if self.strict and degree(k) >= degree(target):
                raise ValueError(
                    f"relation for {target}: coefficient index {k} must have lower total degree"
                )
            if not self.strict and graded_lex_key(k) >= graded_lex_key(target):
                raise ValueError(f"relation for {target}: coefficient index {k} must precede the target")
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "coeffs", dict(sorted(coeffs.items(), key=lambda kv: graded_lex_key(kv[0]))))

    @property
    def d(self) -> int:
        return len(self.target)

    @property
    def degree(self) -> int:
        return degree(self.target)

    def polynomial(self) -> dict[MultiIndex, Rational]:
        """Coefficients of ``p(x) = x^target - sum coeffs[lam] x^lam``."""
        p = {self.target: to_rational(1)}
        for k, v in self.coeffs.items():
            p[k] = -v
        return p

    def shifted(self, delta: Sequence[int]) -> "ColumnRelation":
        """The relation multiplied through by ``x^delta``."""
        return ColumnRelation(
            add(self.target, delta), {add(k, delta): v for k, v in self.coeffs.items()}, self.strict
        )

    def residual_column(self, M: MomentMatrix) -> list[Rational]:
        """``p(X)`` as a column of ``M``; all zero iff the relation holds in ``M``."""
        col = list(M.column(self.target))
        for k, v in self.coeffs.items():
            other = M.column(k)
            col = [a - v * b for a, b in zip(col, other)]
        return col

    def holds_in(self, M: MomentMatrix) -> bool:
        return all(x == 0 for x in self.residual_column(M))

    def format(self, names=None) -> str:
        """Human-readable form, e.g. ``Y^3 = 3 X - (1/2) Y``."""
        parts = []
        for k, v in self.coeffs.items():
            mon = format_monomial(k, names)
            mag = format_rational(abs(v))
            if mon == "1":
                body = mag
            elif abs(v) == 1:
                body = mon
            elif abs(v).denominator == 1:
                body = f"{mag} {mon}"
            else:
                body = f"({mag}) {mon}"
            sign = "-" if v < 0 else "+"
            parts.append((sign, body))
        if not parts:
            rhs = "0"
        else:
            first_sign, first = parts[0]
            rhs = ("-" if first_sign == "-" else "") + first
            rhs += "".join(f" {sign} {body}" for sign, body in parts[1:])
        return f"{format_monomial(self.target, names)} = {rhs}"

    def __str__(self) -> str:
        return self.format()


def kernel_relations(M: MomentMatrix) -> list[ColumnRelation]:
    """For each non-basis column, its expansion in the earlier basis columns."""
    if M.size == 0:
        return []
    R, pivots = kernels.rref(M.rows())
    pivset = set(pivots)
    out = []
    for c, target in enumerate(M.labels):
        if c in pivset:
            continue
        coeffs = {M.labels[p]: R[i][c] for i, p in enumerate(pivots) if R[i][c] != 0}
        out.append(ColumnRelation(target, coeffs, strict=False))
    return out


def submatrix(M: MomentMatrix, rows: Iterable, cols: Iterable) -> list[list[Rational]]:
    """Entries of ``M`` at the given row and column labels."""
    ri = [M.index(r) for r in rows]
    ci = [M.index(c) for c in cols]
    return [[M.entries[i][j] for j in ci] for i in ri]
