"""Extensions of moment matrices driven by column relations.

A relation ``X^t = sum c_lam X^lam`` that holds as a column identity in every
stage of an extension chain forces, for every shift ``zeta``,

    s[t + zeta] = sum c_lam s[lam + zeta].

:func:`extend_moments` walks the moments in increasing total degree. A moment
that is already known is checked against every relation that reaches it; a new
moment must be reached by at least one relation and all derivations must
agree. This single engine covers both full-degree relation sets and relation
sets given only on axis monomials ``X_j^k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import kernels
from .errors import (
    BlockMismatchError,
    IncompleteRelationsError,
    InconsistentRelationsError,
    NoStabilizationError,
)
from .hankel import ColumnRelation, MomentMatrix, exact_rank
from .multiindex import MultiIndex, add, degree, monomials_of_degree, sub, zero
from .rational import ZERO, Rational, to_rational

__all__ = [
    "ColumnRelation",
    "ExtensionChain",
    "default_degree_cap",
    "extend_chain",
    "extend_moments",
    "propagate_relation",
    "propose_extension",
    "rank_preserving_routes",
    "verify_rank_preserving",
]


def extend_moments(
    moments: Mapping[MultiIndex, Rational],
    d: int,
    rels: Sequence[ColumnRelation],
    top_degree: int,
) -> dict[MultiIndex, Rational]:
    """All moments up to ``top_degree`` implied by ``moments`` and ``rels``.

    Raises :class:`InconsistentRelationsError` when two derivations of a
    moment (or a derivation and a given value) disagree, and
    :class:`IncompleteRelationsError` when a missing moment cannot be derived.
    """
    out = {tuple(k): to_rational(v) for k, v in moments.items()}
    rels = list(rels)
    for D in range(top_degree + 1):
        for delta in monomials_of_degree(D, d):
            derived = []
            for rel in rels:
                zeta = sub(delta, rel.target)
                if zeta is None:
                    continue
                acc = ZERO
                for lam, c in rel.coeffs.items():
                    key = add(lam, zeta)
                    try:
                        acc += c * out[key]
                    except KeyError:
                        raise IncompleteRelationsError(
                            f"incomplete relations: moment {key} needed by {rel} is undetermined"
                        ) from None
                derived.append((rel, acc))
            if delta in out:
                for rel, v in derived:
                    if v != out[delta]:
                        raise InconsistentRelationsError(
                            f"inconsistent relations: {rel} gives s{delta} = {v}, expected {out[delta]}"
                        )
                continue
            if not derived:
                raise IncompleteRelationsError(f"incomplete relations: moment {delta} is undetermined")
            first_rel, first = derived[0]
            for rel, v in derived[1:]:
                if v != first:
                    raise InconsistentRelationsError(
                        f"inconsistent relations: s{delta} is {first} by {first_rel} but {v} by {rel}"
                    )
            out[delta] = first
    return out


def _with_zero_column(M: MomentMatrix, rels):
    rels = list(rels)
    if exact_rank(M) == 0:
        # a rank-0 matrix only has the zero matrix as rank-preserving extension
        rels.append(ColumnRelation(zero(M.d), {}))
    return rels


def propose_extension(M: MomentMatrix, rels: Sequence[ColumnRelation]) -> MomentMatrix:
    """``M(n+1)`` determined by ``M(n)`` and the relations."""
    rels = _with_zero_column(M, rels)
    moments = extend_moments(M.moments(), M.d, rels, 2 * M.n + 2)
    return MomentMatrix.from_moments(moments, M.n + 1, M.d)


def _split(A, Mext):
    a = A.rows() if isinstance(A, MomentMatrix) else [[to_rational(x) for x in r] for r in A]
    m = Mext.rows() if isinstance(Mext, MomentMatrix) else [[to_rational(x) for x in r] for r in Mext]
    k = len(a)
    if len(m) < k or any(m[i][j] != a[i][j] for i in range(k) for j in range(k)):
        raise BlockMismatchError("block mismatch: extension does not contain the base as leading block")
    B = [row[k:] for row in m[:k]]
    C = [row[k:] for row in m[k:]]
    return a, m, B, C


def rank_preserving_routes(A, Mext) -> tuple[bool, bool]:
    """Both certificates for a rank-preserving extension.

    The first compares exact ranks. The second solves ``A W = B`` and checks
    ``C == W^T A W`` (the product does not depend on which solution is used).
    """
    a, m, B, C = _split(A, Mext)
    by_rank = kernels.rank(m) == kernels.rank(a) if a else kernels.rank(m) == 0
    if not a:
        return by_rank, all(x == 0 for row in C for x in row)
    if not B or not B[0]:
        return by_rank, True
    W = kernels.solve_linear(a, B)
    if W is None:
        return by_rank, False
    Wt = [list(col) for col in zip(*W)]
    WtAW = kernels.matmul(Wt, kernels.matmul(a, W))
    by_factor = all(x == y for r1, r2 in zip(C, WtAW) for x, y in zip(r1, r2))
    return by_rank, by_factor


def verify_rank_preserving(A, Mext) -> bool:
    """True iff ``Mext`` extends ``A`` without increasing the rank."""
    by_rank, by_factor = rank_preserving_routes(A, Mext)
    if by_rank != by_factor:
        raise AssertionError("rank test and factorization test disagree")
    return by_rank


def propagate_relation(p, Mext: MomentMatrix) -> bool:
    """Whether the polynomial relation ``p`` still annihilates the columns of ``Mext``.

    ``p`` is a :class:`ColumnRelation` or a mapping from exponents to
    coefficients (the polynomial itself).
    """
    if isinstance(p, ColumnRelation):
        return p.holds_in(Mext)
    col = [ZERO] * Mext.size
    for alpha, c in p.items():
        c = to_rational(c)
        if c == 0:
            continue
        col = [x + c * y for x, y in zip(col, Mext.column(tuple(alpha)))]
    return all(x == 0 for x in col)


def default_degree_cap(n: int, d: int, rels: Sequence[ColumnRelation] = ()) -> int:
    """Largest stage degree tried before giving up on stabilization."""
    top = max((r.degree for r in rels), default=n + 1)
    return max(n, top - 1) * d + 2


@dataclass(frozen=True)
class ExtensionChain:
    base: MomentMatrix
    stages: tuple
    stabilized_at: int
    relations_used: tuple
    stage_ranks: tuple
    moments: Mapping = field(repr=False)

    @property
    def d(self) -> int:
        return self.base.d

    @property
    def ranks(self) -> dict[int, int]:
        """Exact rank of every stage keyed by its degree, base included."""
        return {self.base.n + i: r for i, r in enumerate(self.stage_ranks)}

    @property
    def rank_infinity(self) -> int:
        return self.ranks[self.stabilized_at]

    @property
    def theory_covered(self) -> bool:
        """Chain termination is a theorem only for ``d <= 2``."""
        return self.d <= 2

    @property
    def proof_note(self) -> str:
        if self.theory_covered:
            return "proved"
        return "consistency-checked, no general proof for d > 2"

    def stage(self, n: int) -> MomentMatrix:
        if n == self.base.n:
            return self.base
        for st in self.stages:
            if st.n == n:
                return st
        raise KeyError(f"no stage of degree {n}")

    @property
    def stabilized(self) -> MomentMatrix:
        return self.stage(self.stabilized_at)

    @property
    def next_stage(self) -> MomentMatrix:
        return self.stage(self.stabilized_at + 1)


def _stage_relations(rels, d, k):
    """Shifts of ``rels`` whose target has total degree exactly ``k``."""
    out = []
    for rel in rels:
        extra = k - rel.degree
        if extra < 0:
            continue
        for delta in monomials_of_degree(extra, d):
            out.append(rel.shifted(delta))
    return out


def extend_chain(
    M: MomentMatrix,
    rels: Sequence[ColumnRelation],
    max_degree: int | None = None,
) -> ExtensionChain:
    """Extend ``M`` stage by stage until two consecutive ranks agree.

    Stops at the first ``N >= n`` with ``rank M(N) == rank M(N+1)``; the chain
    keeps the stage ``N + 1`` because the shift matrices need it.
    """
    rels = _with_zero_column(M, rels)
    cap = default_degree_cap(M.n, M.d, rels) if max_degree is None else max_degree
    moments = extend_moments(M.moments(), M.d, rels, 2 * M.n)
    stages = []
    used = []
    prev_rank = exact_rank(M)
    ranks = [prev_rank]
    k = M.n
    while True:
        k += 1
        if k > cap:
            raise NoStabilizationError(f"no stabilization up to degree {cap}")
        moments = extend_moments(moments, M.d, rels, 2 * k)
        st = MomentMatrix.from_moments(moments, k, M.d)
        stages.append(st)
        used.append(tuple(_stage_relations(rels, M.d, k)))
        r = exact_rank(st)
        ranks.append(r)
        if r == prev_rank:
            return ExtensionChain(M, tuple(stages), k - 1, tuple(used), tuple(ranks), dict(moments))
        prev_rank = r
