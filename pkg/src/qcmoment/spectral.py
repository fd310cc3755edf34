"""Shift matrices, exact diagonalizability certificates and variety points.

For a column basis ``B`` of a stabilized stage ``M(N)`` the shift matrices

    T_j = M_B(N)^{-1} M_{B, B+e_j}(N+1)

represent multiplication by ``x_j`` on the quotient algebra. Their transposes
share eigenvectors whose eigenvalues are the coordinates of the variety
points.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy
from scipy.optimize import linear_sum_assignment

from . import kernels
from .errors import (
    ConjugateSymmetryError,
    NotSimultaneouslyDiagonalizableError,
    SingularBasisError,
)
from .hankel import MomentMatrix, column_basis, submatrix
from .multiindex import MultiIndex, add, unit
from .rational import ONE, ZERO, float_matrix, to_rational

_X = sympy.Symbol("x")


@dataclass(frozen=True)
class ShiftSystem:
    d: int
    basis: tuple
    T: tuple = field(repr=False)
    commuting: bool
    diagonalizable: tuple
    minimal_polynomials: tuple = field(repr=False, default=())

    @property
    def r(self) -> int:
        return len(self.basis)

    @property
    def certified(self) -> bool:
        return self.commuting and all(self.diagonalizable)

    @classmethod
    def from_matrices(cls, T: Sequence, basis: Sequence[MultiIndex] | None = None) -> "ShiftSystem":
        T = tuple(tuple(tuple(to_rational(x) for x in row) for row in t) for t in T)
        r = len(T[0]) if T else 0
        if basis is None:
            basis = tuple((i,) for i in range(r))
        mins = tuple(minimal_polynomial(t) for t in T)
        return cls(
            d=len(T),
            basis=tuple(tuple(b) for b in basis),
            T=T,
            commuting=_commute(T),
            diagonalizable=tuple(_squarefree(p) for p in mins),
            minimal_polynomials=mins,
        )


def _commute(T) -> bool:
    T = [[list(r) for r in t] for t in T]
    for j in range(len(T)):
        for k in range(j + 1, len(T)):
            if kernels.matmul(T[j], T[k]) != kernels.matmul(T[k], T[j]):
                return False
    return True


def shift_matrices(chain, basis: Sequence[MultiIndex] | None = None) -> ShiftSystem:
    """Exact shift matrices of a stabilized chain.

    ``chain`` is an :class:`~qcmoment.extension.ExtensionChain` or a pair
    ``(M(N), M(N+1))``. The basis defaults to the greedy column basis of
    ``M(N)``.
    """
    if isinstance(chain, tuple):
        MN, MN1 = chain
    else:
        MN, MN1 = chain.stabilized, chain.next_stage
    if basis is None:
        basis = column_basis(MN)
    basis = [tuple(b) for b in basis]
    d = MN.d
    MB = submatrix(MN, basis, basis)
    if basis and kernels.rank(MB) != len(basis):
        raise SingularBasisError("singular basis matrix")
    T = []
    for j in range(d):
        e = unit(j, d)
        shifted = submatrix(MN1, basis, [add(b, e) for b in basis])
        Tj = kernels.solve_linear(MB, shifted) if basis else []
        T.append(tuple(tuple(r) for r in Tj))
    return ShiftSystem.from_matrices(T, basis)


# ---- exact minimal polynomials ------------------------------------------


def _vector_min_poly(T, v) -> list:
    """Monic polynomial of least degree with ``p(T) v = 0``, low coefficients first."""
    krylov = [list(v)]
    while True:
        w = kernels.matvec(T, krylov[-1])
        cols = [list(row) for row in zip(*krylov)]
        c = kernels.solve_linear(cols, [[x] for x in w])
        if c is not None:
            return [-row[0] for row in c] + [ONE]
        krylov.append(w)


def _to_poly(coeffs) -> sympy.Poly:
    return sympy.Poly(
        [sympy.Rational(int(c.numerator), int(c.denominator)) for c in reversed(coeffs)],
        _X,
        domain="QQ",
    )


def _from_poly(p: sympy.Poly) -> list:
    out = []
    for c in reversed(p.all_coeffs()):
        f = Fraction(int(c.p), int(c.q))
        out.append(to_rational(f))
    return out


def _annihilates(T, coeffs) -> bool:
    r = len(T)
    if r == 0:
        return True
    ident = [[ONE if i == j else ZERO for j in range(r)] for i in range(r)]
    P = [[coeffs[-1] * x for x in row] for row in ident]
    for c in reversed(coeffs[:-1]):
        P = kernels.matmul(P, T)
        for i in range(r):
            P[i][i] = P[i][i] + c
    return all(x == 0 for row in P for x in row)


def minimal_polynomial(T, seed: int = 0, probes: int = 2) -> tuple:
    """Exact minimal polynomial of a rational square matrix.

    Coefficients are returned lowest degree first and the polynomial is
    monic. Krylov sequences of random rational vectors give a candidate that
    is confirmed by evaluating it at ``T``; if the confirmation fails the
    standard basis vectors are added to the lcm, which is always enough.
    """
    T = [[to_rational(x) for x in row] for row in T]
    r = len(T)
    if r == 0:
        return (ONE,)
    rng = random.Random(seed)
    poly = sympy.Poly(1, _X, domain="QQ")
    for _ in range(probes):
        v = [to_rational(rng.randint(-9, 9)) for _ in range(r)]
        if all(x == 0 for x in v):
            continue
        poly = poly.lcm(_to_poly(_vector_min_poly(T, v)))
    coeffs = _from_poly(poly.monic())
    if not _annihilates(T, coeffs):
        for i in range(r):
            e = [ONE if k == i else ZERO for k in range(r)]
            poly = poly.lcm(_to_poly(_vector_min_poly(T, e)))
        coeffs = _from_poly(poly.monic())
        if not _annihilates(T, coeffs):
            raise AssertionError("minimal polynomial does not annihilate the matrix")
    return tuple(coeffs)


def _squarefree(coeffs) -> bool:
    p = _to_poly(coeffs)
    if p.degree() <= 0:
        return True
    return p.gcd(p.diff(_X)).degree() == 0


def certify_diagonalizable(T) -> bool:
    """True iff the exact minimal polynomial of ``T`` is squarefree."""
    return _squarefree(minimal_polynomial(T))


# ---- eigenpoints ---------------------------------------------------------


@dataclass(frozen=True)
class VarietyPoints:
    points: np.ndarray = field(repr=False)
    pairing: tuple | None
    all_real: bool
    tol: float
    residual: float = 0.0
    seed_used: int = 0
    warnings: tuple = ()

    def __len__(self) -> int:
        return len(self.points)


def _conjugate_pairing(points: np.ndarray, tol: float):
    """Involution matching each point with its complex conjugate, or ``None``."""
    r = len(points)
    if r == 0:
        return ()
    scale = np.maximum(1.0, np.abs(points).max(axis=1))
    cost = np.abs(points[:, None, :] - np.conj(points)[None, :, :]).max(axis=2)
    rows, cols = linear_sum_assignment(cost)
    perm = [0] * r
    for a, b in zip(rows, cols):
        if cost[a, b] > tol * scale[a]:
            return None
        perm[a] = int(b)
    if any(perm[perm[a]] != a for a in range(r)):
        return None
    return tuple(perm)


def _is_real(points: np.ndarray, tol: float) -> bool:
    if len(points) == 0:
        return True
    scale = np.maximum(1.0, np.abs(points))
    return bool(np.all(np.abs(points.imag) < tol * scale))


def _try_eigenpoints(Tf, coeffs):
    C = sum(c * t.T for c, t in zip(coeffs, Tf))
    _, V = np.linalg.eig(C)
    r = C.shape[0]
    pts = np.empty((r, len(Tf)), dtype=complex)
    worst = 0.0
    for a in range(r):
        xi = V[:, a]
        nrm2 = np.vdot(xi, xi).real
        for j, t in enumerate(Tf):
            txi = t.T @ xi
            z = np.vdot(xi, txi) / nrm2
            pts[a, j] = z
            res = np.linalg.norm(txi - z * xi) / (np.sqrt(nrm2) * max(1.0, np.linalg.norm(t, 2)))
            worst = max(worst, res)
    return pts, worst


def simultaneous_eigenpoints(
    sys: ShiftSystem,
    tol: float = 1e-10,
    seed: int = 0,
    match_tol: float = 1e-8,
    retries: int = 8,
) -> VarietyPoints:
    """Common eigenvalues of the transposed shift matrices.

    A seeded random combination ``sum c_j T_j^T`` is diagonalized; each
    eigenvector gives one point through Rayleigh quotients. Residuals are
    measured relative to ``||T_j||``. A failed residual check or a pairing
    failure triggers a retry with the next seed.
    """
    if not sys.commuting:
        raise NotSimultaneouslyDiagonalizableError("not simultaneously diagonalizable: shift matrices do not commute")
    if not all(sys.diagonalizable):
        raise NotSimultaneouslyDiagonalizableError("not simultaneously diagonalizable: a shift matrix is defective")
    r, d = sys.r, sys.d
    if r == 0:
        return VarietyPoints(np.zeros((0, d), dtype=complex), (), True, tol, 0.0, seed)
    Tf = [float_matrix(t) for t in sys.T]
    last = None
    for attempt in range(retries):
        rng = random.Random(seed + attempt)
        coeffs = [rng.randint(1, 997) / 997 for _ in range(d)]
        pts, worst = _try_eigenpoints(Tf, coeffs)
        last = worst
        if worst >= tol:
            continue
        pairing = _conjugate_pairing(pts, match_tol)
        if pairing is None:
            continue
        warnings = []
        close = np.abs(pts[:, None, :] - pts[None, :, :]).max(axis=2)
        np.fill_diagonal(close, np.inf)
        if np.any(close < match_tol):
            warnings.append("cluster warning: two eigenpoints agree within tolerance")
        all_real = _is_real(pts, tol)
        return VarietyPoints(pts, pairing, all_real, tol, float(worst), seed + attempt, tuple(warnings))
    raise NotSimultaneouslyDiagonalizableError(
        f"not simultaneously diagonalizable: residual {last:.3e} after {retries} attempts"
    )


def classify_variety(v: VarietyPoints, tol: float | None = None) -> str:
    """``"real"`` when all coordinates are real within ``tol``, else ``"quasi_complex"``."""
    tol = v.tol if tol is None else tol
    if _is_real(v.points, tol):
        return "real"
    if v.pairing is None or _conjugate_pairing(v.points, max(tol, 1e-8)) is None:
        raise ConjugateSymmetryError("conjugate symmetry violated")
    return "quasi_complex"


def symmetrize(points: np.ndarray, pairing) -> np.ndarray:
    """Make conjugate partners exact conjugates and self-paired points real."""
    out = np.array(points, dtype=complex)
    for a, b in enumerate(pairing):
        if a == b:
            out[a] = out[a].real
        elif a < b:
            z = (out[a] + np.conj(out[b])) / 2
            out[a] = z
            out[b] = np.conj(z)
    return out
