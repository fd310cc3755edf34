"""Atomic representing measures: weights, verification and the solve pipeline.

Given variety points ``z^(a)`` and a column basis ``B`` the weights solve

    V_B^T rho = (s_lam)_{lam in B},        V_B[a, lam] = (z^(a))^lam,

which is ``V_B^{-T} M_B e_1`` whenever the constant monomial is in ``B``. A
second square system on a different, QR-pivoted set of monomials gives an
independent cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.linalg import qr

from .errors import (
    ClassificationMismatchError,
    IllConditionedError,
    IncompleteRelationsError,
    InconsistentRelationsError,
    NoStabilizationError,
    NotSimultaneouslyDiagonalizableError,
    ConjugateSymmetryError,
    QCMomentError,
    WeightMismatchError,
)
from .extension import ExtensionChain, extend_chain
from .hankel import (
    ColumnRelation,
    InertiaReport,
    MomentMatrix,
    TruncatedSequence,
    build_moment_matrix,
    column_basis,
    exact_rank,
    rank_and_inertia,
    submatrix,
)
from .multiindex import MultiIndex, degree, enumerate_monomials, zero
from .rational import to_rational
from .spectral import (
    ShiftSystem,
    VarietyPoints,
    classify_variety,
    shift_matrices,
    simultaneous_eigenpoints,
    symmetrize,
)

WEIGHT_FLOOR = 1e-12
COND_LIMIT = 1e12


@dataclass(frozen=True)
class Vandermonde:
    points: np.ndarray = field(repr=False)
    columns: tuple
    entries: np.ndarray = field(repr=False)


def _powers(points: np.ndarray, columns) -> np.ndarray:
    points = np.asarray(points)
    if points.ndim == 1:
        points = points[:, None]
    out = np.ones((points.shape[0], len(columns)), dtype=points.dtype if points.size else complex)
    for k, lam in enumerate(columns):
        col = np.ones(points.shape[0], dtype=out.dtype)
        for j, e in enumerate(lam):
            if e:
                col = col * points[:, j] ** e
        out[:, k] = col
    return out


def build_vandermonde(points, columns: Sequence[MultiIndex]) -> Vandermonde:
    """Vandermonde matrix with ``entry(a, lam) = prod_j z_j^(a) ** lam_j``."""
    pts = np.asarray(points)
    if pts.ndim == 1:
        pts = pts[:, None]
    if not np.iscomplexobj(pts) and pts.dtype.kind not in "fc":
        pts = pts.astype(float)
    cols = tuple(tuple(c) for c in columns)
    if cols and pts.size and any(len(c) != pts.shape[1] for c in cols):
        raise ValueError("column multi-indices do not match the point dimension")
    return Vandermonde(pts, cols, _powers(pts, cols))


@dataclass(frozen=True)
class Atom:
    point: tuple
    weight: complex


@dataclass(frozen=True)
class AtomicMeasure:
    atoms: tuple
    classification: str
    jordan_plus: int | None = None
    jordan_minus: int | None = None

    def __len__(self) -> int:
        return len(self.atoms)

    @property
    def points(self) -> np.ndarray:
        if not self.atoms:
            return np.zeros((0, 0), dtype=complex)
        return np.array([a.point for a in self.atoms], dtype=complex)

    @property
    def weights(self) -> np.ndarray:
        return np.array([a.weight for a in self.atoms], dtype=complex)

    def moment(self, gamma) -> complex:
        if not self.atoms:
            return 0j
        v = _powers(self.points, [tuple(gamma)])[:, 0]
        return complex(np.dot(self.weights, v))


def make_measure(points, weights, tol: float = 1e-10) -> AtomicMeasure:
    """Measure from points and weights, classified by reality and sign."""
    pts = np.atleast_2d(np.asarray(points, dtype=complex)) if len(points) else np.zeros((0, 0), complex)
    w = np.asarray(weights, dtype=complex)
    real = bool(np.all(np.abs(pts.imag) <= tol * np.maximum(1, np.abs(pts)))) and bool(
        np.all(np.abs(w.imag) <= tol * np.maximum(1, np.abs(w)))
    )
    atoms = []
    for p, x in zip(pts, w):
        if real:
            atoms.append(Atom(tuple(complex(z.real, 0.0) for z in p), complex(x.real, 0.0)))
        else:
            atoms.append(Atom(tuple(complex(z) for z in p), complex(x)))
    if not real:
        return AtomicMeasure(tuple(atoms), "quasi_complex")
    plus = sum(1 for a in atoms if a.weight.real > 0)
    minus = sum(1 for a in atoms if a.weight.real < 0)
    return AtomicMeasure(tuple(atoms), "positive" if minus == 0 else "signed", plus, minus)


def canonical_order(atoms: Sequence[Atom]) -> list[Atom]:
    """Sort by modulus of the point, then by (re, im) of each coordinate."""

    def key(a: Atom):
        p = a.point
        flat = []
        for z in p:
            flat.extend((round(z.real, 12), round(z.imag, 12)))
        return (round(float(np.linalg.norm(np.asarray(p))), 12), tuple(flat))

    return sorted(atoms, key=key)


@dataclass(frozen=True)
class WeightSolution:
    weights: np.ndarray
    alternate: np.ndarray | None
    discrepancy: float
    condition: float
    alternate_columns: tuple = ()


def _vandermonde_weights(V: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    return np.linalg.solve(V.T, rhs)


def solve_weights(
    M_B,
    V_B: Vandermonde,
    moments: Mapping | None = None,
    tol: float = 1e-8,
    cond_limit: float = COND_LIMIT,
    max_degree: int | None = None,
) -> WeightSolution:
    """Weights ``rho`` with ``V_B^T rho = M_B e_1``, cross-checked when ``moments`` is given.

    The cross-check picks ``r`` monomials by column-pivoted QR of the scaled
    full Vandermonde matrix on all monomials whose moments are known (up to
    ``max_degree`` if set) and solves the corresponding square system.
    """
    cols = V_B.columns
    r = len(cols)
    if r == 0:
        return WeightSolution(np.zeros(0, complex), np.zeros(0, complex), 0.0, 1.0)
    V = V_B.entries
    if V.shape != (r, r):
        raise ValueError("V_B must be square")
    cond = float(np.linalg.cond(V))
    if not math.isfinite(cond) or cond > cond_limit:
        raise IllConditionedError(f"ill-conditioned Vandermonde: condition estimate {cond:.3e}")
    M_B = [list(row) for row in M_B]
    d = len(cols[0])
    one = zero(d)
    if one in cols:
        k = cols.index(one)
        rhs = np.array([float(row[k]) for row in M_B])
    elif moments is not None:
        rhs = np.array([float(moments[c]) for c in cols])
    else:
        raise ValueError("constant monomial not in the basis; moments are required")
    rho = _vandermonde_weights(V, rhs)
    if moments is None:
        return WeightSolution(rho, None, 0.0, cond)

    top = max(degree(c) for c in cols) if max_degree is None else max_degree
    cand = [g for g in enumerate_monomials(top, d) if g in moments]
    full = _powers(V_B.points, cand)
    scale = np.linalg.norm(full, axis=0)
    scale[scale == 0] = 1.0
    _, _, piv = qr(full / scale, pivoting=True, mode="economic")
    chosen = [cand[i] for i in sorted(piv[:r])]
    V2 = _powers(V_B.points, chosen)
    s2 = np.array([float(moments[g]) for g in chosen])
    rho2 = _vandermonde_weights(V2, s2)
    disc = float(np.max(np.abs(rho - rho2) / np.maximum(1.0, np.abs(rho))))
    if disc > tol:
        raise WeightMismatchError(f"weight formulas disagree: discrepancy {disc:.3e}")
    return WeightSolution(rho, rho2, disc, cond, tuple(chosen))


def _moment_items(s):
    if isinstance(s, TruncatedSequence):
        return s.values.items()
    return ((tuple(k), to_rational(v)) for k, v in s.items())


def moment_residuals(mu: AtomicMeasure, s) -> tuple[float, float]:
    """``(max relative residual, max imaginary part)`` over all given moments."""
    items = list(_moment_items(s))
    if not items:
        return 0.0, 0.0
    gammas = [g for g, _ in items]
    target = np.array([float(v) for _, v in items])
    if mu.atoms:
        vals = _powers(mu.points, gammas).T @ mu.weights
    else:
        vals = np.zeros(len(items), dtype=complex)
    rel = np.abs(vals - target) / np.maximum(1.0, np.abs(target))
    return float(rel.max()), float(np.abs(vals.imag).max())


def verify_moments(mu: AtomicMeasure, s) -> float:
    """Max over the given moments of ``|int z^g dmu - s_g| / max(1, |s_g|)``."""
    return moment_residuals(mu, s)[0]


@dataclass(frozen=True)
class JordanCheck:
    plus: int
    minus: int
    i_plus: int
    i_minus: int

    @property
    def matches(self) -> bool:
        return (self.plus, self.minus) == (self.i_plus, self.i_minus)


def jordan_counts(mu: AtomicMeasure, inertia: InertiaReport) -> JordanCheck:
    """Weight sign counts compared with the inertia of the basis submatrix."""
    if mu.classification == "quasi_complex":
        raise ClassificationMismatchError("classification mismatch: Jordan counts need a real measure")
    plus = sum(1 for a in mu.atoms if a.weight.real > 0)
    minus = sum(1 for a in mu.atoms if a.weight.real < 0)
    return JordanCheck(plus, minus, inertia.i_plus, inertia.i_minus)


def rank_support_bound(s: TruncatedSequence, mu: AtomicMeasure) -> bool:
    """``rank M(floor(m/2)) <= number of atoms``."""
    return exact_rank(build_moment_matrix(s, s.m // 2)) <= len(mu.atoms)


def factorization_residual(mu: AtomicMeasure, M: MomentMatrix) -> float:
    """Entrywise relative gap between ``M`` and ``V^T diag(rho) V``."""
    target = M.to_float()
    if not mu.atoms:
        return float(np.abs(target).max()) if target.size else 0.0
    V = _powers(mu.points, M.labels)
    rebuilt = V.T @ np.diag(mu.weights) @ V
    return float(np.max(np.abs(rebuilt - target) / np.maximum(1.0, np.abs(target))))


def sequence_from_atoms(points, weights, m: int, d: int | None = None) -> TruncatedSequence:
    """Moments up to degree ``m`` of a measure with exact rational atoms and weights."""
    pts = [tuple(to_rational(x) for x in (p if isinstance(p, (tuple, list)) else (p,))) for p in points]
    w = [to_rational(x) for x in weights]
    if d is None:
        if not pts:
            raise ValueError("dimension needed for an empty measure")
        d = len(pts[0])
    values = {}
    for g in enumerate_monomials(m, d):
        acc = to_rational(0)
        for p, x in zip(pts, w):
            term = x
            for zj, e in zip(p, g):
                if e:
                    term = term * zj**e
            acc += term
        values[g] = acc
    return TruncatedSequence(d, m, values)


def grid_bounds(rels: Sequence[ColumnRelation], rank: int, d: int):
    """``(rank, prod_j k_j)`` when every axis has a univariate relation ``X_j^k_j = p(X_j)``."""
    degs = {}
    for rel in rels:
        axes = [j for j, e in enumerate(rel.target) if e]
        if len(axes) != 1:
            continue
        j = axes[0]
        if all(all(e == 0 for i, e in enumerate(k) if i != j) for k in rel.coeffs):
            degs[j] = min(degs.get(j, rel.degree), rel.degree)
    if len(degs) != d:
        return None
    return rank, math.prod(degs.values())


@dataclass
class SolveOptions:
    tol_eig: float = 1e-10
    tol_match: float = 1e-8
    seed: int = 0
    max_degree: int | None = None
    axis_relations: bool = False
    weight_floor: float = WEIGHT_FLOOR
    cond_limit: float = COND_LIMIT


@dataclass
class SolveReport:
    status: str
    d: int
    n: int
    m: int
    quality: str = "ok"
    failure_stage: str | None = None
    failure_reason: str | None = None
    ranks: dict = field(default_factory=dict)
    inertia: dict = field(default_factory=dict)
    stabilized_at: int | None = None
    rank_infinity: int | None = None
    proof_note: str | None = None
    basis: list = field(default_factory=list)
    commuting: bool | None = None
    diagonalizable: list = field(default_factory=list)
    minimal_polynomial_degrees: list = field(default_factory=list)
    variety: str | None = None
    measure: AtomicMeasure | None = None
    residual: float | None = None
    imaginary_residual: float | None = None
    factorization_residual: float | None = None
    weight_discrepancy: float | None = None
    condition: float | None = None
    eigen_residual: float | None = None
    seed_used: int | None = None
    jordan: JordanCheck | None = None
    basis_inertia: InertiaReport | None = None
    rank_support_bound: bool | None = None
    grid_bounds: tuple | None = None
    warnings: list = field(default_factory=list)
    chain: ExtensionChain | None = field(default=None, repr=False)
    shifts: ShiftSystem | None = field(default=None, repr=False)

    @property
    def inertia_identity(self) -> bool | None:
        return None if self.jordan is None else self.jordan.matches


def _fail(report: SolveReport, status: str, stage: str, exc: Exception) -> SolveReport:
    report.status = status
    report.failure_stage = stage
    report.failure_reason = str(exc)
    return report


def solve(s: TruncatedSequence, rels: Sequence[ColumnRelation], options: SolveOptions | None = None) -> SolveReport:
    """Full pipeline from moments and relations to a verified atomic measure."""
    opt = options or SolveOptions()
    m = s.m
    if m % 2:
        s = s.truncate(m - 1)
    n = s.m // 2
    report = SolveReport(status="error", d=s.d, n=n, m=s.m)
    if m % 2:
        report.warnings.append(f"odd degree {m} truncated to {s.m}")

    M = build_moment_matrix(s, n)
    try:
        chain = extend_chain(M, rels, opt.max_degree)
    except InconsistentRelationsError as exc:
        return _fail(report, "inconsistent_relations", "extension", exc)
    except (IncompleteRelationsError, NoStabilizationError) as exc:
        return _fail(report, "error", "extension", exc)
    report.chain = chain
    report.ranks = dict(chain.ranks)
    for k in sorted(chain.ranks):
        report.inertia[k] = rank_and_inertia(chain.stage(k))
    report.stabilized_at = chain.stabilized_at
    report.rank_infinity = chain.rank_infinity
    report.proof_note = chain.proof_note
    if not chain.theory_covered:
        report.warnings.append(chain.proof_note)

    basis = column_basis(chain.stabilized)
    report.basis = basis
    try:
        sys = shift_matrices(chain, basis)
    except QCMomentError as exc:
        return _fail(report, "error", "shift", exc)
    report.shifts = sys
    report.commuting = sys.commuting
    report.diagonalizable = list(sys.diagonalizable)
    report.minimal_polynomial_degrees = [len(p) - 1 for p in sys.minimal_polynomials]
    if not sys.commuting:
        return _fail(report, "no_minimal_measure", "certify", ValueError("shift matrices do not commute"))
    if not all(sys.diagonalizable):
        bad = ", ".join(f"T{j + 1}" for j, ok in enumerate(sys.diagonalizable) if not ok)
        return _fail(
            report,
            "no_minimal_measure",
            "certify",
            ValueError(f"no minimal measure for this extension: {bad} not diagonalizable"),
        )

    try:
        v = simultaneous_eigenpoints(sys, opt.tol_eig, opt.seed, opt.tol_match)
        kind = classify_variety(v, opt.tol_eig)
    except (NotSimultaneouslyDiagonalizableError, ConjugateSymmetryError) as exc:
        return _fail(report, "error", "eigenpoints", exc)
    report.variety = kind
    report.eigen_residual = v.residual
    report.seed_used = v.seed_used
    report.warnings.extend(v.warnings)
    if kind == "real":
        pts = v.points.real.astype(float)
    else:
        pts = symmetrize(v.points, v.pairing)

    M_B = submatrix(chain.stabilized, basis, basis)
    try:
        V_B = build_vandermonde(pts, basis)
        ws = solve_weights(M_B, V_B, chain.moments, opt.tol_match, opt.cond_limit, chain.stabilized_at + 1)
    except QCMomentError as exc:
        return _fail(report, "error", "weights", exc)
    report.weight_discrepancy = ws.discrepancy
    report.condition = ws.condition
    rho = np.asarray(ws.weights, dtype=complex)
    if kind == "quasi_complex":
        for a, b in enumerate(v.pairing):
            if a < b:
                w = (rho[a] + np.conj(rho[b])) / 2
                rho[a], rho[b] = w, np.conj(w)
            elif a == b:
                rho[a] = rho[a].real

    keep = np.abs(rho) >= opt.weight_floor
    if not np.all(keep):
        report.warnings.append(f"dropped {int((~keep).sum())} atom(s) with |weight| below {opt.weight_floor:g}")
        report.quality = "warning"
    mu = make_measure(pts[keep], rho[keep], opt.tol_eig)
    if kind == "quasi_complex" and mu.classification != "quasi_complex":
        mu = AtomicMeasure(mu.atoms, "quasi_complex")
    mu = AtomicMeasure(tuple(canonical_order(mu.atoms)), mu.classification, mu.jordan_plus, mu.jordan_minus)
    report.measure = mu

    report.residual, report.imaginary_residual = moment_residuals(mu, s)
    report.factorization_residual = factorization_residual(mu, M)
    report.rank_support_bound = rank_support_bound(s, mu)
    if not report.rank_support_bound:
        report.warnings.append("support smaller than rank of the moment matrix")
        report.quality = "warning"
    report.basis_inertia = rank_and_inertia(M_B)
    if mu.classification != "quasi_complex":
        report.jordan = jordan_counts(mu, report.basis_inertia)
    if opt.axis_relations:
        report.grid_bounds = grid_bounds(rels, exact_rank(M), s.d)
    report.status = "solved"
    return report
