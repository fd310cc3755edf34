import numpy as np
import pytest
from gmpy2 import mpq

from qcmoment.errors import ClassificationMismatchError, IllConditionedError, WeightMismatchError
from qcmoment.hankel import ColumnRelation, InertiaReport, build_moment_matrix, rank_and_inertia
from qcmoment.measure import (
    SolveOptions,
    build_vandermonde,
    canonical_order,
    factorization_residual,
    grid_bounds,
    jordan_counts,
    make_measure,
    rank_support_bound,
    sequence_from_atoms,
    solve,
    solve_weights,
    verify_moments,
)
from qcmoment.multiindex import enumerate_monomials

from reference_values import (
    FIFTEEN_ATOM_POINTS,
    FIFTEEN_ATOM_WEIGHTS,
    QUARTIC_POINTS,
    QUARTIC_WEIGHTS,
    TWELVE_ATOM_POINTS,
    TWELVE_ATOM_WEIGHTS,
)
from test_spectral import match_sets


def test_vandermonde_univariate():
    V = build_vandermonde([1, 2, 3], [(0,), (1,), (2,)])
    assert np.array_equal(V.entries, [[1, 1, 1], [1, 2, 4], [1, 3, 9]])


def test_vandermonde_plane():
    V = build_vandermonde([(1, 2), (3, -1)], [(0, 0), (1, 0), (0, 1), (1, 1)])
    assert np.array_equal(V.entries, [[1, 1, 2, 2], [1, 3, -1, -3]])
    with pytest.raises(ValueError):
        build_vandermonde([(1, 2)], [(0,)])


def test_solve_weights_recovers_atoms():
    pts, w = [(0,), (1,), (2,)], [mpq(1, 2), mpq(1, 3), mpq(1, 6)]
    s = sequence_from_atoms(pts, w, 4)
    M = build_moment_matrix(s, 1)
    basis = [(0,), (1,), (2,)]
    V = build_vandermonde(np.array([0.0, 1.0, 2.0]), basis)
    M_B = [[s[(a[0] + b[0],)] for b in basis] for a in basis]
    sol = solve_weights(M_B, V, s.values)
    assert np.allclose(sol.weights, [0.5, 1 / 3, 1 / 6], atol=1e-14)
    assert sol.discrepancy < 1e-12
    assert M.size == 2


def test_solve_weights_ill_conditioned():
    V = build_vandermonde(np.array([0.0, 1e-7, 2e-7]), [(0,), (1,), (2,)])
    with pytest.raises(IllConditionedError, match="ill-conditioned Vandermonde"):
        solve_weights([[1, 0, 0], [0, 1, 0], [0, 0, 1]], V)


def test_solve_weights_detects_disagreement():
    s = sequence_from_atoms([(0,), (1,)], [1, 1], 4)
    V = build_vandermonde(np.array([0.0, 1.0]), [(0,), (1,)])
    moments = dict(s.values)
    # the pivoted selection on {0, 1} is {1, x}, so corrupt s_1 only
    moments[(1,)] = mpq(5)
    with pytest.raises(WeightMismatchError, match="weight formulas disagree"):
        solve_weights([[2, 1], [1, 1]], V, moments)


def test_verify_moments_and_factorization():
    s = sequence_from_atoms([(1, 0), (0, 1), (1, 1)], [2, -1, mpq(1, 2)], 4)
    mu = make_measure([(1, 0), (0, 1), (1, 1)], [2, -1, 0.5])
    assert verify_moments(mu, s) < 1e-15
    assert factorization_residual(mu, build_moment_matrix(s, 2)) < 1e-15
    assert mu.classification == "signed"
    assert rank_support_bound(s, mu)


def test_jordan_counts_signed_pair():
    # delta_0 - delta_1
    s = sequence_from_atoms([(0,), (1,)], [1, -1], 2)
    M = build_moment_matrix(s, 1)
    inr = rank_and_inertia(M)
    mu = make_measure([(0,), (1,)], [1, -1])
    jc = jordan_counts(mu, inr)
    assert (jc.plus, jc.minus) == (1, 1)
    assert jc.matches


def test_jordan_counts_refuse_quasi_complex():
    mu = make_measure([(1j,), (-1j,)], [0.5, 0.5])
    assert mu.classification == "quasi_complex"
    with pytest.raises(ClassificationMismatchError, match="classification mismatch"):
        jordan_counts(mu, InertiaReport(2, 1, 1))


def test_canonical_order_is_stable():
    mu = make_measure([(2,), (-1,), (1,), (0,)], [1, 1, 1, 1])
    pts = [a.point[0].real for a in canonical_order(mu.atoms)]
    assert pts == [0, -1, 1, 2]


def test_grid_bounds():
    rels = [ColumnRelation((3, 0), {(1, 0): 1}), ColumnRelation((0, 2), {(0, 0): 1})]
    assert grid_bounds(rels, 5, 2) == (5, 6)
    assert grid_bounds(rels[:1], 5, 2) is None


def test_quartic_measure(load):
    p = load("quartic_complex_pair")
    rep = solve(p.sequence, p.relations)
    assert rep.status == "solved" and rep.measure.classification == "quasi_complex"
    got = np.array([[a.point[0], a.weight] for a in rep.measure.atoms])
    want = np.array([[z, w] for z, w in zip(QUARTIC_POINTS, QUARTIC_WEIGHTS)])
    assert match_sets(got, want, 1e-10) < 1e-10
    assert rep.residual < 1e-10


def _conjugate_symmetric(mu, tol):
    pts, w = mu.points, mu.weights
    for a in range(len(pts)):
        k = np.argmin(np.abs(pts - np.conj(pts[a])).max(axis=1))
        if np.abs(pts[k] - np.conj(pts[a])).max() > tol or abs(w[k] - np.conj(w[a])) > tol:
            return False
    return True


def test_twelve_atom_measure(load):
    p = load("twelve_atom_quasi_complex")
    rep = solve(p.sequence, p.relations)
    assert rep.status == "solved"
    assert rep.measure.classification == "quasi_complex"
    assert len(rep.measure) == 12
    got = np.column_stack([rep.measure.points, rep.measure.weights])
    want = np.array([list(pt) + [w] for pt, w in zip(TWELVE_ATOM_POINTS, TWELVE_ATOM_WEIGHTS)])
    assert match_sets(got, want, 1e-8) < 1e-8
    assert _conjugate_symmetric(rep.measure, 1e-14)
    assert rep.residual < 1e-10
    assert rep.jordan is None


def test_fifteen_atom_measure(load):
    p = load("fifteen_atom_signed")
    rep = solve(p.sequence, p.relations, p.options)
    assert rep.status == "solved"
    mu = rep.measure
    assert mu.classification == "signed" and len(mu) == 15
    got = np.column_stack([mu.points, mu.weights])
    want = np.array([list(pt) + [w] for pt, w in zip(FIFTEEN_ATOM_POINTS, FIFTEEN_ATOM_WEIGHTS)])
    assert match_sets(got, want, 1e-8) < 1e-8
    assert rep.jordan.matches
    assert (rep.jordan.plus, rep.jordan.minus) == (11, 4)
    assert rep.residual < 1e-10


def test_zero_weight_atom_is_dropped():
    s = sequence_from_atoms([(0,), (1,)], [1, mpq(1, 4)], 4)
    rep = solve(s, [ColumnRelation((3,), {(2,): 1})], SolveOptions(weight_floor=0.5))
    assert rep.status == "solved"
    assert rep.quality == "warning"
    assert len(rep.measure) == 1
    assert any("dropped 1 atom" in w for w in rep.warnings)


def test_odd_degree_is_truncated():
    s = sequence_from_atoms([(0,), (1,)], [1, 1], 3)
    rep = solve(s, [ColumnRelation((2,), {(1,): 1})])
    assert rep.status == "solved"
    assert any("odd degree" in w for w in rep.warnings)


def test_exact_rational_measure_reproduces_sequence():
    pts = [(mpq(1, 2), 0), (0, mpq(-3, 2)), (1, 1)]
    s = sequence_from_atoms(pts, [1, 2, 3], 4)
    assert all(v == sum(w * x**g[0] * y**g[1] for (x, y), w in zip(pts, [1, 2, 3]))
               for g, v in s.values.items())
    assert len(s) == len(enumerate_monomials(4, 2))
