"""Rank-preserving extensions of moment matrices and minimal atomic representing measures."""
from .errors import (
    ClassificationMismatchError,
    ConjugateSymmetryError,
    IllConditionedError,
    IncompleteRelationsError,
    InconsistentRelationsError,
    InsufficientDegreeError,
    MissingMomentError,
    NoStabilizationError,
    NotSimultaneouslyDiagonalizableError,
    QCMomentError,
    SingularBasisError,
    WeightMismatchError,
)
from .extension import (
    ExtensionChain,
    extend_chain,
    propagate_relation,
    propose_extension,
    verify_rank_preserving,
)
from .hankel import (
    ColumnRelation,
    InertiaReport,
    MomentMatrix,
    TruncatedSequence,
    build_moment_matrix,
    column_basis,
    kernel_relations,
    rank_and_inertia,
    submatrix,
    validate_d_hankel,
)
from .kernels import BACKEND
from .measure import (
    Atom,
    AtomicMeasure,
    SolveOptions,
    SolveReport,
    build_vandermonde,
    jordan_counts,
    rank_support_bound,
    solve,
    solve_weights,
    verify_moments,
)
from .problem import Problem, ProblemError, load_problem, parse_problem
from .multiindex import compare_graded_lex, dimension, enumerate_monomials, saturation_degree
from .spectral import (
    ShiftSystem,
    VarietyPoints,
    certify_diagonalizable,
    classify_variety,
    shift_matrices,
    simultaneous_eigenpoints,
)

__version__ = "0.1.0"
