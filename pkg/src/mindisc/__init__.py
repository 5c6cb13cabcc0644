"""Minimum-error quantum state discrimination: solver and optimality certificates."""

from .certificates import (
    DEFAULT_TOL,
    Certificate,
    Witness,
    certify,
    hermiticity_residual,
    lagrange_operator,
    pairwise_equality_residual,
    witness_operator,
    zero_product_residual,
)
from .ensembles import (
    DensityMatrix,
    Ensemble,
    EnsembleSpec,
    PurePairSpec,
    RandomMixedSpec,
    TraceNotOneError,
    TrineSpec,
    generate,
    pure_pair,
    pure_state,
    random_mixed,
    trine,
    validate_density,
)
from .matrices import (
    HERM_TOL,
    PSD_TOL,
    EigendecompositionError,
    MatrixShapeError,
    NotHermitianError,
    NotPositiveError,
    NumericFailure,
    Spectrum,
    hermitize,
    is_hermitian,
    min_eigenvalue,
    spectral_decompose,
)
from .povm import (
    COMPLETENESS_TOL,
    DimensionMismatchError,
    IncompleteSumError,
    Povm,
    SupportError,
    outcome_probability,
    p_correct,
    p_error,
    random_povm,
    square_root_measurement,
    uniform_povm,
    validate_povm,
)
from .solver import (
    NegativeMode,
    SolveTrace,
    SolverConfig,
    best_epsilon,
    brute_force,
    find_negative_mode,
    gain,
    helstrom_binary,
    perturb,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL",
    "HERM_TOL",
    "PSD_TOL",
    "COMPLETENESS_TOL",
    "Certificate",
    "Witness",
    "DensityMatrix",
    "Ensemble",
    "EnsembleSpec",
    "PurePairSpec",
    "TrineSpec",
    "RandomMixedSpec",
    "Spectrum",
    "Povm",
    "NegativeMode",
    "SolveTrace",
    "SolverConfig",
    "MatrixShapeError",
    "NotHermitianError",
    "NotPositiveError",
    "TraceNotOneError",
    "IncompleteSumError",
    "DimensionMismatchError",
    "SupportError",
    "NumericFailure",
    "EigendecompositionError",
    "hermitize",
    "is_hermitian",
    "spectral_decompose",
    "min_eigenvalue",
    "validate_density",
    "pure_state",
    "pure_pair",
    "trine",
    "random_mixed",
    "generate",
    "validate_povm",
    "outcome_probability",
    "p_correct",
    "p_error",
    "uniform_povm",
    "square_root_measurement",
    "random_povm",
    "lagrange_operator",
    "witness_operator",
    "hermiticity_residual",
    "pairwise_equality_residual",
    "zero_product_residual",
    "certify",
    "find_negative_mode",
    "perturb",
    "gain",
    "best_epsilon",
    "solve",
    "helstrom_binary",
    "brute_force",
]
