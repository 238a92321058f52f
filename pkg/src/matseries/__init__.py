"""Power series of square matrices and their Frechet differentials.

The package evaluates ``g(T) = sum_n a_n T^n`` for dense square matrices
``T`` inside the series' convergence ball, and computes the differential
``g'(T)(h)`` by four independent expansions (a direct monomial sum and
three commutant-based forms), with truncation lengths chosen from analytic
tail majorants.  Executable algebraic identities, independent numerical
oracles, parametric curve derivatives and an integral identity check round
out the toolbox; a JSON command-line interface lives in
:mod:`matseries.cli`.
"""

from .algebra import (
    AlgebraError,
    BallSpec,
    DimensionMismatchError,
    FieldMismatchError,
    MatrixElement,
    ScalarField,
    algebra_norm,
    apply_commutant,
    apply_commutant_power,
    apply_left,
    apply_right,
    identity,
    mat_add,
    mat_mul,
    mat_scale,
    mat_sub,
    matrix,
    zeros,
)
from .frechet import (
    Algorithm,
    CompareReport,
    CurveDomainError,
    DifferentialResult,
    MatrixCurve,
    PairwiseDifference,
    SkipRecord,
    curve_derivative,
    derivative_series_growth,
    frechet_commutant,
    frechet_compare,
    frechet_derivative_series,
    frechet_direct,
    frechet_power_commutant,
    integral_identity_check,
    monomial_differential,
    monomial_differential_forms,
    polynomial_curve,
    relative_difference,
)
from .identities import (
    IdentityReport,
    binomial_sum_identity,
    commutant_power_binomial,
    operator_sum_identity,
    power_commutant_decomposition,
    product_commutator_expansion,
    run_identity_suite,
)
from .oracle import (
    DEFAULT_FD_STEP,
    OracleKind,
    block_triangular_differential,
    fd_differential,
    fd_slope,
    polynomial_differential,
    resolvent_differential,
)
from .series import (
    BoundKind,
    BUILTIN_NAMES,
    EvalDiagnostics,
    OutsideDerivativeBallError,
    OutsideRadiusError,
    PowerSeries,
    SeriesError,
    TruncationPolicy,
    builtin_series,
    choose_truncation,
    derivative_series,
    eval_matrix,
    eval_scalar,
    from_coefficients,
    radius_estimate,
    series_from_json,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraError",
    "Algorithm",
    "BallSpec",
    "BoundKind",
    "BUILTIN_NAMES",
    "CompareReport",
    "CurveDomainError",
    "DEFAULT_FD_STEP",
    "DifferentialResult",
    "DimensionMismatchError",
    "EvalDiagnostics",
    "FieldMismatchError",
    "IdentityReport",
    "MatrixCurve",
    "MatrixElement",
    "OracleKind",
    "OutsideDerivativeBallError",
    "OutsideRadiusError",
    "PairwiseDifference",
    "PowerSeries",
    "ScalarField",
    "SeriesError",
    "SkipRecord",
    "TruncationPolicy",
    "algebra_norm",
    "apply_commutant",
    "apply_commutant_power",
    "apply_left",
    "apply_right",
    "binomial_sum_identity",
    "block_triangular_differential",
    "builtin_series",
    "choose_truncation",
    "commutant_power_binomial",
    "curve_derivative",
    "derivative_series",
    "derivative_series_growth",
    "eval_matrix",
    "eval_scalar",
    "fd_differential",
    "fd_slope",
    "frechet_commutant",
    "frechet_compare",
    "frechet_derivative_series",
    "frechet_direct",
    "frechet_power_commutant",
    "from_coefficients",
    "identity",
    "integral_identity_check",
    "mat_add",
    "mat_mul",
    "mat_scale",
    "mat_sub",
    "matrix",
    "monomial_differential",
    "monomial_differential_forms",
    "operator_sum_identity",
    "polynomial_curve",
    "polynomial_differential",
    "power_commutant_decomposition",
    "product_commutator_expansion",
    "radius_estimate",
    "relative_difference",
    "resolvent_differential",
    "run_identity_suite",
    "series_from_json",
    "zeros",
]
