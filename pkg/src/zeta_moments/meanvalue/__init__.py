"""Discrete moment S = sum zeta'(rho) X(rho) Y(1-rho), its main terms and cross-checks."""

from .calibrate import (
    BruteForceOracle,
    CalibrationBudget,
    FitError,
    SyntheticOracle,
    calibrate,
    derive_constants,
)
from .constants import ConstantsError, MainTermConstants, laurent_coefficients, laurent_constants
from .direct import (
    BudgetError,
    UncertifiedZerosError,
    a_coefficients,
    discrete_sum,
    m0_direct,
    shu_partial_sums,
)
from .mainterm import m0_main_term, r1, shu_main_term, sr_diagonal, theorem1_main_term
from .params import MeanValueParams
from .quadrature import (
    LAMBDA_LOG,
    QuadratureError,
    gonek_envelope,
    gonek_integral_check,
    integrate,
    jk_check,
    log_power_integral,
    sr_check,
    sr_quadrature,
)
from .report import (
    ComparisonReport,
    ComparisonRow,
    end_to_end_report,
    m0_report,
    rel_error,
    shu_sum_check,
    trend_inversions,
)
