"""Riemann zeta engine: values, derivatives, the functional-equation factor and zeros."""

from .core import (
    DEFAULT,
    PoleError,
    PrecisionConfig,
    PrecisionError,
    chi,
    chi_log_deriv,
    chi_prime,
    hardy_z,
    theta,
    theta_exact,
    theta_rs,
    zeta,
    zeta_log_deriv,
    zeta_prime,
)
