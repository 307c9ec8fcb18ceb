"""Numerical verification of a discrete mean value of zeta'(rho) X(rho) Y(1-rho)."""

__version__ = "0.1.0"
