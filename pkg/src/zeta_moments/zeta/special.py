"""Bernoulli numbers, Gamma-function wrappers and Stieltjes constants."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy import special as sp


@lru_cache(maxsize=None)
def bernoulli_over_factorial(max_order: int) -> np.ndarray:
    """B_{2k}/(2k)! for k = 0..max_order//2 (float64)."""
    b = sp.bernoulli(max_order)
    k2 = np.arange(0, max_order + 1, 2)
    out = b[k2] / sp.factorial(k2, exact=False)
    out.flags.writeable = False
    return out


def loggamma(z):
    """Analytic log Gamma (continuous imaginary part away from the negative axis)."""
    return sp.loggamma(np.asarray(z, dtype=complex))


def digamma(z):
    return sp.psi(np.asarray(z, dtype=complex))


def _log_poly_derivs(n: int, order: int) -> list[np.polynomial.Polynomial]:
    """Polynomials P_m with d^m/dx^m (log^n x / x) = x^{-m-1} P_m(log x)."""
    P = np.polynomial.Polynomial([0.0] * n + [1.0])
    out = [P]
    for m in range(order):
        P = -(m + 1) * P + P.deriv()
        out.append(P)
    return out


@lru_cache(maxsize=None)
def stieltjes(n: int, N: int = 200, terms: int = 12) -> float:
    """Stieltjes constant gamma_n by Euler-Maclaurin on sum log^n k / k.

    gamma_n = sum_{k<=N} f(k) - log^{n+1}N/(n+1) - f(N)/2
              - sum_j B_2j/(2j)! f^{(2j-1)}(N),   f(x) = log^n x / x.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    k = np.arange(1, N + 1, dtype=float)
    lk = np.log(k)
    head = math.fsum((lk**n / k).tolist())
    lN = math.log(N)
    polys = _log_poly_derivs(n, 2 * terms)
    bf = bernoulli_over_factorial(2 * terms)
    tail = [lN ** (n + 1) / (n + 1), 0.5 * lN**n / N]
    for j in range(1, terms + 1):
        m = 2 * j - 1
        tail.append(bf[j] * polys[m](lN) / N ** (m + 1))
    return head - math.fsum(tail)
