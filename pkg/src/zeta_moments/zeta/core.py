"""zeta(s), zeta'(s), chi(s) and Hardy's Z function in complex128.

Euler-Maclaurin summation is used for Re s >= 1/2 (and near s = 0); the
functional equation handles the rest. All entry points accept scalars or
arrays and vectorize over the points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .special import bernoulli_over_factorial, digamma, loggamma

LOG_2PI = math.log(2 * math.pi)
_BLOCK = 256


class PoleError(ValueError):
    pass


class PrecisionError(RuntimeError):
    pass


@dataclass(frozen=True)
class PrecisionConfig:
    """``euler_maclaurin_terms = 0`` picks N from the height automatically."""

    target_abs_error: float = 1e-12
    euler_maclaurin_terms: int = 0
    bernoulli_order: int = 80

    def __post_init__(self):
        if not self.target_abs_error > 0:
            raise ValueError("target_abs_error must be positive")
        if self.bernoulli_order < 2 or self.bernoulli_order % 2:
            raise ValueError("bernoulli_order must be even and >= 2")
        if self.euler_maclaurin_terms < 0:
            raise ValueError("euler_maclaurin_terms must be >= 0")


DEFAULT = PrecisionConfig()


def _n_terms(s_block: np.ndarray, cfg: PrecisionConfig) -> int:
    if cfg.euler_maclaurin_terms:
        return cfg.euler_maclaurin_terms
    # |s|/(2 pi N) ~ 0.5 keeps the Bernoulli tail converging quickly
    return int(math.ceil(np.abs(s_block).max() / 3.0)) + 10


def _em_block(s: np.ndarray, cfg: PrecisionConfig, deriv: bool):
    N = _n_terms(s, cfg)
    n = np.arange(1, N, dtype=float)
    logn = np.log(n)
    pw = np.exp(-np.outer(s, logn))  # n^{-s}
    val = pw.sum(axis=1)
    dval = -(pw @ logn) if deriv else None

    lN = math.log(N)
    NmS = np.exp(-s * lN)  # N^{-s}
    sm1 = s - 1.0
    val = val + N * NmS / sm1 + 0.5 * NmS
    if deriv:
        dval = dval - lN * N * NmS / sm1 - N * NmS / sm1**2 - 0.5 * lN * NmS

    bf = bernoulli_over_factorial(cfg.bernoulli_order)
    K = cfg.bernoulli_order // 2
    # term_k = B_2k/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    poch = s.copy()
    dpoch = np.ones_like(s)
    base = NmS / N
    sigma = s.real
    tol = cfg.target_abs_error
    converged = False
    for k in range(1, K + 1):
        term = bf[k] * poch * base
        val = val + term
        if deriv:
            dval = dval + bf[k] * (dpoch - lN * poch) * base
        if k < K:
            a, b = s + (2 * k - 1), s + 2 * k
            dpoch = dpoch * a * b + poch * (a + b)
            poch = poch * a * b
            base = base / (N * N)
            nxt = np.abs(bf[k + 1] * poch * base)
            # standard remainder bound: |R| <= |s+2K+1|/(sigma+2K+1) * |next term|
            fac = np.abs(s + 2 * k + 1) / np.maximum(sigma + 2 * k + 1, 1e-3)
            if deriv:
                fac = fac * (1.0 + lN + np.abs(dpoch / np.where(poch == 0, 1, poch)))
            if np.all(nxt * fac < 0.1 * tol):
                converged = True
                break
    if not converged:
        raise PrecisionError(
            f"Euler-Maclaurin with N={N}, bernoulli_order={cfg.bernoulli_order} "
            f"cannot reach {tol:g} at |s| up to {np.abs(s).max():.4g}"
        )
    return val, dval


def _em(s: np.ndarray, cfg: PrecisionConfig, deriv: bool):
    s = np.asarray(s, dtype=complex).reshape(-1)
    val = np.empty_like(s)
    dval = np.empty_like(s) if deriv else None
    if s.size == 0:
        return val, dval
    # sort by height so each block shares a similar N
    order = np.argsort(np.abs(s.imag))
    for i in range(0, s.size, _BLOCK):
        idx = order[i : i + _BLOCK]
        v, d = _em_block(s[idx], cfg, deriv)
        val[idx] = v
        if deriv:
            dval[idx] = d
    return val, dval


def _check_pole(s: np.ndarray):
    if np.any(np.abs(s - 1.0) < 1e-8):
        raise PoleError("zeta has a pole at s = 1")


def _use_fe(s: np.ndarray) -> np.ndarray:
    return (s.real < 0.5) & (np.abs(s) >= 0.25)


def _wrap(out, scalar):
    return complex(out[0]) if scalar else out


def zeta(s, cfg: PrecisionConfig = DEFAULT, method: str = "auto"):
    """Riemann zeta. ``method='em'`` forces direct Euler-Maclaurin everywhere."""
    scalar = np.ndim(s) == 0
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    shape = s.shape
    s = s.reshape(-1)
    _check_pole(s)
    out = np.empty_like(s)
    fe = _use_fe(s) if method == "auto" else np.zeros(s.shape, bool)
    if method not in ("auto", "em"):
        raise ValueError(f"unknown method {method!r}")
    if np.any(~fe):
        out[~fe] = _em(s[~fe], cfg, False)[0]
    if np.any(fe):
        sf = s[fe]
        out[fe] = chi(sf) * _em(1.0 - sf, cfg, False)[0]
    return _wrap(out.reshape(shape), scalar)


def zeta_prime(s, cfg: PrecisionConfig = DEFAULT, method: str = "auto"):
    scalar = np.ndim(s) == 0
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    shape = s.shape
    s = s.reshape(-1)
    _check_pole(s)
    if method not in ("auto", "em"):
        raise ValueError(f"unknown method {method!r}")
    out = np.empty_like(s)
    fe = _use_fe(s) if method == "auto" else np.zeros(s.shape, bool)
    if np.any(~fe):
        out[~fe] = _em(s[~fe], cfg, True)[1]
    if np.any(fe):
        sf = s[fe]
        z1, dz1 = _em(1.0 - sf, cfg, True)
        # d/ds [chi(s) zeta(1-s)]
        out[fe] = chi_prime(sf) * z1 - chi(sf) * dz1
    return _wrap(out.reshape(shape), scalar)


def zeta_log_deriv(s, cfg: PrecisionConfig = DEFAULT):
    return zeta_prime(s, cfg) / zeta(s, cfg)


# -- functional-equation factor ------------------------------------------------

def _log_sin_cos(z: np.ndarray):
    """log sin z and log cos z without overflow for large |Im z|."""
    big = np.abs(z.imag) > 1.0
    ls = np.empty_like(z)
    lc = np.empty_like(z)
    if np.any(~big):
        zs = z[~big]
        ls[~big] = np.log(np.sin(zs) + 0j)
        lc[~big] = np.log(np.cos(zs) + 0j)
    if np.any(big):
        zb = z[big]
        flip = zb.imag < 0
        w = np.where(flip, np.conj(zb), zb)  # Im w > 1
        e = np.exp(2j * w)  # tiny
        # sin w = e^{-iw}(1 - e^{2iw}) * (i/2),  cos w = e^{-iw}(1 + e^{2iw}) / 2
        lsb = -1j * w + np.log(0.5j) + np.log1p(-e)
        lcb = -1j * w - math.log(2.0) + np.log1p(e)
        ls[big] = np.where(flip, np.conj(lsb), lsb)
        lc[big] = np.where(flip, np.conj(lcb), lcb)
    return ls, lc


def _integer_mask(s: np.ndarray, parity: int) -> np.ndarray:
    # real integers of the given parity: where sin (parity 0) or cos (parity 1) of pi s/2 vanish
    r = s.real
    return (s.imag == 0) & (r == np.round(r)) & (np.mod(np.round(r), 2) == parity)


def _gamma_poles(s: np.ndarray):
    one_minus = 1.0 - s
    bad = (np.abs(one_minus.imag) < 1e-14) & (one_minus.real <= 0) & (
        np.abs(one_minus.real - np.round(one_minus.real)) < 1e-12
    )
    if np.any(bad):
        raise PoleError("Gamma(1-s) has a pole at the requested point")


def _log_A(s: np.ndarray) -> np.ndarray:
    # chi(s) = A(s) sin(pi s / 2), A(s) = 2 (2 pi)^{s-1} Gamma(1-s)
    return math.log(2.0) + (s - 1.0) * LOG_2PI + loggamma(1.0 - s)


def chi(s):
    """chi(s) = 2 (2 pi)^{s-1} Gamma(1-s) sin(pi s/2), so zeta(s) = chi(s) zeta(1-s)."""
    scalar = np.ndim(s) == 0
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    _gamma_poles(s)
    z = 0.5 * math.pi * s
    ls, _ = _log_sin_cos(z.reshape(-1))
    zero = _integer_mask(s.reshape(-1), 0)
    out = np.where(zero, 0.0, np.exp(_log_A(s.reshape(-1)) + np.where(zero, 0, ls)))
    return _wrap(out.reshape(s.shape), scalar)


def chi_prime(s):
    """Derivative of chi, finite at the zeros of the sine factor."""
    scalar = np.ndim(s) == 0
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    _gamma_poles(s)
    flat = s.reshape(-1)
    z = 0.5 * math.pi * flat
    ls, lc = _log_sin_cos(z)
    la = _log_A(flat)
    psi_term = LOG_2PI - digamma(1.0 - flat)
    sin_zero = _integer_mask(flat, 0)
    cos_zero = _integer_mask(flat, 1)
    part1 = np.where(sin_zero, 0.0, psi_term * np.exp(la + np.where(sin_zero, 0, ls)))
    part2 = np.where(cos_zero, 0.0, 0.5 * math.pi * np.exp(la + np.where(cos_zero, 0, lc)))
    return _wrap((part1 + part2).reshape(s.shape), scalar)


def _cot(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    big = np.abs(z.imag) > 1.0
    if np.any(~big):
        zs = z[~big]
        out[~big] = np.cos(zs) / np.sin(zs)
    if np.any(big):
        zb = z[big]
        up = zb.imag > 0
        w = np.exp(2j * np.where(up, zb, -zb))
        out[big] = np.where(up, -1j * (1 + w) / (1 - w), 1j * (1 + w) / (1 - w))
    return out


def chi_log_deriv(s):
    """chi'(s)/chi(s) = log 2 pi - psi(1-s) + (pi/2) cot(pi s/2)."""
    scalar = np.ndim(s) == 0
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    _gamma_poles(s)
    flat = s.reshape(-1)
    if np.any(_integer_mask(flat, 0)):
        raise PoleError("chi'/chi has a pole where chi vanishes")
    out = LOG_2PI - digamma(1.0 - flat) + 0.5 * math.pi * _cot(0.5 * math.pi * flat)
    return _wrap(out.reshape(s.shape), scalar)


# -- Hardy Z -------------------------------------------------------------------

THETA_MIN_T = 10.0


def theta_exact(t):
    """Im log Gamma(1/4 + it/2) - (t/2) log pi, valid for every real t."""
    t = np.asarray(t, dtype=float)
    return loggamma(0.25 + 0.5j * t).imag - 0.5 * t * math.log(math.pi)


def theta_rs(t):
    """Riemann-Siegel theta from its asymptotic series (t >= 10)."""
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t < THETA_MIN_T):
        raise ValueError(f"asymptotic theta needs t >= {THETA_MIN_T}; use theta_exact")
    r = 1.0 / t
    r2 = r * r
    out = (
        0.5 * t * np.log(t / (2 * math.pi))
        - 0.5 * t
        - math.pi / 8
        + r * (1 / 48 + r2 * (7 / 5760 + r2 * (31 / 80640 + r2 * 127 / 430080)))
    )
    return float(out[0]) if scalar else out


def theta(t):
    t = np.asarray(t, dtype=float)
    if t.ndim == 0:
        return float(theta_rs(t)) if t >= THETA_MIN_T else float(theta_exact(t))
    out = np.empty_like(t)
    hi = t >= THETA_MIN_T
    out[hi] = theta_rs(t[hi])
    out[~hi] = theta_exact(t[~hi])
    return out


def hardy_z(t, cfg: PrecisionConfig = DEFAULT):
    """Z(t) = exp(i theta(t)) zeta(1/2 + it), real for real t."""
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t <= 0):
        raise ValueError("hardy_z needs t > 0")
    z = zeta(0.5 + 1j * t, cfg) * np.exp(1j * theta(t))
    out = z.real
    return float(out[0]) if scalar else out
