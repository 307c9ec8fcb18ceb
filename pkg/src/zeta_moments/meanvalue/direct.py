"""Brute-force sides: the discrete sum over zeros, M_0 and the shifted (Lambda*log) sums."""

from __future__ import annotations

import math

import numpy as np

from .. import arith
from ..coeffs import CoefficientVector
from ..zeta import DEFAULT, PrecisionConfig, zeta_prime
from ..zeta.zeros import ZeroList
from .params import MeanValueParams

TABLE_BOUND = 10**8
M0_BUDGET = 10**8
SHU_X_MAX = 10**7


class BudgetError(ValueError):
    pass


class UncertifiedZerosError(RuntimeError):
    pass


def a_coefficients(d: int, N: int, x: CoefficientVector) -> np.ndarray:
    """out[m] = a(m d) for 0 <= m <= N, a = Lambda * log * x (out[0] = 0)."""
    if d < 1 or N < 0:
        raise ValueError("need d >= 1 and N >= 0")
    top = N * d
    if top > TABLE_BOUND:
        raise BudgetError(f"N*d = {top} exceeds the table bound {TABLE_BOUND}")
    if top == 0:
        return np.zeros(1)
    # share one cached table across nearby sizes
    size = min(max(1 << (top - 1).bit_length(), 1024), TABLE_BOUND)
    ll = arith.lambda_log_table(max(size, top))[: top + 1]
    a = arith.dirichlet_convolve(ll, x.dense(min(x.M, top)), top)
    return a[::d].copy()


def _shifted_lambda_log(h: int, x: int) -> np.ndarray:
    """F[u] = (Lambda*log)(h u) for 0 <= u <= x, without a table up to h x.

    p^a | hu with v_p(h) = e holds for all u when a <= e and exactly when
    p^(a-e) | u otherwise, so each prime power p^b <= x adds
    log p * log(hu / p^(b+e)) on the multiples of p^b.
    """
    out = np.zeros(x + 1)
    if x < 1:
        return out
    logs = arith.log_table(x) + math.log(h)
    hf = arith.factor(h)
    for p, e in hf.factors:
        lp = math.log(p)
        for a in range(1, e + 1):
            out[1:] += lp * (logs[1:] - a * lp)
    if x >= 2:
        ev = dict(hf.factors)
        vals, bases = arith._prime_power_list(x)
        for q, p in zip(vals.tolist(), bases.tolist()):
            b = round(math.log(q) / math.log(p))
            lp = math.log(p)
            m = x // q
            out[q::q][:m] += lp * (logs[q::q][:m] - (b + ev.get(p, 0)) * lp)
    out[0] = 0.0
    return out


def shu_partial_sums(h: int, k: int, x_values) -> np.ndarray:
    """sum_{u <= x, (u,k)=1} (Lambda*log)(h u) for each x, exactly summed."""
    xs = [int(math.floor(v)) for v in x_values]
    if not xs:
        return np.zeros(0)
    top = max(xs)
    if top > SHU_X_MAX:
        raise BudgetError(f"x = {top} exceeds the brute-force bound {SHU_X_MAX}")
    F = _shifted_lambda_log(h, top)
    for p in arith.factor(k).primes:
        F[::p] = 0.0
    # cumulative sums drift for large x; fsum each segment instead
    out = np.zeros(len(xs))
    parts, prev = [], 0
    for i in np.argsort(xs):
        parts.append(math.fsum(F[prev + 1 : xs[i] + 1]))
        out[i] = math.fsum(parts)
        prev = xs[i]
    return out


def _ramanujan_weights(k: int) -> np.ndarray:
    """w[r] = mu(k/(r,k)) / phi(k/(r,k)) for residues r mod k."""
    w = np.zeros(k)
    for r in range(k):
        q = k // math.gcd(r, k)
        mu = arith.mobius(q)
        if mu:
            w[r] = mu / arith.euler_phi(q)
    return w


def m0_direct(params: MeanValueParams, cfg: PrecisionConfig = DEFAULT, block: int = 1 << 20) -> float:
    """sum_{k<=M} y_k/k sum_{m <= kT/2pi} a(m) mu(k/(m,k))/phi(k/(m,k)), exactly.

    The inner sums are accumulated block by block with math.fsum.
    """
    X = params.X
    if params.M * X > M0_BUDGET:
        raise BudgetError(f"M*T/2pi = {params.M * X:.3g} exceeds the brute-force budget {M0_BUDGET:.0e}")
    ys = [(k, v) for k, v in params.y.items() if k <= params.M]
    if not ys or params.x.is_zero():
        return 0.0
    N = int(math.floor(ys[-1][0] * X))
    a = a_coefficients(1, N, params.x)
    terms = []
    for k, yk in ys:
        top = int(math.floor(k * X))
        w = _ramanujan_weights(k)
        inner = []
        for lo in range(1, top + 1, block):
            hi = min(top, lo + block - 1)
            m = np.arange(lo, hi + 1)
            inner.append(math.fsum(a[lo : hi + 1] * w[m % k]))
        terms.append(yk / k * math.fsum(inner))
    return math.fsum(terms)


def _compensated(values: np.ndarray) -> complex:
    return complex(math.fsum(values.real), math.fsum(values.imag))


def discrete_sum(params: MeanValueParams, zeros: ZeroList, cfg: PrecisionConfig = DEFAULT) -> complex:
    """sum_{0<gamma<T} zeta'(rho) X(rho) Y(1-rho) over certified zeros."""
    if not zeros.certified:
        raise UncertifiedZerosError("discrete_sum needs a certified zero list")
    if zeros.T < params.T:
        raise UncertifiedZerosError(f"zeros certified only below {zeros.T}, need {params.T}")
    g = zeros.gammas[zeros.gammas < params.T]
    if g.size == 0:
        return 0j
    rho = 0.5 + 1j * g
    vals = np.asarray(zeta_prime(rho, cfg)) * params.x.evaluate(rho) * params.y.evaluate(1 - rho)
    return _compensated(vals)
