"""Explicit main terms: shifted (Lambda*log) sums, M_0, the S_R diagonal and S."""

from __future__ import annotations

import math

import numpy as np

from .. import arith
from .constants import ConstantsError, MainTermConstants
from .params import MeanValueParams

SHU_FORMS = ("residue", "display")


def shu_main_term(h: int, k: int, x: float, c: MainTermConstants, form: str = "residue") -> float:
    """Main term for sum_{u <= x, (u,k)=1} (Lambda*log)(h u).

    Both forms share (x phi(k)/k)(L^2/2 + 2(L-1) log h + (Lambda*log)(h)
    + (C0 - eta1)(L - 1) + C1 eta1 - g(h,k) + K(k)) with L = log x. The
    "residue" form takes K = a2 - eta1^2/2 - 3/2 eta1' (the exact residue at
    z = 1); the "display" form takes K = -eta2.
    """
    if form not in SHU_FORMS:
        raise ValueError(f"form must be one of {SHU_FORMS}")
    L = math.log(x)
    e1 = arith.eta1(k)
    if form == "residue":
        K = c.a2 - 0.5 * e1 * e1 - 1.5 * arith.eta1_prime(k)
    else:
        K = -arith.eta2(k)
    lh = math.log(h)
    inner = (
        0.5 * L * L
        + 2 * (L - 1) * lh
        + arith.lambda_log(h)
        + (c.C0 - e1) * (L - 1)
        + c.C1 * e1
        - arith.g_hk(h, k)
        + K
    )
    return x * arith.euler_phi(k) / k * inner


def _check(c):
    if c is None:
        raise ConstantsError("main-term constants not initialized; derive or load them first")


def _alpha2(n: int, c: MainTermConstants) -> float:
    if c.alpha2_form == "derived":
        return arith.alpha2_residue(n)
    return arith.alpha_j(n, 2, c.D)


def _dense(params: MeanValueParams):
    M = params.M
    return params.x.dense(M), params.y.dense(M)


def sr_diagonal(params: MeanValueParams, c: MainTermConstants) -> float:
    """(T/2pi) sum_{nu <= M} x_u y_{nu} r0(n) / (nu)."""
    _check(c)
    x, y = _dense(params)
    M, ell = params.M, params.L
    P2, P1 = c.P2(ell), c.P1(ell)
    terms = []
    for u in np.nonzero(x)[0]:
        for n in range(1, M // u + 1):
            if y[n * u]:
                r0 = P2 - 2 * P1 * math.log(n) + arith.lambda_log(n)
                terms.append(x[u] * y[n * u] * r0 / (n * u))
    return params.X * math.fsum(terms)


def _h_table(x: np.ndarray, y: np.ndarray, M: int) -> dict[tuple[int, int], float]:
    """H(M; u, v) = sum_{g <= min(M/u, M/v)} y_{ug} x_{vg} / g over coprime (u, v)."""
    H: dict[tuple[int, int], list[float]] = {}
    for g in range(1, M + 1):
        us = [u for u in range(1, M // g + 1) if y[u * g]]
        vs = [v for v in range(1, M // g + 1) if x[v * g]]
        for u in us:
            for v in vs:
                if math.gcd(u, v) == 1:
                    H.setdefault((u, v), []).append(y[u * g] * x[v * g] / g)
    return {k: math.fsum(v) for k, v in H.items()}


def _c_prime(u: int, v: int, params: MeanValueParams, c: MainTermConstants) -> float:
    """-Lambda_2(u)/2 + R1(l_v) Lambda(u) + R~1(l_v) alpha_1(u) + alpha_2(u), l_v = log(T/2pi v)."""
    if u == 1:
        return 0.0
    lv = math.log(params.X / v)
    return (
        -0.5 * arith.lambda_k(u, 2)
        + c.R1(lv) * arith.von_mangoldt(u)
        + c.R1t(lv) * arith.alpha_j(u, 1)
        + _alpha2(u, c)
    )


def off_diagonal(params: MeanValueParams, c: MainTermConstants) -> float:
    """(T/2pi) sum_{(u,v)=1} c'(u,v) H(M;u,v) / (uv)."""
    _check(c)
    x, y = _dense(params)
    H = _h_table(x, y, params.M)
    terms = [_c_prime(u, v, params, c) * h / (u * v) for (u, v), h in H.items()]
    return params.X * math.fsum(terms)


def r2_sum(params: MeanValueParams, c: MainTermConstants) -> float:
    """(T/4pi) sum_{gv <= M} y_g x_{gv} R2(log(T/2pi v)) / (gv)."""
    _check(c)
    x, y = _dense(params)
    M = params.M
    terms = []
    for g in np.nonzero(y)[0]:
        for v in range(1, M // g + 1):
            if x[g * v]:
                terms.append(y[g] * x[g * v] * c.R2(math.log(params.X / v)) / (g * v))
    return 0.5 * params.X * math.fsum(terms)


def m0_main_term(params: MeanValueParams, c: MainTermConstants) -> float:
    return off_diagonal(params, c) + r2_sum(params, c)


def theorem1_main_term(params: MeanValueParams, c: MainTermConstants) -> float:
    """S_R diagonal minus the M_0 main term; for real coefficients this is real.

    The third sum carries r_1 = -c' with H(M; a, b) = sum_g y_{ag} x_{bg} / g.
    """
    return sr_diagonal(params, c) - m0_main_term(params, c)


def r1(a: int, b: int, T: float, c: MainTermConstants) -> float:
    """r_1(a, b) = Lambda_2(a)/2 - R1 Lambda(a) - R~1 alpha_1(a) - alpha_2(a) at l = log(T/2pi b)."""
    _check(c)
    if a == 1:
        return 0.0
    lb = math.log(T / (2 * math.pi * b))
    return (
        0.5 * arith.lambda_k(a, 2)
        - c.R1(lb) * arith.von_mangoldt(a)
        - c.R1t(lb) * arith.alpha_j(a, 1)
        - _alpha2(a, c)
    )
