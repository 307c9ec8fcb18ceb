"""Contour integrals along Re s = kappa by vectorized adaptive Gauss-Kronrod panels."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import arith
from ..zeta import DEFAULT, PrecisionConfig, chi, chi_log_deriv, zeta, zeta_prime
from .constants import P1_CLOSED, P2_CLOSED, MainTermConstants
from .mainterm import sr_diagonal
from .params import MeanValueParams

# 15-point Kronrod extension of the 7-point Gauss rule (nodes on [0, 1], symmetric)
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                0.381830050505118944950369775488975, 0.417959183673469387755102040816327])

NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
WK = np.concatenate([_WK[:-1], _WK[::-1]])
WG = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod nodes
WG[[1, 3, 5]] = _WG[:3]
WG[7] = _WG[3]
WG[[9, 11, 13]] = _WG[2::-1]

MAX_PANELS = 1 << 20
CHUNK = 1 << 15


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error: float
    panels: int


def integrate(f, a: float, b: float, abs_tol: float, max_width: float = math.inf, max_panels: int = MAX_PANELS) -> QuadResult:
    """Adaptive G7/K15 on [a, b] with panels no wider than ``max_width``.

    ``f`` maps an array of abscissae to complex values. A panel is accepted
    when |K15 - G7| is within its share (width / (b - a)) of ``abs_tol``;
    others are bisected until ``max_panels`` would be exceeded.
    """
    if not b > a:
        return QuadResult(0j, 0.0, 0)
    n0 = max(1, int(math.ceil((b - a) / max_width)))
    edges = np.linspace(a, b, n0 + 1)
    lo, hi = edges[:-1], edges[1:]
    total, err_acc, used = [], [], 0
    for _ in range(60):
        if lo.size == 0:
            break
        used += lo.size
        if used > max_panels:
            raise QuadratureError(f"quadrature did not converge within {max_panels} panels on [{a}, {b}]")
        kv, gv = _apply(f, lo, hi)
        err = np.abs(kv - gv)
        ok = err <= abs_tol * (hi - lo) / (b - a)
        total.append(kv[ok])
        err_acc.append(err[ok])
        mid = 0.5 * (lo + hi)
        lo, hi = np.concatenate([lo[~ok], mid[~ok]]), np.concatenate([mid[~ok], hi[~ok]])
    else:
        raise QuadratureError(f"quadrature bisection depth exhausted on [{a}, {b}]")
    vals = np.concatenate(total)
    return QuadResult(
        complex(math.fsum(vals.real), math.fsum(vals.imag)),
        float(np.concatenate(err_acc).sum()),
        used,
    )


def _apply(f, lo, hi):
    kv = np.empty(lo.size, dtype=complex)
    gv = np.empty(lo.size, dtype=complex)
    step = max(1, CHUNK // 15)
    for i in range(0, lo.size, step):
        l, h = lo[i : i + step], hi[i : i + step]
        c, r = 0.5 * (l + h), 0.5 * (h - l)
        t = c[:, None] + r[:, None] * NODES[None, :]
        y = np.asarray(f(t.ravel()), dtype=complex).reshape(t.shape)
        kv[i : i + step] = r * (y @ WK)
        gv[i : i + step] = r * (y @ WG)
    return kv, gv


def panel_width(freq: float) -> float:
    return math.pi / (2 * max(freq, 1.0))


def e(x):
    return np.exp(2j * np.pi * x)


# -- Gonek-type lemma ------------------------------------------------------------

@dataclass(frozen=True)
class GonekRecord:
    r: float
    T: float
    kappa: float
    quadrature: complex
    predicted: complex
    residual: float
    envelope: float

    @property
    def within(self) -> bool:
        return self.residual <= self.envelope


def gonek_envelope(r: float, T: float, kappa: float) -> float:
    return (T ** (kappa - 0.5) + T ** (kappa + 0.5) / (abs(T - 2 * math.pi * r) + math.sqrt(T))) * r ** (-kappa)


def gonek_integral_check(r: float, T: float, kappa: float, cfg: PrecisionConfig = DEFAULT) -> GonekRecord:
    """(1/2 pi i) int_{kappa+i}^{kappa+iT} chi(1-s) r^{-s} ds against delta(r) e(-r)."""
    if not 1 <= kappa <= 2:
        raise ValueError("kappa must lie in [1, 2]")
    if r <= 0:
        raise ValueError("r must be positive")
    X = T / (2 * math.pi)
    if abs(r - X) < 0.05 * X:
        raise ValueError(f"r={r} is within 5% of T/2pi={X:.4g}; the lemma is discontinuous there")
    lr = math.log(r)

    def f(t):
        s = kappa + 1j * t
        return chi(1 - s) * np.exp(-s * lr)

    freq = abs(math.log(T / (2 * math.pi))) + abs(lr) + 1
    res = integrate(f, 1.0, T, abs_tol=1e-8 * max(1.0, T ** (kappa - 0.5)), max_width=panel_width(freq))
    quad = res.value / (2 * math.pi)
    pred = complex(e(-r)) if r <= X else 0j
    return GonekRecord(r, T, kappa, quad, pred, abs(quad - pred), gonek_envelope(r, T, kappa))


# -- J_k -----------------------------------------------------------------------

def log_power_integral(k: int, T: float) -> float:
    """int_1^T log^k(t/2pi) dt by the closed-form antiderivative t P_k(log(t/2pi))."""
    P = {0: (1.0,), 1: P1_CLOSED, 2: P2_CLOSED}[k]
    F = lambda t: t * np.polynomial.polynomial.polyval(math.log(t / (2 * math.pi)), P)
    return F(T) - F(1.0)


def log_power_integral_numeric(k: int, T: float) -> float:
    from scipy.integrate import quad

    val, _ = quad(lambda t: math.log(t / (2 * math.pi)) ** k, 1.0, T, limit=200)
    return val


def _series(alpha, cfg: PrecisionConfig, terms: int):
    """Dirichlet series D(s) = sum alpha_n n^-s; closed forms for the three used in S_R."""
    name = getattr(alpha, "name", None)
    if name == "one":
        return (lambda s: zeta(s, cfg)), 0.0
    if name == "log":
        return (lambda s: -zeta_prime(s, cfg)), 0.0
    if name == "lambda_log":
        return (lambda s: zeta_prime(s, cfg) ** 2 / zeta(s, cfg)), 0.0
    n = np.arange(1, terms + 1)
    a = np.array([alpha(int(v)) for v in n])
    logs = np.log(n)

    def D(s):
        return np.exp(-np.outer(s, logs)) @ a

    return D, float(np.abs(a).max(initial=0.0))


LAMBDA_LOG = arith.ArithFn("lambda_log", arith.lambda_log)


@dataclass(frozen=True)
class JkRecord:
    k: int
    T: float
    quadrature: complex
    diagonal_formula: float
    rel_error: float
    integral: float
    integral_closed: float
    integral_diff: float
    tail_estimate: float


def _kappa(T: float) -> float:
    return 1.0 + 1.0 / math.log(T)


def jk_check(k: int, alpha, params: MeanValueParams, cfg: PrecisionConfig = DEFAULT, terms: int = 2000) -> JkRecord:
    """J_k by quadrature against its diagonal (-1)^k T P_k / 2pi sum alpha_n x_u y_nu / nu."""
    if k not in (0, 1, 2):
        raise ValueError("k must be 0, 1 or 2")
    T, kap = params.T, _kappa(params.T)
    D, amax = _series(alpha, cfg, terms)
    tail = amax * terms ** (1 - kap) / (kap - 1) if amax else 0.0

    def f(t):
        s = kap + 1j * t
        return chi_log_deriv(s) ** k * D(s) * params.x.evaluate(s) * params.y.evaluate(1 - s)

    freq = math.log(max(params.M, 2) * params.X)
    res = integrate(f, 1.0, T, abs_tol=1e-6 * T, max_width=panel_width(freq))
    quad = res.value / (2 * math.pi)

    x, y = params.x.dense(params.M), params.y.dense(params.M)
    diag = []
    for u in np.nonzero(x)[0]:
        for n in range(1, params.M // u + 1):
            if y[n * u]:
                diag.append(float(alpha(n)) * x[u] * y[n * u] / (n * u))
    P = {0: (1.0,), 1: P1_CLOSED, 2: P2_CLOSED}[k]
    formula = (-1) ** k * T * np.polynomial.polynomial.polyval(params.L, P) / (2 * math.pi) * math.fsum(diag)
    closed = log_power_integral(k, T)
    tp = T * np.polynomial.polynomial.polyval(params.L, P)
    return JkRecord(
        k, T, quad, float(formula), abs(quad - formula) / max(abs(formula), 1e-30),
        closed, float(tp), float(closed - tp), tail,
    )


# -- S_R -----------------------------------------------------------------------

def sr_integrand(params: MeanValueParams, cfg: PrecisionConfig = DEFAULT):
    kap = _kappa(params.T)

    def f(t):
        s = kap + 1j * t
        z = np.asarray(zeta(s, cfg))
        zp = np.asarray(zeta_prime(s, cfg))
        q = chi_log_deriv(s)
        return (q * q * z - 2 * q * zp + zp * zp / z) * params.x.evaluate(s) * params.y.evaluate(1 - s)

    return f


def sr_quadrature(params: MeanValueParams, cfg: PrecisionConfig = DEFAULT) -> complex:
    """S_R = (1/2 pi i) int_{kappa+i}^{kappa+iT} (...) X(s) Y(1-s) ds, kappa = 1 + 1/log T."""
    if params.x.is_zero() or params.y.is_zero():
        return 0j
    freq = math.log(max(params.M, 2) * params.X)
    res = integrate(sr_integrand(params, cfg), 1.0, params.T, abs_tol=1e-6 * params.T, max_width=panel_width(freq))
    return res.value / (2 * math.pi)


def sr_check(params: MeanValueParams, c: MainTermConstants, cfg: PrecisionConfig = DEFAULT) -> dict:
    quad = sr_quadrature(params, cfg)
    diag = sr_diagonal(params, c)
    return {"quadrature": quad, "diagonal": diag, "rel_error": abs(quad - diag) / max(abs(diag), 1e-30)}
