"""derive_constants: Laurent assembly or a least-squares fit against brute force.

Calibration observes three families of exactly computable sums:

* shifted sums sum_{u<=x,(u,k)=1} (Lambda*log)(hu), linear in (C0, C1);
* the M = 1 case sum_{m<=X} (Lambda*log)(m) = (X/2) R2(log X) + error,
  linear in the two lower coefficients of R2;
* M_0 with x = indicator of 1 and y = indicator of k = p^a, which isolates
  c'(k, 1) and is linear in the constant terms of R1 and R~1.

Each family is fitted by ordinary least squares. An oracle object supplies the
observations, so the same fit runs on brute-force data or on synthetic data
generated from known constants.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .. import arith
from ..coeffs import CoefficientVector
from .constants import P1_CLOSED, P2_CLOSED, MainTermConstants, laurent_constants
from .direct import m0_direct, shu_partial_sums
from .mainterm import _alpha2, m0_main_term, shu_main_term
from .params import MeanValueParams

MODES = ("laurent", "calibrate")
COND_LIMIT = 1e8


class FitError(RuntimeError):
    pass


@dataclass(frozen=True)
class CalibrationBudget:
    shu_pairs: tuple = ((1, 1), (2, 3), (6, 5), (1, 2), (1, 3), (5, 6), (4, 7), (1, 30), (3, 10))
    shu_x: tuple = (1e5, 2e5, 4e5, 7e5, 1e6)
    r2_X: tuple = (1e5, 2e5, 4e5, 7e5, 1e6, 2e6)
    r1_moduli: tuple = (2, 3, 4, 5, 7, 8, 9, 11, 13, 16)
    r1_X: tuple = (2e5, 5e5)

    def to_dict(self) -> dict:
        return {k: [list(v) if isinstance(v, tuple) else v for v in val] for k, val in asdict(self).items()}


class BruteForceOracle:
    """Observations from exact summation."""

    def shu(self, h: int, k: int, xs) -> np.ndarray:
        return shu_partial_sums(h, k, xs)

    def m1(self, Xs) -> np.ndarray:
        return shu_partial_sums(1, 1, Xs)

    def m0_delta(self, k: int, X: float) -> float:
        p = _delta_params(k, X)
        return m0_direct(p)


class SyntheticOracle:
    """Observations generated from known constants plus seeded relative noise."""

    def __init__(self, truth: MainTermConstants, noise: float = 1e-9, seed: int = 0):
        self.truth = truth
        self.noise = noise
        self.rng = np.random.default_rng(seed)

    def _jitter(self, v):
        v = np.asarray(v, dtype=float)
        return v * (1 + self.noise * self.rng.standard_normal(v.shape))

    def shu(self, h, k, xs):
        return self._jitter([shu_main_term(h, k, x, self.truth) for x in xs])

    def m1(self, Xs):
        return self._jitter([0.5 * X * self.truth.R2(math.log(X)) for X in Xs])

    def m0_delta(self, k, X):
        return float(self._jitter(m0_main_term(_delta_params(k, X), self.truth)))


def _delta_params(k: int, X: float) -> MeanValueParams:
    T = 2 * math.pi * X
    return MeanValueParams.with_M(T, k, CoefficientVector.indicator(k), CoefficientVector.indicator(k, at=k))


def _lstsq(A: np.ndarray, b: np.ndarray, name: str):
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    cond = float(np.linalg.cond(A))
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise FitError(f"{name} fit is ill-conditioned (condition number {cond:.3g})")
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    resid = b - A @ sol
    stats = {
        "n": int(b.size),
        "condition_number": cond,
        "residual_rms": float(np.sqrt(np.mean(resid**2))),
        "residual_max": float(np.abs(resid).max()),
    }
    return sol, stats


def fit_shu(oracle, base: MainTermConstants, budget: CalibrationBudget):
    """(C0, C1) from the shifted sums, residue-form constant term held fixed."""
    rows, rhs = [], []
    for h, k in budget.shu_pairs:
        vals = oracle.shu(h, k, budget.shu_x)
        e1 = arith.eta1(k)
        known0 = (
            arith.lambda_log(h)
            - arith.g_hk(h, k)
            + base.a2
            - 0.5 * e1 * e1
            - 1.5 * arith.eta1_prime(k)
        )
        for x, v in zip(budget.shu_x, vals):
            L = math.log(x)
            norm = v * k / (x * arith.euler_phi(k))
            known = 0.5 * L * L + 2 * (L - 1) * math.log(h) - e1 * (L - 1) + known0
            rows.append([L - 1, e1])
            rhs.append(norm - known)
    return _lstsq(rows, rhs, "shu")


def fit_r2(oracle, budget: CalibrationBudget):
    """Lower coefficients (b0, b1) of R2 from the M = 1 sums."""
    vals = oracle.m1(budget.r2_X)
    rows, rhs = [], []
    for X, v in zip(budget.r2_X, vals):
        L = math.log(X)
        rows.append([1.0, L])
        rhs.append(2 * v / X - L * L)
    return _lstsq(rows, rhs, "R2")


def fit_r1(oracle, base: MainTermConstants, budget: CalibrationBudget):
    """Constant terms of R1 and R~1 from M_0 with y = indicator of a prime power."""
    rows, rhs = [], []
    for k in budget.r1_moduli:
        f = arith.factor(k)
        if f.omega != 1:
            raise ValueError(f"r1 moduli must be prime powers, got {k}")
        lam, al1 = arith.von_mangoldt(k), arith.alpha_j(k, 1)
        for X in budget.r1_X:
            ell = math.log(X)
            c_obs = oracle.m0_delta(k, X) * k / X
            known = -0.5 * arith.lambda_k(k, 2) + ell * lam + ell * al1 + _alpha2(k, base)
            rows.append([lam, al1])
            rhs.append(c_obs - known)
    return _lstsq(rows, rhs, "R1")


def calibrate(
    budget: CalibrationBudget | None = None,
    oracle=None,
    base: MainTermConstants | None = None,
) -> MainTermConstants:
    budget = budget or CalibrationBudget()
    oracle = oracle or BruteForceOracle()
    base = base or laurent_constants()
    (C0, C1), s_shu = fit_shu(oracle, base, budget)
    (b0, b1), s_r2 = fit_r2(oracle, budget)
    (r10, t10), s_r1 = fit_r1(oracle, base, budget)
    out = base.replace(
        C0=float(C0),
        C1=float(C1),
        p1=P1_CLOSED,
        p2=P2_CLOSED,
        r1_poly=(float(r10), 1.0),
        r1_tilde=(float(t10), 1.0),
        r2=(float(b0), float(b1), 1.0),
        source="calibrate",
        meta={},
    )
    diffs = {
        "C0": out.C0 - base.C0,
        "C1": out.C1 - base.C1,
        "r1_poly[0]": out.r1_poly[0] - base.r1_poly[0],
        "r1_tilde[0]": out.r1_tilde[0] - base.r1_tilde[0],
        "r2[0]": out.r2[0] - base.r2[0],
        "r2[1]": out.r2[1] - base.r2[1],
    }
    meta = {
        "fit": {"shu": s_shu, "R2": s_r2, "R1": s_r1},
        "minus_laurent": diffs,
        "budget": budget.to_dict(),
        "oracle": type(oracle).__name__,
    }
    return out.replace(meta=meta)


def derive_constants(mode: str = "laurent", budget: CalibrationBudget | None = None, oracle=None, alpha2_form="derived"):
    """Constants record by Laurent assembly or by calibration against brute force."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    base = laurent_constants()
    if alpha2_form != base.alpha2_form:
        base = base.replace(alpha2_form=alpha2_form)
    if mode == "laurent":
        return base
    return calibrate(budget, oracle, base)
