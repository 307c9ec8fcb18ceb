from __future__ import annotations

import math
from dataclasses import dataclass

from ..coeffs import CoefficientVector, ResonatorParams, divisor_coefficients, resonator

CASES = ("divisor", "resonator", "custom")


@dataclass(frozen=True)
class MeanValueParams:
    """One experiment point: height T, length M = floor(T^theta), coefficients x, y."""

    T: float
    theta: float
    x: CoefficientVector
    y: CoefficientVector
    case_label: str = "custom"

    def __post_init__(self):
        if not self.T > 2 * math.pi:
            raise ValueError(f"T must exceed 2 pi, got {self.T}")
        if not 0 < self.theta < 0.5:
            raise ValueError(f"theta must lie in (0, 1/2), got {self.theta}")
        if self.case_label not in CASES:
            raise ValueError(f"case_label must be one of {CASES}")
        if self.M > math.sqrt(self.T):
            raise ValueError(f"M={self.M} exceeds sqrt(T)")
        for name, c in (("x", self.x), ("y", self.y)):
            if c.M > self.M:
                raise ValueError(f"{name} has length {c.M} > M={self.M}")

    @property
    def M(self) -> int:
        # guard against T^theta landing a hair under an integer
        return int(math.floor(self.T**self.theta * (1 + 1e-12)))

    @property
    def X(self) -> float:
        return self.T / (2 * math.pi)

    @property
    def L(self) -> float:
        return math.log(self.X)

    @staticmethod
    def theta_for(T: float, M: int) -> float:
        """A theta with floor(T^theta) == M."""
        return math.log(M + 0.5) / math.log(T)

    @classmethod
    def with_M(cls, T: float, M: int, x: CoefficientVector, y: CoefficientVector, case_label="custom"):
        return cls(T, cls.theta_for(T, M), x, y, case_label)

    @classmethod
    def divisor(cls, T: float, theta: float, P=(0.0, 1.0)) -> "MeanValueParams":
        M = int(math.floor(T**theta * (1 + 1e-12)))
        c = divisor_coefficients(M, P) if M >= 2 else CoefficientVector.indicator(1)
        return cls(T, theta, c, c, "divisor")

    @classmethod
    def resonator_case(cls, T: float, theta: float, override_interval=None) -> "MeanValueParams":
        M = int(math.floor(T**theta * (1 + 1e-12)))
        c = resonator(ResonatorParams(M, override_interval))
        return cls(T, theta, c, c, "resonator")

    def with_T(self, T: float) -> "MeanValueParams":
        """Same coefficients at a new height (theta adjusted so M is unchanged)."""
        return MeanValueParams(T, self.theta_for(T, self.M), self.x, self.y, self.case_label)

    def describe(self) -> dict:
        return {
            "T": self.T,
            "theta": self.theta,
            "M": self.M,
            "case": self.case_label,
            "x": self.x.label,
            "y": self.y.label,
        }
