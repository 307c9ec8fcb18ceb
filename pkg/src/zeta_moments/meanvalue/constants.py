"""Main-term constants: Laurent data at z = 1 and the monic polynomials."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .._io import atomic_write_text
from ..zeta.special import stieltjes

ALPHA2_FORMS = ("derived", "stated")


class ConstantsError(RuntimeError):
    """Constants missing, malformed or not yet derived."""


def _monic(name: str, coeffs, degree: int) -> tuple[float, ...]:
    c = tuple(float(v) for v in coeffs)
    if len(c) != degree + 1:
        raise ValueError(f"{name} must have degree {degree}, got coefficients {c}")
    if c[-1] != 1.0:
        raise ValueError(f"{name} must be monic, leading coefficient is {c[-1]}")
    return c


@dataclass(frozen=True)
class MainTermConstants:
    """Coefficient lists are in increasing degree; every polynomial is monic.

    ``alpha2_form`` picks the arithmetic function alpha_2 used by the
    r_1 / c' terms: "derived" is the form obtained by carrying the residue at
    z = 1 through exactly (no free constant), "stated" the closed form
    with the free constant ``D``.
    """

    a1: float
    a2: float
    C0: float
    C1: float
    D: float
    p1: tuple[float, ...]
    p2: tuple[float, ...]
    r1_poly: tuple[float, ...]
    r1_tilde: tuple[float, ...]
    r2: tuple[float, ...]
    alpha2_form: str = "derived"
    source: str = "laurent"
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for name, deg in (("p1", 1), ("p2", 2), ("r1_poly", 1), ("r1_tilde", 1), ("r2", 2)):
            object.__setattr__(self, name, _monic(name, getattr(self, name), deg))
        if self.alpha2_form not in ALPHA2_FORMS:
            raise ValueError(f"alpha2_form must be one of {ALPHA2_FORMS}")
        vals = [self.a1, self.a2, self.C0, self.C1, self.D]
        if not all(np.isfinite(vals)):
            raise ValueError("constants must be finite")

    @staticmethod
    def poly(coeffs, x):
        return np.polynomial.polynomial.polyval(x, coeffs)

    def P1(self, x):
        return self.poly(self.p1, x)

    def P2(self, x):
        return self.poly(self.p2, x)

    def R1(self, x):
        return self.poly(self.r1_poly, x)

    def R1t(self, x):
        return self.poly(self.r1_tilde, x)

    def R2(self, x):
        return self.poly(self.r2, x)

    def replace(self, **kw) -> "MainTermConstants":
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d.update(kw)
        return MainTermConstants(**d)

    # JSON text form; repr of floats round-trips exactly
    def to_dict(self) -> dict:
        d = asdict(self)
        for k in ("p1", "p2", "r1_poly", "r1_tilde", "r2"):
            d[k] = list(d[k])
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def save(self, path: str | Path) -> None:
        atomic_write_text(path, self.dumps())

    @classmethod
    def from_dict(cls, d: dict) -> "MainTermConstants":
        try:
            return cls(**d)
        except TypeError as exc:
            raise ConstantsError(f"malformed constants record: {exc}") from None

    @classmethod
    def loads(cls, text: str) -> "MainTermConstants":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConstantsError(f"constants file is not valid JSON: {exc}") from None
        return cls.from_dict(d)

    @classmethod
    def load(cls, path: str | Path) -> "MainTermConstants":
        path = Path(path)
        if not path.exists():
            raise ConstantsError(
                f"constants file {path} not found; run `zeta-moments calibrate --out {path}` first"
            )
        return cls.loads(path.read_text())


def laurent_coefficients() -> tuple[float, float]:
    """a1, a2 with zeta'(z)^2/zeta(z) = (z-1)^-3 (1 + a1 (z-1) + a2 (z-1)^2 + ...)."""
    g0, g1 = stieltjes(0), stieltjes(1)
    return -g0, g0 * g0 + 3.0 * g1


# closed-form antiderivatives of log^k(t/2pi): t * P_k(log(t/2pi))
P1_CLOSED = (-1.0, 1.0)
P2_CLOSED = (2.0, -2.0, 1.0)


def laurent_constants() -> MainTermConstants:
    """Every constant assembled from the residue bookkeeping at z = 1.

    With l = log(T/2pi v): R1 = R~1 = l - 1 - a1 and
    R2 = l^2 + 2(a1 - 1) l + 2(a2 - a1 + 1); C0 = a1 - 1 and C1 = a1.
    D is absorbed into the constant of R~1 (it multiplies alpha_1) and is 0.
    """
    a1, a2 = laurent_coefficients()
    r1 = (-1.0 - a1, 1.0)
    return MainTermConstants(
        a1=a1,
        a2=a2,
        C0=a1 - 1.0,
        C1=a1,
        D=0.0,
        p1=P1_CLOSED,
        p2=P2_CLOSED,
        r1_poly=r1,
        r1_tilde=r1,
        r2=(2.0 * (a2 - a1 + 1.0), 2.0 * (a1 - 1.0), 1.0),
        source="laurent",
    )
