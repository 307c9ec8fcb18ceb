"""Dirichlet-polynomial coefficient families and their norms.

Coefficients are stored sparsely (sorted support plus values), so very long
but thin polynomials such as the resonator at M = 10^9 are cheap. Dense arrays
are materialized on request up to ``DENSE_CAP``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from . import arith
from ._io import atomic_write_text

DENSE_CAP = 10**7


@dataclass(frozen=True, eq=False)
class CoefficientVector:
    """c_n for 1 <= n <= M; any index not in ``support`` carries 0."""

    M: int
    support: np.ndarray
    coeffs: np.ndarray
    label: str = ""

    def __post_init__(self):
        if self.M < 1:
            raise ValueError(f"support bound M={self.M} must be positive")
        idx = np.asarray(self.support, dtype=np.int64).copy()
        val = np.asarray(self.coeffs, dtype=float).copy()
        if idx.shape != val.shape or idx.ndim != 1:
            raise ValueError("support and coeffs must be 1-d arrays of equal length")
        if idx.size and (idx.min() < 1 or idx.max() > self.M):
            raise ValueError(f"indices must lie in 1..{self.M}")
        order = np.argsort(idx, kind="stable")
        idx, val = idx[order], val[order]
        if idx.size > 1 and np.any(np.diff(idx) == 0):
            raise ValueError("duplicate indices")
        keep = val != 0.0
        idx, val = idx[keep], val[keep]
        idx.flags.writeable = False
        val.flags.writeable = False
        object.__setattr__(self, "support", idx)
        object.__setattr__(self, "coeffs", val)

    # construction
    @classmethod
    def from_dense(cls, values, label: str = "") -> "CoefficientVector":
        """``values[n]`` for n = 0..M; ``values[0]`` is ignored."""
        arr = np.asarray(values, dtype=float)
        M = arr.shape[0] - 1
        idx = np.nonzero(arr[1:])[0] + 1
        return cls(M, idx, arr[idx], label)

    @classmethod
    def from_mapping(cls, M: int, values: Mapping[int, float], label: str = "") -> "CoefficientVector":
        keys = np.fromiter(values.keys(), dtype=np.int64, count=len(values))
        vals = np.fromiter((float(v) for v in values.values()), dtype=float, count=len(values))
        return cls(M, keys, vals, label)

    @classmethod
    def from_function(cls, M: int, fn: Callable[[int], float], label: str = "") -> "CoefficientVector":
        if M > DENSE_CAP:
            raise ValueError(f"M={M} exceeds dense cap {DENSE_CAP}")
        return cls.from_dense([0.0] + [float(fn(n)) for n in range(1, M + 1)], label)

    @classmethod
    def indicator(cls, M: int = 1, at: int = 1, label: str | None = None) -> "CoefficientVector":
        return cls(M, [at], [1.0], label if label is not None else f"indicator({at})")

    @classmethod
    def ones(cls, M: int) -> "CoefficientVector":
        return cls(M, np.arange(1, M + 1), np.ones(M), "ones")

    # access
    def get(self, n: int) -> float:
        if not 1 <= n <= self.M:
            raise IndexError(f"coefficient index {n} outside 1..{self.M}")
        i = int(np.searchsorted(self.support, n))
        if i < self.support.size and self.support[i] == n:
            return float(self.coeffs[i])
        return 0.0

    __getitem__ = get

    def dense(self, N: int | None = None) -> np.ndarray:
        """Array of length N+1 (default M+1) with entry n = c_n and entry 0 = 0."""
        N = self.M if N is None else N
        if N > DENSE_CAP:
            raise ValueError(f"dense length {N} exceeds cap {DENSE_CAP}")
        out = np.zeros(N + 1)
        m = self.support <= N
        out[self.support[m]] = self.coeffs[m]
        return out

    def items(self):
        return zip(self.support.tolist(), self.coeffs.tolist())

    def is_zero(self) -> bool:
        return self.support.size == 0

    def scaled(self, lam: float) -> "CoefficientVector":
        return CoefficientVector(self.M, self.support, lam * self.coeffs, f"{lam:g}*{self.label}")

    def evaluate(self, s) -> np.ndarray:
        """sum_n c_n n^{-s} at one point or an array of points."""
        s = np.asarray(s, dtype=complex)
        if self.support.size == 0:
            return np.zeros_like(s)
        logs = np.log(self.support.astype(float))
        flat = s.reshape(-1)
        out = np.exp(-np.outer(flat, logs)) @ self.coeffs
        return out.reshape(s.shape)

    # text format: header line, then "n value" rows for the nonzero entries
    def dumps(self) -> str:
        rows = [f"# coeffs label={self.label} M={self.M}"]
        rows += [f"{n} {v!r}" for n, v in self.items()]
        return "\n".join(rows) + "\n"

    def save(self, path: str | Path) -> None:
        atomic_write_text(path, self.dumps())

    @classmethod
    def loads(cls, text: str) -> "CoefficientVector":
        lines = text.splitlines()
        if not lines or not lines[0].startswith("# coeffs "):
            raise ValueError("missing '# coeffs' header")
        head = lines[0][len("# coeffs ") :]
        label_part, sep, m_part = head.rpartition(" M=")
        if not sep or not label_part.startswith("label="):
            raise ValueError(f"malformed header: {lines[0]!r}")
        M = int(m_part)
        idx, val = [], []
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected 'n value'")
            n = int(parts[0])
            if not 1 <= n <= M:
                raise ValueError(f"line {lineno}: index {n} outside 1..{M}")
            idx.append(n)
            val.append(float(parts[1]))
        return cls(M, idx, val, label_part[len("label=") :])

    @classmethod
    def load(cls, path: str | Path) -> "CoefficientVector":
        return cls.loads(Path(path).read_text())


@dataclass(frozen=True)
class ResonatorParams:
    M: int
    override_interval: tuple[float, float] | None = None

    def __post_init__(self):
        if self.M < 3:
            raise ValueError("resonator needs M >= 3 so that log log M > 0")
        if self.override_interval is not None:
            lo, hi = self.override_interval
            if not lo <= hi:
                raise ValueError("override interval must satisfy lo <= hi")

    @property
    def L(self) -> float:
        lm = math.log(self.M)
        return math.sqrt(lm * math.log(lm))

    @property
    def support_lo(self) -> float:
        return self.L**2

    @property
    def support_hi(self) -> float:
        return math.exp(math.log(self.L) ** 2)

    @property
    def interval(self) -> tuple[float, float]:
        if self.override_interval is not None:
            return self.override_interval
        return (self.support_lo, self.support_hi)

    @property
    def interval_label(self) -> str:
        lo, hi = self.interval
        tag = "override" if self.override_interval is not None else "natural"
        return f"{tag}[{lo:.6g},{hi:.6g}]"

    def support_primes(self) -> list[int]:
        lo, hi = self.interval
        a, b = max(2, math.ceil(lo)), min(self.M, math.floor(hi))
        return [p for p in range(a, b + 1) if arith.factor(p).factors == ((p, 1),)]

    def f_prime(self, p: int) -> float:
        lo, hi = self.interval
        return self.L / math.log(p) if lo <= p <= hi else 0.0


def resonator(params: ResonatorParams) -> CoefficientVector:
    """Multiplicative, squarefree-supported f with f(p) = L/log p on the prime window."""
    M = params.M
    terms = {1: 1.0}
    for p in params.support_primes():
        fp = params.f_prime(p)
        for n, v in list(terms.items()):
            if n * p <= M:
                terms[n * p] = v * fp
    return CoefficientVector.from_mapping(M, terms, f"resonator M={M} {params.interval_label}")


def divisor_coefficients(M: int, P: Sequence[float] | Callable[[float], float] = (0.0, 1.0)) -> CoefficientVector:
    """x_n = mu(n) P(log(M/n)/log M).

    ``P`` is a callable or a coefficient list in increasing degree; the
    default ``(0, 1)`` is P(u) = u.
    """
    if M < 2:
        raise ValueError("divisor coefficients need M >= 2")
    if M > DENSE_CAP:
        raise ValueError(f"M={M} exceeds dense cap {DENSE_CAP}")
    poly = P if callable(P) else np.polynomial.Polynomial(P)
    mu = arith.mobius_table(M).astype(float)
    n = np.arange(1, M + 1)
    u = np.log(M / n) / math.log(M)
    pu = poly(u) if not callable(P) else np.array([poly(x) for x in u], dtype=float)
    vals = np.zeros(M + 1)
    vals[1:] = mu[1:] * pu
    name = "P" if callable(P) else "P=" + ",".join(f"{c:g}" for c in P)
    return CoefficientVector.from_dense(vals, f"divisor M={M} {name}")


@dataclass(frozen=True)
class Norms:
    sup: float
    l1: float
    l1_over_n: float
    l2_over_n: float


def norms(c: CoefficientVector) -> Norms:
    v = np.abs(c.coeffs)
    n = c.support.astype(float)
    return Norms(
        sup=float(v.max()) if v.size else 0.0,
        l1=math.fsum(v),
        l1_over_n=math.fsum(v / n),
        l2_over_n=math.fsum(v * v / n),
    )


def convolved_norm(c: CoefficientVector, r: int, weight=None) -> float:
    """sum_{n<=M} weight(n) (tau_r * c)(n) c_n / n.

    Only n in the support of c contribute, and (tau_r * c)(n) needs the
    divisors of n, so this works for sparse vectors with huge M.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    w = weight if weight is not None else (lambda n: 1.0)
    terms = []
    for n, cn in c.items():
        conv = math.fsum(arith.tau_r(n // d, r) * c.get(d) for d in arith.divisors(n))
        terms.append(float(w(n)) * conv * cn / n)
    return math.fsum(terms)


def f2n_envelope(M: int) -> float:
    """exp(log M / log log M), the reporting envelope for sum f(n)^2/n."""
    lm = math.log(M)
    return math.exp(lm / math.log(lm))
