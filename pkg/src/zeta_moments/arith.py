"""Exact arithmetic functions built from explicit factorizations.

Scalar evaluators accept either a plain ``int`` or a :class:`FactoredInteger`.
Table builders (``*_table``) return numpy arrays indexed by ``n`` with a
dummy entry at index 0, which is the form the convolution code works with.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

# Largest n whose factorization is served from the smallest-prime-factor sieve.
SIEVE_BOUND = 2_000_000

SUPPORT_CLASSES = ("all", "prime_powers", "omega_le_2", "squarefree")


@dataclass(frozen=True)
class FactoredInteger:
    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.value < 1:
            raise ValueError(f"FactoredInteger needs a positive value, got {self.value}")
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"malformed factorization {self.factors}")
            last = p
            prod *= p**e
        if prod != self.value:
            raise ValueError(f"factors {self.factors} do not multiply to {self.value}")

    def __int__(self):
        return self.value

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def omega(self) -> int:
        return len(self.factors)

    @property
    def is_prime_power(self) -> bool:
        return len(self.factors) == 1

    @property
    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)


@lru_cache(maxsize=4)
def spf_table(n_max: int) -> np.ndarray:
    """Smallest-prime-factor sieve for 0..n_max (entries 0 and 1 are 0)."""
    spf = np.zeros(n_max + 1, dtype=np.int64)
    if n_max >= 2:
        spf[2::2] = 2
        for p in range(3, math.isqrt(n_max) + 1, 2):
            if spf[p] == 0:
                block = spf[p * p :: 2 * p]
                block[block == 0] = p
        rest = np.nonzero(spf[2:] == 0)[0] + 2
        spf[rest] = rest
    spf.flags.writeable = False
    return spf


def _sieve_for(n: int) -> np.ndarray | None:
    if n > SIEVE_BOUND:
        return None
    return spf_table(SIEVE_BOUND)


def factor(n: int | FactoredInteger) -> FactoredInteger:
    if isinstance(n, FactoredInteger):
        return n
    n = int(n)
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: list[tuple[int, int]] = []
    spf = _sieve_for(n)
    m = n
    if spf is not None:
        while m > 1:
            p = int(spf[m])
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
    else:
        p = 2
        while p * p <= m:
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                out.append((p, e))
            p += 1 if p == 2 else 2
        if m > 1:
            out.append((m, 1))
    return FactoredInteger(n, tuple(out))


def divisors(n: int | FactoredInteger) -> list[int]:
    f = factor(n)
    divs = [1]
    for p, e in f.factors:
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def squarefree_divisors(n: int | FactoredInteger) -> list[tuple[int, int]]:
    """Pairs (d, mu(d)) over squarefree divisors d of n."""
    out = [(1, 1)]
    for p in factor(n).primes:
        out += [(d * p, -m) for d, m in out]
    return out


# --------------------------------------------------------------------------
# Classical functions

def mobius(n: int | FactoredInteger) -> int:
    f = factor(n)
    if not f.is_squarefree:
        return 0
    return -1 if f.omega % 2 else 1


def omega(n: int | FactoredInteger) -> int:
    return factor(n).omega


def euler_phi(n: int | FactoredInteger) -> int:
    f = factor(n)
    out = f.value
    for p, _ in f.factors:
        out = out // p * (p - 1)
    return out


def von_mangoldt(n: int | FactoredInteger) -> float:
    f = factor(n)
    return math.log(f.factors[0][0]) if f.is_prime_power else 0.0


def lambda_k(n: int | FactoredInteger, k: int) -> float:
    """Generalized von Mangoldt function (mu * log^k)(n)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    f = factor(n)
    if f.omega > k or f.value == 1:
        return 0.0
    logn = math.log(f.value)
    return math.fsum(mu * (logn - math.log(d)) ** k for d, mu in squarefree_divisors(f))


def tau_r(n: int | FactoredInteger, r: int) -> int:
    """Coefficient of n^{-s} in zeta(s)^r."""
    if r < 1:
        raise ValueError("r must be >= 1")
    out = 1
    for _, e in factor(n).factors:
        out *= math.comb(e + r - 1, r - 1)
    return out


def j_weight(n: int | FactoredInteger) -> float:
    out = 1.0
    for p in factor(n).primes:
        out *= 1.0 + 10.0 / math.sqrt(p)
    return out


# --------------------------------------------------------------------------
# Bespoke functions from the main-term bookkeeping

def _lp(p: int) -> float:
    return math.log(p) / (p - 1)


def eta1(k: int | FactoredInteger) -> float:
    return math.fsum(_lp(p) for p in factor(k).primes)


def eta2(k: int | FactoredInteger) -> float:
    return -math.fsum(p * math.log(p) / (p - 1) ** 2 for p in factor(k).primes)


def eta1_prime(k: int | FactoredInteger) -> float:
    """Derivative at z=1 of sum_{p|k} log p / (p^z - 1).

    This is the quantity the residue computation actually produces; it
    carries (log p)^2 where ``eta2`` carries log p.
    """
    return -math.fsum(p * math.log(p) ** 2 / (p - 1) ** 2 for p in factor(k).primes)


def g_hk(h: int | FactoredInteger, k: int | FactoredInteger) -> float:
    """Sum over prime powers a = p^t dividing h with (a, k) = 1 of Lambda(a) log p/(p-1)."""
    kv = int(k) if not isinstance(k, FactoredInteger) else k.value
    total = []
    for p, e in factor(h).factors:
        if kv % p:
            total.append(e * math.log(p) * _lp(p))
    return math.fsum(total)


def phi_j(n: int | FactoredInteger, j: int) -> float:
    """Closed forms of phi_1..phi_4 (supported on omega(n) <= 2)."""
    f = factor(n)
    if j not in (1, 2, 3, 4):
        raise ValueError(f"phi_j defined for j in 1..4, got {j}")
    if f.omega == 1:
        p, a = f.factors[0]
        lp = math.log(p)
        if j == 1:
            return -lp / (p - 1)
        if j == 2:
            return p * lp / (p - 1) ** 2
        if j == 3:
            return lp / (p - 1) * a * lp
        return -(lp**2) / (p - 1)
    if f.omega == 2 and j == 4:
        (p, _), (q, _) = f.factors
        return math.log(p) * math.log(q) * (1 / (p - 1) + 1 / (q - 1))
    return 0.0


def phi_j_definition(n: int | FactoredInteger, j: int, h: int | None = None) -> float:
    """Divisor-sum definitions of phi_1..phi_4.

    For ``j == 3`` the g(h, k) term takes ``h = n / k`` (the convolution
    reading used when the functions are summed over hk = u) unless a fixed
    ``h`` is passed.
    """
    f = factor(n)
    terms = []
    for k, mu in squarefree_divisors(f):
        if j == 1:
            terms.append(mu * eta1(k))
        elif j == 2:
            terms.append(mu * eta2(k))
        elif j == 3:
            terms.append(mu * g_hk(f.value // k if h is None else h, k))
        elif j == 4:
            terms.append(mu * eta1(k) * math.log(k))
        else:
            raise ValueError(f"phi_j defined for j in 1..4, got {j}")
    return math.fsum(terms)


def alpha_j(n: int | FactoredInteger, j: int, D: float = 0.0) -> float:
    """alpha_1 and alpha_2 in their prime-power closed forms.

    ``D`` is the free constant inside alpha_2 at prime powers.
    """
    f = factor(n)
    if j == 1:
        if f.omega != 1:
            return 0.0
        return _lp(f.factors[0][0])
    if j != 2:
        raise ValueError(f"alpha_j defined for j in 1..2, got {j}")
    if f.omega == 1:
        p, a = f.factors[0]
        lp = math.log(p)
        return -(a + 1) * lp**2 / (p - 1) + D * lp / (p - 1) - lp / (p - 1) ** 2
    if f.omega == 2:
        (p, _), (q, _) = f.factors
        return -math.log(p) * math.log(q) * (1 / (p - 1) + 1 / (q - 1))
    return 0.0


def alpha2_residue(n: int | FactoredInteger) -> float:
    """alpha_2 as produced by carrying the z=1 residue through exactly.

    Equals -(phi_4 + phi_5/2 + 3/2 * sum_{k|n} mu(k) eta1'(k) + phi_3) with
    phi_5(n) = sum_{k|n} mu(k) eta_1(k)^2.
    """
    f = factor(n)
    if f.omega == 1:
        p, a = f.factors[0]
        lp2 = math.log(p) ** 2
        return -lp2 * ((a + 0.5) / (p - 1) + 1.0 / (p - 1) ** 2)
    if f.omega == 2:
        (p, _), (q, _) = f.factors
        return -math.log(p) * math.log(q) * (p + q - 1) / ((p - 1) * (q - 1))
    return 0.0


def alpha2_residue_definition(n: int | FactoredInteger) -> float:
    f = factor(n)
    terms = []
    for k, mu in squarefree_divisors(f):
        e1 = eta1(k)
        terms.append(
            mu * (e1 * math.log(k) + 0.5 * e1 * e1 + 1.5 * eta1_prime(k) + g_hk(f.value // k, k))
        )
    return -math.fsum(terms)


# --------------------------------------------------------------------------
# Arithmetic-function objects and tables

@dataclass(frozen=True)
class ArithFn:
    """A named function on the positive integers with a declared support class."""

    name: str
    func: Callable[[FactoredInteger], float]
    support: str = "all"

    def __post_init__(self):
        if self.support not in SUPPORT_CLASSES:
            raise ValueError(f"unknown support class {self.support!r}")

    def in_support(self, f: FactoredInteger) -> bool:
        if self.support == "all":
            return True
        if self.support == "prime_powers":
            return f.omega == 1
        if self.support == "omega_le_2":
            return f.omega <= 2
        return f.is_squarefree

    def __call__(self, n: int | FactoredInteger) -> float:
        f = factor(n)
        if not self.in_support(f):
            return 0.0
        return float(self.func(f))

    def table(self, N: int) -> np.ndarray:
        out = np.zeros(N + 1)
        for n in range(1, N + 1):
            out[n] = self(n)
        return out


def mobius_table(N: int) -> np.ndarray:
    mu = np.ones(N + 1, dtype=np.int64)
    mu[0] = 0
    spf = _table_spf(N)
    for p in np.nonzero(spf[2:] == np.arange(2, N + 1))[0] + 2:
        mu[::p] *= -1
        mu[:: p * p] = 0
    mu[0] = 0
    return mu


def _table_spf(N: int) -> np.ndarray:
    if N <= SIEVE_BOUND:
        return spf_table(SIEVE_BOUND)[: N + 1]
    return spf_table(N)


@lru_cache(maxsize=8)
def _prime_power_list(N: int) -> tuple[np.ndarray, np.ndarray]:
    """All prime powers <= N with their primes."""
    spf = _table_spf(N)
    primes = np.nonzero(spf[2:] == np.arange(2, N + 1))[0] + 2
    vals, bases = [], []
    pk = primes.copy()
    while pk.size:
        vals.append(pk)
        bases.append(primes[: pk.size])
        nxt = pk * primes[: pk.size]
        keep = nxt <= N
        primes = primes[: pk.size][keep]
        pk = nxt[keep]
    return np.concatenate(vals), np.concatenate(bases)


def von_mangoldt_table(N: int) -> np.ndarray:
    out = np.zeros(N + 1)
    if N >= 2:
        vals, bases = _prime_power_list(N)
        out[vals] = np.log(bases)
    return out


def log_table(N: int) -> np.ndarray:
    out = np.zeros(N + 1)
    out[1:] = np.log(np.arange(1, N + 1))
    return out


def _as_table(f, N: int) -> np.ndarray:
    if isinstance(f, ArithFn):
        return f.table(N)
    if callable(f):
        return np.array([0.0] + [float(f(n)) for n in range(1, N + 1)])
    arr = np.array(f, dtype=float)
    if arr.shape[0] < N + 1:
        arr = np.concatenate([arr, np.zeros(N + 1 - arr.shape[0])])
    return arr[: N + 1]


def dirichlet_convolve(f, g, N: int) -> np.ndarray:
    """Table of (f*g)(n) for 0 <= n <= N by a divisor sweep.

    ``f`` and ``g`` may be ArithFn objects, callables on ints, or tables
    indexed from 0. The sweep runs over the nonzero entries of the sparser
    argument, so the cost is O(N log N) at worst.
    """
    if N < 1:
        return np.zeros(max(N, 0) + 1)
    a = _as_table(f, N)
    b = _as_table(g, N)
    a[0] = b[0] = 0.0
    if np.count_nonzero(a) > np.count_nonzero(b):
        a, b = b, a
    out = np.zeros(N + 1)
    for d in np.nonzero(a)[0]:
        m = N // d
        out[d::d][:m] += a[d] * b[1 : m + 1]
    return out


def dirichlet_convolve_naive(f, g, N: int) -> np.ndarray:
    a = _as_table(f, N)
    b = _as_table(g, N)
    out = np.zeros(N + 1)
    for n in range(1, N + 1):
        out[n] = math.fsum(a[d] * b[n // d] for d in divisors(n))
    return out


@lru_cache(maxsize=4)
def lambda_log_table(N: int) -> np.ndarray:
    """(Lambda * log)(n) for n <= N; the coefficients of zeta'(s)^2 / zeta(s)."""
    out = np.zeros(N + 1)
    if N >= 2:
        vals, bases = _prime_power_list(N)
        logs = log_table(N)
        for v, p in zip(vals.tolist(), np.log(bases).tolist()):
            m = N // v
            out[v::v][:m] += p * logs[1 : m + 1]
    out.flags.writeable = False
    return out


def lambda_log(n: int | FactoredInteger) -> float:
    f = factor(n)
    logn = math.log(f.value)
    return math.fsum(e_term for e_term in _lambda_log_terms(f, logn))


def _lambda_log_terms(f: FactoredInteger, logn: float) -> Iterable[float]:
    for p, e in f.factors:
        lp = math.log(p)
        for t in range(1, e + 1):
            yield lp * (logn - t * lp)


# --------------------------------------------------------------------------
# Convolution decomposition identity

def _ordered_factorizations(D: int, j: int) -> list[tuple[int, ...]]:
    if j == 1:
        return [(D,)]
    out = []
    for d in divisors(D):
        out += [(d,) + rest for rest in _ordered_factorizations(D // d, j - 1)]
    return out


def conv_decompose_check(
    f_list: Sequence, D: int, k: int, X: int
) -> tuple[bool, float]:
    """Evaluate both sides of the restricted-sum decomposition of (f_1*...*f_j)(mD).

    Left: sum over m <= X, (m, k) = 1 of (f_1*...*f_j)(mD).
    Right: sum over ordered D = d_1...d_j and m_1...m_j <= X with
    (m_i, k D_i) = 1, D_i = d_1...d_{j-i}, of f_1(m_1 d_j)...f_j(m_j d_1).
    Returns (passed, absolute residual).
    """
    j = len(f_list)
    if j < 2:
        raise ValueError("need at least two functions")
    if X > 10**5 or D * X > 10**7:
        raise OverflowError(f"oracle scale exceeded: D={D}, X={X}")
    D, k = int(D), int(k)
    big = D * X
    tables = [_as_table(f, big) for f in f_list]
    full = tables[0]
    for t in tables[1:]:
        full = dirichlet_convolve(full, t, big)
    m = np.arange(1, X + 1)
    keep = np.gcd(m, k) == 1
    lhs = math.fsum(full[m[keep] * D].tolist())

    rhs_terms = []
    idx = np.arange(1, X + 1)
    for ds in _ordered_factorizations(D, j):
        parts = []
        for i in range(1, j + 1):
            Di = math.prod(ds[: j - i]) if i < j else 1
            di = ds[j - i]
            g = np.zeros(X + 1)
            ok = np.gcd(idx, k * Di) == 1
            g[1:][ok] = tables[i - 1][idx[ok] * di]
            parts.append(g)
        conv = parts[0]
        for g in parts[1:]:
            conv = dirichlet_convolve(conv, g, X)
        rhs_terms.append(math.fsum(conv[1:].tolist()))
    rhs = math.fsum(rhs_terms)
    resid = abs(lhs - rhs)
    return resid < 1e-9 * max(1.0, abs(lhs)), resid


# Ready-made ArithFn instances used by the other modules.
LAMBDA = ArithFn("Lambda", von_mangoldt, "prime_powers")
LOG = ArithFn("log", lambda f: math.log(f.value))
ONE = ArithFn("one", lambda f: 1.0)
MU = ArithFn("mu", mobius, "squarefree")
ALPHA1 = ArithFn("alpha1", lambda f: alpha_j(f, 1), "prime_powers")
J_WEIGHT = ArithFn("j", j_weight)


def identity_residuals(n: int) -> list[float]:
    """Residuals of the five Moebius/Lambda identities at n."""
    f = factor(n)
    logn = math.log(f.value)
    lam = von_mangoldt(f)
    lam2 = lambda_k(f, 2)
    sq = squarefree_divisors(f)
    s0 = sum(mu for _, mu in sq)
    s1 = math.fsum(mu * math.log(d) for d, mu in sq)
    s2 = math.fsum(mu * math.log(d) ** 2 for d, mu in sq)
    s3 = math.fsum(mu * math.log(d) * (logn - math.log(d)) for d, mu in sq)
    ll = math.fsum(von_mangoldt(d) * von_mangoldt(f.value // d) for d in divisors(f))
    return [
        abs(s0 - (1 if n == 1 else 0)),
        abs(s1 + lam),
        abs(s2 - (-2 * logn * lam + lam2)),
        abs(s3 - (logn * lam - lam2)),
        abs(lam2 - (lam * logn + ll)),
    ]
