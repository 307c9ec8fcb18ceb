"""Dirichlet characters, Gauss sums and the additive-to-multiplicative expansions.

A character mod q is an exponent vector over a fixed set of generators of
(Z/q)^*, one cyclic factor per odd prime power and up to two for the 2-part.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product

import numpy as np

from . import arith

MAX_MODULUS = 10**5
_MATRIX_CAP = 5000


def e(x: float) -> complex:
    """exp(2 pi i x)."""
    return cmath.exp(2j * math.pi * x)


def _primitive_root(p: int) -> int:
    phi = p - 1
    qs = arith.factor(phi).primes
    for g in range(2, p):
        if all(pow(g, phi // r, p) != 1 for r in qs):
            return g
    return 1  # p = 2


@dataclass(frozen=True)
class _Component:
    """One cyclic factor: generator g of order n inside (Z/p^a)^*."""

    p: int
    a: int
    gen: int
    order: int
    dlog: np.ndarray  # discrete log mod p^a (or -1), length p^a


def _components(q: int) -> list[_Component]:
    comps = []
    for p, a in arith.factor(q).factors:
        pa = p**a
        if p == 2:
            if a == 1:
                continue
            # -1 generates the order-2 part, 5 the order 2^{a-2} part
            d_m1 = np.full(pa, -1, dtype=np.int64)
            d_5 = np.full(pa, -1, dtype=np.int64)
            n5 = max(1, pa // 4)
            x = 1
            for j in range(n5):
                d_m1[x], d_5[x] = 0, j
                d_m1[pa - x], d_5[pa - x] = 1, j
                x = x * 5 % pa
            comps.append(_Component(2, a, pa - 1, 2, d_m1))
            if a >= 3:
                comps.append(_Component(2, a, 5, n5, d_5))
        else:
            g = _primitive_root(p)
            if a > 1 and pow(g, p - 1, p * p) == 1:
                g += p
            n = pa - pa // p
            dl = np.full(pa, -1, dtype=np.int64)
            x = 1
            for j in range(n):
                dl[x] = j
                x = x * g % pa
            comps.append(_Component(p, a, g, n, dl))
    return comps


@dataclass(frozen=True, eq=False)
class Character:
    table: "CharacterTable" = field(repr=False)
    exps: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.table.q

    @property
    def index(self) -> int:
        return self.table._index[self.exps]

    def __eq__(self, other):
        return isinstance(other, Character) and self.q == other.q and self.exps == other.exps

    def __hash__(self):
        return hash((self.q, self.exps))

    @property
    def is_principal(self) -> bool:
        return not any(self.exps)

    def conj(self) -> "Character":
        return Character(self.table, tuple((-c) % n for c, n in zip(self.exps, self.table.orders)))

    def __mul__(self, other: "Character") -> "Character":
        if other.q != self.q:
            raise ValueError("characters to different moduli")
        return Character(self.table, tuple((a + b) % n for a, b, n in zip(self.exps, other.exps, self.table.orders)))

    def values(self) -> np.ndarray:
        """chi(a) for a = 0..q-1."""
        return self.table.row(self.exps)

    def __call__(self, a) -> complex:
        return complex(self.values()[int(a) % self.q])

    @cached_property
    def conductor(self) -> int:
        f, two = 1, 1
        for c, comp in zip(self.exps, self.table.comps):
            if c % comp.order == 0:
                continue
            order = comp.order // math.gcd(c, comp.order)
            if comp.p == 2:
                # nontrivial on <5> with order 2^j forces 2^{j+2}; -1 alone needs 4
                two = max(two, 2 ** (order.bit_length() + 1) if comp.gen == 5 else 4)
            else:
                j = 0
                while order % comp.p == 0:
                    order //= comp.p
                    j += 1
                f *= comp.p ** (j + 1)
        return f * two

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.q

    def parity(self) -> int:
        """chi(-1) as +1 or -1."""
        return 1 if self(self.q - 1).real > 0 else -1


class CharacterTable:
    """All phi(q) characters mod q."""

    def __init__(self, q: int):
        if not 1 <= q <= MAX_MODULUS:
            raise ValueError(f"modulus {q} outside 1..{MAX_MODULUS}")
        self.q = q
        self.comps = _components(q)
        self.orders = tuple(c.order for c in self.comps)
        self.phi = arith.euler_phi(q)
        # exponent vector of every residue, -1 rows for non-units
        a = np.arange(q)
        X = np.empty((q, len(self.comps)), dtype=np.int64)
        for i, c in enumerate(self.comps):
            X[:, i] = c.dlog[a % (c.p**c.a)]
        unit = np.gcd(a, q) == 1
        X[~unit] = -1
        self._X = X
        self._unit = unit
        self.characters = [Character(self, tuple(ex)) for ex in product(*(range(n) for n in self.orders))]
        self._index = {ch.exps: i for i, ch in enumerate(self.characters)}
        assert len(self.characters) == self.phi

    def __len__(self):
        return len(self.characters)

    def __iter__(self):
        return iter(self.characters)

    @property
    def principal(self) -> Character:
        return self.characters[0]

    def row(self, exps) -> np.ndarray:
        if not self.comps:
            return self._unit.astype(complex)
        frac = np.zeros(self.q)
        for i, (c, n) in enumerate(zip(exps, self.orders)):
            frac += c * self._X[:, i] / n
        out = np.exp(2j * math.pi * frac)
        out[~self._unit] = 0
        return out

    @cached_property
    def matrix(self) -> np.ndarray:
        """Row i holds character i on the residues 0..q-1."""
        if self.q > _MATRIX_CAP:
            raise ValueError(f"value matrix only built for q <= {_MATRIX_CAP}")
        if not self.comps:
            return self._unit.astype(complex)[None, :]
        E = np.array([ch.exps for ch in self.characters], dtype=float)  # phi x g
        frac = (E / np.array(self.orders)) @ np.where(self._X >= 0, self._X, 0).T
        out = np.exp(2j * math.pi * frac)
        out[:, ~self._unit] = 0
        return out

    @cached_property
    def gauss_sums(self) -> np.ndarray:
        tw = np.exp(2j * math.pi * np.arange(self.q) / self.q)
        return self.matrix @ tw

    def primitive(self) -> list[Character]:
        return [ch for ch in self.characters if ch.is_primitive]

    def find(self, values: np.ndarray) -> Character:
        """The character whose values on units match ``values``."""
        m = self.matrix[:, self._unit]
        err = np.abs(m - values[self._unit]).max(axis=1)
        i = int(np.argmin(err))
        if err[i] > 1e-9:
            raise ValueError("no character mod q has the given values")
        return self.characters[i]


@lru_cache(maxsize=256)
def build_table(q: int) -> CharacterTable:
    return CharacterTable(q)


def gauss_sum(chi: Character) -> complex:
    """tau(chi) = sum_{a=1}^{q} chi(a) e(a/q)."""
    if chi.q <= _MATRIX_CAP:
        return complex(chi.table.gauss_sums[chi.index])
    a = np.arange(chi.q)
    return complex(chi.values() @ np.exp(2j * math.pi * a / chi.q))


def conductor_brute_force(chi: Character) -> int:
    """Smallest d | q with chi(a) = 1 whenever a = 1 mod d and (a, q) = 1."""
    v = chi.values()
    q = chi.q
    for d in arith.divisors(q):
        a = np.arange(1, q, d) if d > 1 else np.arange(q)
        a = a[np.gcd(a, q) == 1]
        if np.all(np.abs(v[a] - 1) < 1e-9):
            return d
    return q


def inducing_primitive(chi: Character) -> Character:
    """The primitive psi mod the conductor that induces chi."""
    f = chi.conductor
    tab = build_table(f)
    v = chi.values()
    # psi(a mod f) = chi(a) for units a mod q; pick a lift of each unit mod f
    target = np.zeros(f, dtype=complex)
    for b in range(f):
        if math.gcd(b, f) != 1:
            continue
        a = b
        while math.gcd(a, chi.q) != 1:
            a += f
        target[b] = v[a % chi.q]
    return tab.find(target)


def induces(psi: Character, chi: Character) -> bool:
    if chi.q % psi.q:
        return False
    a = np.arange(chi.q)
    unit = np.gcd(a, chi.q) == 1
    return bool(np.allclose(chi.values()[unit], psi.values()[a[unit] % psi.q], atol=1e-10))


def induced_gauss_sum_check(chi: Character, psi: Character) -> float:
    """|tau(chi) - mu(k'/q) psi(k'/q) tau(psi)| for psi inducing chi."""
    if not psi.is_primitive or not induces(psi, chi):
        raise ValueError(f"character mod {psi.q} does not induce the given character mod {chi.q}")
    r = chi.q // psi.q
    rhs = arith.mobius(r) * psi(r) * gauss_sum(psi)
    return abs(gauss_sum(chi) - rhs)


def _reduce(m: int, k: int) -> tuple[int, int]:
    g = math.gcd(m, k)
    return m // g, k // g


def nonprincipal_sum(m: int, k: int) -> complex:
    """(1/phi(k')) sum_{chi != chi_0 mod k'} tau(conj chi) chi(-m')."""
    mp, kp = _reduce(m, k)
    tab = build_table(kp)
    if kp == 1:
        return 0j
    col = tab.matrix[:, (-mp) % kp]
    taus_conj = np.conj(tab.gauss_sums) * tab.matrix[:, kp - 1]  # tau(conj chi) = chi(-1) conj(tau(chi))
    terms = taus_conj[1:] * col[1:]
    return complex(terms.sum() / tab.phi)


def additive_decomposition_check(m: int, k: int) -> float:
    """|mu(k')/phi(k') + nonprincipal part - e(-m/k)|."""
    if k < 1 or m < 1:
        raise ValueError("need m, k >= 1")
    _, kp = _reduce(m, k)
    rhs = arith.mobius(kp) / arith.euler_phi(kp) + nonprincipal_sum(m, k)
    return abs(rhs - e(-m / k))


def delta_factor(q: int, k: int, d: int, psi: Character) -> complex:
    """sum_{e | d, e | k/q} mu(d/e)/phi(k/e) conj(psi)(-k/(eq)) psi(d/e) mu(k/(eq))."""
    if q <= 1 or k % q:
        raise ValueError("need q > 1 and q | k")
    if psi.q != q:
        raise ValueError("psi must be a character mod q")
    kq = k // q
    total = 0j
    for e_ in arith.divisors(math.gcd(d, kq)):
        mu1 = arith.mobius(d // e_)
        mu2 = arith.mobius(kq // e_)
        if mu1 == 0 or mu2 == 0:
            continue
        total += mu1 / arith.euler_phi(k // e_) * psi(-(kq // e_)).conjugate() * psi(d // e_) * mu2
    return total


def _delta_all(q: int, k: int, d: int, tab: CharacterTable) -> np.ndarray:
    """delta_factor for every character mod q at once."""
    kq = k // q
    out = np.zeros(len(tab), dtype=complex)
    M = tab.matrix
    for e_ in arith.divisors(math.gcd(d, kq)):
        mu1 = arith.mobius(d // e_)
        mu2 = arith.mobius(kq // e_)
        if mu1 == 0 or mu2 == 0:
            continue
        out += mu1 * mu2 / arith.euler_phi(k // e_) * np.conj(M[:, (-(kq // e_)) % q]) * M[:, (d // e_) % q]
    return out


def primitive_decomposition_rhs(m: int, k: int, reading: str = "swapped") -> complex:
    """Primitive-character expansion of the non-principal sum.

    ``reading='swapped'``: sum_{q|k, q>1} sum*_psi tau(conj psi)
        sum_{d|m, d|k} psi(m/d) delta(q, k, d, psi).
    ``reading='inner'``: sum_{d|(m,k)} sum_{e|d} mu(d/e)/phi(k/e)
        sum_{q | k/e, q>1} sum*_psi mu(k/(eq)) conj(psi)(k/(eq)) tau(conj psi) psi(-m/e),
    i.e. the form before the q and e sums are interchanged.
    """
    g = math.gcd(m, k)
    total = 0j
    if reading == "swapped":
        for q in arith.divisors(k):
            if q == 1:
                continue
            tab = build_table(q)
            prim = np.array([ch.is_primitive for ch in tab.characters])
            if not prim.any():
                continue
            tau_bar = (np.conj(tab.gauss_sums) * tab.matrix[:, q - 1])[prim]
            acc = np.zeros(int(prim.sum()), dtype=complex)
            for d in arith.divisors(g):
                acc += tab.matrix[prim, (m // d) % q] * _delta_all(q, k, d, tab)[prim]
            total += complex((tau_bar * acc).sum())
        return total
    if reading == "inner":
        for d in arith.divisors(g):
            for e_ in arith.divisors(d):
                mu = arith.mobius(d // e_)
                if mu == 0:
                    continue
                ke = k // e_
                inner = 0j
                for q in arith.divisors(ke):
                    if q == 1 or arith.mobius(ke // q) == 0:
                        continue
                    tab = build_table(q)
                    prim = np.array([ch.is_primitive for ch in tab.characters])
                    if not prim.any():
                        continue
                    tau_bar = (np.conj(tab.gauss_sums) * tab.matrix[:, q - 1])[prim]
                    vals = (
                        arith.mobius(ke // q)
                        * np.conj(tab.matrix[prim, (ke // q) % q])
                        * tau_bar
                        * tab.matrix[prim, (-(m // e_)) % q]
                    )
                    inner += complex(vals.sum())
                total += mu / arith.euler_phi(ke) * inner
        return total
    raise ValueError(f"unknown reading {reading!r}")


def primitive_decomposition_check(m: int, k: int, reading: str = "swapped") -> float:
    if k < 2 or m < 1:
        raise ValueError("need k >= 2, m >= 1")
    return abs(nonprincipal_sum(m, k) - primitive_decomposition_rhs(m, k, reading))


@dataclass(frozen=True)
class DeltaEnvelopeRecord:
    q: int
    k: int
    d: int
    max_abs_delta: float
    envelope: float

    @property
    def ratio(self) -> float:
        return self.max_abs_delta / self.envelope


def delta_envelope_report(max_kq: int = 1000, T: float = 1e4, constant: float = 8.0) -> list[DeltaEnvelopeRecord]:
    """|delta(q, kq, d, psi)| against constant*(d,k) loglog T/(phi(k) phi(q)), report only.

    d runs over the divisors of kq and psi over the primitive characters mod q;
    each record keeps the largest |delta| over psi.
    """
    out = []
    llT = math.log(math.log(T))
    for q in range(3, max_kq + 1):
        tab = build_table(q)
        prim = np.array([ch.is_primitive for ch in tab.characters])
        if not prim.any():
            continue
        for k in range(1, max_kq // q + 1):
            K = k * q
            env_base = constant * llT / (arith.euler_phi(k) * tab.phi)
            for d in arith.divisors(K):
                vals = np.abs(_delta_all(q, K, d, tab)[prim])
                out.append(DeltaEnvelopeRecord(q, k, d, float(vals.max()), env_base * math.gcd(d, k)))
    return out
