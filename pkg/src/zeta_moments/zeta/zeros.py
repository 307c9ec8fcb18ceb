"""Critical-line zeros: Gram/Rosser isolation, refinement and a count certificate.

Zeros are isolated by sign changes of Z(t) between Gram points, with Rosser
blocks densified when Gram's law fails. Completeness is certified by computing
N(t*) = theta(t*)/pi + 1 + S(t*) from the argument principle at a point t*
between two found zeros, tracking arg zeta continuously from Re s = 2.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import lambertw

from .._io import atomic_write_text, cache_lock
from .core import DEFAULT, PrecisionConfig, hardy_z, theta, zeta

MIN_T = 15.0
REFINE_TOL = 1e-10
DENSITIES = (4, 8, 16, 32, 64)


class CertificationError(RuntimeError):
    pass


class CacheError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ZeroList:
    T: float
    gammas: np.ndarray
    certified: bool
    abs_error: float
    count_certificate: int | None = field(default=None, compare=False)

    def __post_init__(self):
        g = np.asarray(self.gammas, dtype=float).copy()
        if g.ndim != 1:
            raise ValueError("gammas must be one-dimensional")
        if g.size and (g[0] <= 0 or g[-1] >= self.T):
            raise ValueError("ordinates must lie in (0, T)")
        if g.size > 1 and np.any(np.diff(g) <= 0):
            raise ValueError("ordinates must be strictly increasing")
        g.flags.writeable = False
        object.__setattr__(self, "gammas", g)

    def __len__(self):
        return self.gammas.size

    def below(self, T: float) -> "ZeroList":
        """Restriction to (0, T) for T <= self.T."""
        if T > self.T:
            raise ValueError(f"zero list only covers (0, {self.T})")
        g = self.gammas[self.gammas < T]
        return ZeroList(T, g, self.certified, self.abs_error, self.count_certificate)

    # text cache
    def dumps(self) -> str:
        head = f"# zeros T={self.T!r} abs_error={self.abs_error!r} certified={str(self.certified).lower()}"
        return "\n".join([head] + [f"{g:.12f}" for g in self.gammas]) + "\n"

    def save(self, path: str | Path) -> None:
        atomic_write_text(path, self.dumps())

    @classmethod
    def loads(cls, text: str) -> "ZeroList":
        lines = text.splitlines()
        if not lines:
            raise CacheError("line 1: empty zero cache")
        m = re.fullmatch(r"# zeros T=(\S+) abs_error=(\S+) certified=(true|false)", lines[0].strip())
        if not m:
            raise CacheError(f"line 1: malformed header {lines[0]!r}")
        T, err, cert = float(m.group(1)), float(m.group(2)), m.group(3) == "true"
        vals = []
        prev = 0.0
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            try:
                g = float(line)
            except ValueError:
                raise CacheError(f"line {lineno}: not a number: {line!r}") from None
            if not prev < g < T:
                raise CacheError(f"line {lineno}: ordinate {g} breaks monotonicity or exceeds T={T}")
            vals.append(g)
            prev = g
        return cls(T, np.array(vals), cert, err)

    @classmethod
    def load(cls, path: str | Path) -> "ZeroList":
        return cls.loads(Path(path).read_text())


# -- Gram points ---------------------------------------------------------------

def gram_points(ns) -> np.ndarray:
    """g_n with theta(g_n) = n pi, via the Lambert-W guess and Newton steps."""
    ns = np.asarray(ns, dtype=float)
    a = (ns + 0.125) / math.e
    g = 2 * math.pi * (ns + 0.125) / lambertw(a).real
    g = np.where(ns == -1, 9.6669, g)  # W is poorly conditioned for n = -1
    for _ in range(50):
        step = (theta(g) - ns * math.pi) / (0.5 * np.log(g / (2 * math.pi)))
        g = g - step
        if np.all(np.abs(step) < 1e-13 * g):
            break
    return g


# -- isolation -----------------------------------------------------------------

def _sign_change_brackets(t: np.ndarray, z: np.ndarray) -> list[tuple[float, float]]:
    idx = np.nonzero(np.sign(z[:-1]) * np.sign(z[1:]) < 0)[0]
    return [(float(t[i]), float(t[i + 1])) for i in idx]


def _isolate(T_hi: float, cfg: PrecisionConfig):
    """Brackets for every zero up to a good Gram point beyond T_hi."""
    n_top = int(math.ceil(theta(T_hi) / math.pi)) + 2
    ns = np.arange(-1, n_top + 1)
    g = gram_points(ns)
    zg = hardy_z(g, cfg)
    good = ((-1.0) ** ns) * zg > 0
    while not good[-1]:
        n_new = ns[-1] + 1
        gn = gram_points([n_new])
        zn = hardy_z(gn, cfg)
        ns = np.append(ns, n_new)
        g = np.append(g, gn)
        zg = np.append(zg, zn)
        good = np.append(good, ((-1.0) ** n_new) * zn[0] > 0)
    if not good[0]:
        raise CertificationError("Gram point g_-1 violates Gram's law")

    brackets: list[tuple[float, float]] = []
    good_idx = np.nonzero(good)[0]
    for a, b in zip(good_idx[:-1], good_idx[1:]):
        k = int(b - a)
        found = _sign_change_brackets(g[a : b + 1], zg[a : b + 1])
        if len(found) != k:
            found = _densify(g[a : b + 1], k, cfg)
        brackets.extend(found)
    return brackets, float(g[good_idx[-1]])


def _densify(gblock: np.ndarray, k: int, cfg: PrecisionConfig):
    found, dens = [], 1
    for dens in DENSITIES:
        pts = np.concatenate(
            [np.linspace(gblock[i], gblock[i + 1], dens, endpoint=False) for i in range(len(gblock) - 1)]
            + [gblock[-1:]]
        )
        z = hardy_z(pts, cfg)
        found = _sign_change_brackets(pts, z)
        if len(found) == k:
            return found
        if len(found) > k:
            break
    raise CertificationError(
        f"Rosser block [{gblock[0]:.6f}, {gblock[-1]:.6f}] should hold {k} zeros, "
        f"found {len(found)} after {dens}x densification"
    )


def _refine(brackets, cfg: PrecisionConfig, tol: float = REFINE_TOL):
    """Vectorized Illinois iteration on all brackets at once."""
    if not brackets:
        return np.array([]), np.array([])
    a = np.array([b[0] for b in brackets])
    b = np.array([b[1] for b in brackets])
    fa = hardy_z(a, cfg)
    fb = hardy_z(b, cfg)
    side = np.zeros(a.size, dtype=int)
    for it in range(200):
        active = (b - a) > tol
        if not np.any(active):
            break
        aa, bb, fa_, fb_ = a[active], b[active], fa[active], fb[active]
        c = (aa * fb_ - bb * fa_) / (fb_ - fa_)
        # fall back to bisection every few steps or when the secant misbehaves
        bad = ~np.isfinite(c) | (c <= aa) | (c >= bb) | (it % 4 == 3)
        c = np.where(bad, 0.5 * (aa + bb), c)
        fc = hardy_z(c, cfg)
        left = np.sign(fc) == np.sign(fa_)
        sd = side[active]
        # root in [c, b]: move a
        na, nfa, nb, nfb = aa.copy(), fa_.copy(), bb.copy(), fb_.copy()
        na[left], nfa[left] = c[left], fc[left]
        nfb[left & (sd == 1)] *= 0.5
        nb[~left], nfb[~left] = c[~left], fc[~left]
        nfa[~left & (sd == -1)] *= 0.5
        exact = fc == 0
        na[exact] = nb[exact] = c[exact]
        sd = np.where(left, 1, -1)
        a[active], b[active], fa[active], fb[active], side[active] = na, nb, nfa, nfb, sd
    mid = 0.5 * (a + b)
    return mid, 0.5 * (b - a)


# -- certificate ---------------------------------------------------------------

def argument_count(t: float, cfg: PrecisionConfig = DEFAULT, max_points: int = 1 << 14) -> float:
    """theta(t)/pi + 1 + S(t), S from continuous variation of arg zeta.

    Re zeta(2 + iy) > 0 for all y, so arg zeta(2 + it) is the principal value;
    the horizontal leg to 1/2 + it is tracked on a grid refined until every
    step changes the argument by less than pi/4.
    """
    npts = 64
    while True:
        sig = np.linspace(2.0, 0.5, npts)
        z = zeta(sig + 1j * t, cfg)
        if np.any(z == 0):
            raise CertificationError(f"zeta vanishes on the certificate path at height {t}")
        d = np.angle(z[1:] / z[:-1])
        if np.all(np.abs(d) < math.pi / 4):
            break
        npts *= 2
        if npts > max_points:
            raise CertificationError(f"argument tracking at height {t} did not resolve")
    arg = np.angle(z[0]) + d.sum()
    return theta(t) / math.pi + 1.0 + arg / math.pi


def find_zeros(T: float, cfg: PrecisionConfig = DEFAULT, strict: bool = True) -> ZeroList:
    """All critical-line zeros with 0 < gamma < T, certified by argument counting.

    With ``strict`` a failing certificate raises CertificationError; otherwise
    the list is returned with ``certified=False``.
    """
    if T < MIN_T:
        raise ValueError(f"find_zeros needs T >= {MIN_T}")
    brackets, _ = _isolate(T + 1.0, cfg)
    gam, half = _refine(brackets, cfg)
    order = np.argsort(gam)
    gam, half = gam[order], half[order]
    if gam.size > 1 and np.any(np.diff(gam) <= 0):
        raise CertificationError("refined ordinates are not strictly increasing")

    i = int(np.searchsorted(gam, T))
    if i >= gam.size:
        raise CertificationError("no zero found above T to anchor the certificate")
    if i == 0:
        raise CertificationError("no zero located below T")
    t_star = 0.5 * (gam[i - 1] + gam[i])
    expected = i
    count = argument_count(t_star, cfg)
    n_cert = int(round(count))
    ok = abs(count - n_cert) < 0.25 and n_cert == expected
    if not ok and strict:
        raise CertificationError(
            f"argument count {count:.4f} at t={t_star:.6f} disagrees with {expected} located zeros"
        )
    # position error: bracket half-width plus the Z evaluation error over |Z'|
    h = 1e-6
    slope = np.abs(hardy_z(gam + h, cfg) - hardy_z(gam - h, cfg)) / (2 * h)
    pos_err = half + 10 * cfg.target_abs_error / np.maximum(slope, 1e-6)
    err = float(max(pos_err.max(initial=0.0), REFINE_TOL))
    return ZeroList(T, gam[:i], bool(ok), err, n_cert)


def snap_endpoint(T_raw: float, zeros: ZeroList) -> float:
    """Move T_raw to the midpoint of the straddling zeros if it sits within 1/log T_raw of one."""
    if T_raw >= zeros.T:
        raise ValueError(f"zeros only certified below {zeros.T}; cannot snap {T_raw}")
    g = zeros.gammas
    i = int(np.searchsorted(g, T_raw))
    lo = g[i - 1] if i > 0 else 0.0
    if i >= g.size:
        raise ValueError("need a certified zero above T_raw to snap; extend the zero list")
    hi = g[i]
    near = min(T_raw - lo if i > 0 else math.inf, hi - T_raw)
    if near >= 1.0 / math.log(T_raw):
        return float(T_raw)
    return float(0.5 * (lo + hi))


def cached_zeros(T: float, path: str | Path | None, cfg: PrecisionConfig = DEFAULT) -> ZeroList:
    """Load zeros from ``path`` when it covers T, else compute and write it."""
    if path is None:
        return find_zeros(T, cfg)
    path = Path(path)
    with cache_lock(path):
        if path.exists():
            zl = ZeroList.load(path)
            if zl.certified and zl.T >= T:
                return zl if zl.T == T else zl.below(T)
        zl = find_zeros(T, cfg)
        zl.save(path)
        # hand back the on-disk (12-decimal) values so warm and cold runs agree
        return ZeroList.load(path)
