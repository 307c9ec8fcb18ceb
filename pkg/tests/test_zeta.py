import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special as sp

from zeta_moments.zeta import (
    PoleError,
    PrecisionConfig,
    PrecisionError,
    chi,
    chi_log_deriv,
    chi_prime,
    hardy_z,
    theta_exact,
    theta_rs,
    zeta,
    zeta_log_deriv,
    zeta_prime,
)
from zeta_moments.zeta.special import bernoulli_over_factorial, loggamma, stieltjes
from zeta_moments.zeta.zeros import (
    CacheError,
    CertificationError,
    ZeroList,
    argument_count,
    cached_zeros,
    find_zeros,
    gram_points,
    snap_endpoint,
)

STRIP = [complex(s, t) for s in np.linspace(0.1, 0.9, 10) for t in np.linspace(5, 50, 10)]


@pytest.fixture(scope="module")
def zeros200():
    return find_zeros(200.0)


# -- special functions -------------------------------------------------------

def test_stieltjes_against_mpmath():
    for n in range(4):
        assert stieltjes(n) == pytest.approx(float(mpmath.stieltjes(n)), abs=1e-12)
    assert stieltjes(0) == pytest.approx(0.5772157, abs=1e-7)


def test_bernoulli_table():
    bf = bernoulli_over_factorial(6)
    assert bf[1] == pytest.approx(1 / 12)
    assert bf[2] == pytest.approx(-1 / 720)
    assert bf[3] == pytest.approx(1 / 30240)


def test_loggamma_continuous_branch():
    t = np.linspace(1, 200, 500)
    lg = loggamma(0.25 + 0.5j * t).imag
    assert np.all(np.abs(np.diff(lg)) < 1.0)
    z = 0.3 + 40j
    assert complex(loggamma(z)) == pytest.approx(complex(mpmath.loggamma(z)), abs=1e-12)


# -- zeta values -------------------------------------------------------------

def test_zeta_classical_values():
    assert abs(zeta(2) - math.pi**2 / 6) < 1e-12
    assert abs(zeta(4) - math.pi**4 / 90) < 1e-12
    assert abs(zeta(0) + 0.5) < 1e-12
    assert abs(zeta(-1) + 1 / 12) < 1e-12
    assert zeta(-2) == 0
    assert abs(zeta(0.5 + 14.134725j)) < 1e-5


@pytest.mark.parametrize("s", [0.3 + 5j, 0.7 + 40j, -3 + 2j, 2 + 3j, 0.5 + 1000j, -0.4 + 0.1j, 3.0])
def test_zeta_against_mpmath(s):
    ref = complex(mpmath.zeta(s))
    dref = complex(mpmath.zeta(s, derivative=1))
    scale = max(1.0, abs(ref))
    assert abs(zeta(s) - ref) < 1e-11 * scale
    assert abs(zeta_prime(s) - dref) < 1e-10 * max(1.0, abs(dref))


def test_zeta_prime_examples():
    assert zeta_prime(-2) == pytest.approx(-1.2020569031595942 / (4 * math.pi**2), abs=1e-12)
    assert zeta_prime(-2).real == pytest.approx(-0.030448, abs=1e-6)
    assert zeta_prime(2).real == pytest.approx(-0.93754, abs=1e-5)
    for sig in (1.5, 2.0, 7.0):
        assert zeta_prime(sig).imag == 0 or abs(zeta_prime(sig).imag) < 1e-15


def test_zeta_vectorized_matches_scalar():
    s = np.array(STRIP[:20])
    vec = zeta(s)
    assert vec.shape == (20,)
    assert np.allclose(vec, [zeta(x) for x in s], atol=1e-14)


def test_functional_equation_on_strip():
    s = np.array(STRIP)
    lhs = zeta(s, method="em")
    rhs = chi(s) * zeta(1 - s, method="em")
    assert np.abs(lhs - rhs).max() < 1e-10


def test_zeta_prime_matches_finite_differences():
    s = np.array(STRIP)
    h = 1e-5
    fd = (zeta(s + h, method="em") - zeta(s - h, method="em")) / (2 * h)
    assert np.abs(zeta_prime(s, method="em") - fd).max() < 1e-6
    # the functional-equation path as well
    s2 = s - 0.5
    fd2 = (zeta(s2 + h) - zeta(s2 - h)) / (2 * h)
    assert np.abs(zeta_prime(s2) - fd2).max() < 1e-6 * np.abs(fd2).max()


def test_log_deriv():
    s = 2 + 3j
    assert zeta_log_deriv(s) == pytest.approx(zeta_prime(s) / zeta(s), rel=1e-14)


def test_pole_and_precision_errors():
    with pytest.raises(PoleError):
        zeta(1.0)
    with pytest.raises(PoleError):
        zeta_prime(1 + 1e-9)
    with pytest.raises(PrecisionError):
        zeta(0.5 + 3000j, PrecisionConfig(target_abs_error=1e-14, euler_maclaurin_terms=20, bernoulli_order=6))
    with pytest.raises(ValueError):
        PrecisionConfig(bernoulli_order=5)
    with pytest.raises(ValueError):
        PrecisionConfig(target_abs_error=0)


# -- chi ---------------------------------------------------------------------

@pytest.mark.parametrize("t", [10, 20, 50, 100])
def test_chi_unimodular_on_critical_line(t):
    assert abs(abs(chi(0.5 + 1j * t)) - 1) < 1e-10


def test_chi_against_mpmath():
    for s in (0.3 + 5j, 0.5 + 3000j, -2.5 + 1j, 0.8 - 700j):
        ref = complex(2 * (2 * mpmath.pi) ** (s - 1) * mpmath.gamma(1 - s) * mpmath.sin(mpmath.pi * s / 2))
        assert abs(chi(s) - ref) < 1e-11 * abs(ref)


def test_chi_log_deriv():
    assert abs(chi_log_deriv(0.5 + 50j) + math.log(50 / (2 * math.pi))) < 0.05
    for s in (0.3 + 5j, 0.5 + 2000j, 0.5 - 30j, 1.1 + 7j):
        h = 1e-6
        fd = (chi(s + h) - chi(s - h)) / (2 * h) / chi(s)
        assert abs(chi_log_deriv(s) - fd) < 1e-6 * max(1, abs(fd))
        assert abs(chi_prime(s) / chi(s) - chi_log_deriv(s)) < 1e-10 * max(1, abs(fd))
    with pytest.raises(PoleError):
        chi(1.0)


@given(st.floats(10, 5000))
@settings(max_examples=50, deadline=None)
def test_chi_log_deriv_asymptotic(t):
    assert abs(chi_log_deriv(0.5 + 1j * t) + math.log(t / (2 * math.pi))) < 1.0 / t


# -- Hardy Z and theta -------------------------------------------------------

def test_theta_asymptotic_accuracy():
    t = np.linspace(10, 1000, 300)
    assert np.abs(theta_rs(t) - theta_exact(t)).max() < 1e-8
    ref = float(mpmath.siegeltheta(30))
    assert theta_rs(30.0) == pytest.approx(ref, abs=1e-12)
    with pytest.raises(ValueError):
        theta_rs(5.0)


def test_hardy_z_examples():
    assert hardy_z(14.0) * hardy_z(14.2) < 0
    assert hardy_z(20.9) * hardy_z(21.1) < 0
    assert abs(abs(hardy_z(30.0)) - abs(zeta(0.5 + 30j))) < 1e-14
    assert hardy_z(5.0) == pytest.approx(float(mpmath.siegelz(5.0)), abs=1e-12)
    t = np.array([17.8456, 100.3, 999.7])
    assert np.allclose(hardy_z(t), [float(mpmath.siegelz(x)) for x in t], atol=1e-10)


# -- zeros -------------------------------------------------------------------

def test_gram_points():
    g = gram_points([-1, 0, 100])
    assert g[0] == pytest.approx(9.6669, abs=1e-4)
    assert g[1] == pytest.approx(float(mpmath.grampoint(0)), abs=1e-10)
    assert g[2] == pytest.approx(float(mpmath.grampoint(100)), abs=1e-9)


@pytest.mark.parametrize("T,count", [(15, 1), (50, 10), (100, 29)])
def test_zero_counts(T, count):
    z = find_zeros(T)
    assert len(z) == count and z.certified
    assert z.gammas[0] == pytest.approx(14.134725, abs=1e-6)


def test_zero_ordinates_against_oracle(zeros200):
    ref = np.array([float(mpmath.zetazero(n).imag) for n in range(1, 80)])
    assert len(zeros200) == 79
    assert np.abs(zeros200.gammas - ref).max() < 1e-8
    assert zeros200.abs_error <= 1e-8


def test_zero_list_invariants(zeros200):
    g = zeros200.gammas
    assert np.all(np.diff(g) > 0)
    lo, hi = hardy_z(g - 1e-8), hardy_z(g + 1e-8)
    assert np.all(lo * hi < 0)
    assert zeros200.count_certificate == len(zeros200)


def test_argument_count_matches_known_values():
    assert argument_count(100.0) == pytest.approx(29, abs=0.05)
    assert argument_count(17.5) == pytest.approx(1, abs=0.05)


def test_find_zeros_rejects_small_T():
    with pytest.raises(ValueError):
        find_zeros(10.0)


def test_snap_endpoint(zeros200):
    assert snap_endpoint(14.2, zeros200) == pytest.approx(17.578, abs=1e-3)
    assert snap_endpoint(21.0, zeros200) == pytest.approx(17.578, abs=1e-3)
    assert snap_endpoint(5.0, zeros200) == 5.0
    assert snap_endpoint(30.0, zeros200) == 30.0
    with pytest.raises(ValueError):
        snap_endpoint(250.0, zeros200)


def test_zero_cache_roundtrip(tmp_path, zeros200):
    path = tmp_path / "z.txt"
    zeros200.save(path)
    text = path.read_text()
    assert text.startswith("# zeros T=200.0 abs_error=")
    assert "certified=true" in text.splitlines()[0]
    assert text.splitlines()[1] == f"{zeros200.gammas[0]:.12f}"
    back = ZeroList.load(path)
    assert back.certified and len(back) == len(zeros200)
    assert np.abs(back.gammas - zeros200.gammas).max() < 1e-12


def test_zero_cache_validation():
    with pytest.raises(CacheError, match="line 1"):
        ZeroList.loads("zeros\n14.1\n")
    with pytest.raises(CacheError, match="line 3"):
        ZeroList.loads("# zeros T=30.0 abs_error=1e-10 certified=true\n21.0\n14.1\n")
    with pytest.raises(CacheError, match="line 2"):
        ZeroList.loads("# zeros T=30.0 abs_error=1e-10 certified=true\n31.0\n")
    with pytest.raises(CacheError, match="line 2"):
        ZeroList.loads("# zeros T=30.0 abs_error=1e-10 certified=true\nabc\n")


def test_cached_zeros_idempotent(tmp_path):
    path = tmp_path / "z.txt"
    a = cached_zeros(60.0, path)
    first = path.read_bytes()
    b = cached_zeros(60.0, path)
    assert path.read_bytes() == first
    assert np.array_equal(a.gammas, b.gammas)
    c = cached_zeros(40.0, path)
    assert len(c) == 6 and c.T == 40.0


def test_densification_failure_is_reported(monkeypatch):
    import zeta_moments.zeta.zeros as zz

    monkeypatch.setattr(zz, "DENSITIES", (4,))
    monkeypatch.setattr(zz, "_sign_change_brackets", lambda t, z: [])
    with pytest.raises(CertificationError, match="Rosser block"):
        zz.find_zeros(20.0)
