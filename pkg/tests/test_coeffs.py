import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zeta_moments import arith
from zeta_moments.coeffs import (
    CoefficientVector,
    ResonatorParams,
    convolved_norm,
    divisor_coefficients,
    f2n_envelope,
    norms,
    resonator,
)


def _oracle_L(M):
    lm = mpmath.log(M)
    return float(mpmath.sqrt(lm * mpmath.log(lm)))


# -- resonator ---------------------------------------------------------------

def test_resonator_large_M():
    p = ResonatorParams(10**9)
    L = _oracle_L(10**9)
    assert p.L == pytest.approx(L, rel=1e-14)
    # L = 7.92575..., f(67) = 1.88498...
    assert p.L == pytest.approx(7.9255, abs=5e-4)
    assert p.support_primes() == [67, 71]
    f = resonator(p)
    assert f[67] == pytest.approx(L / math.log(67), rel=1e-14)
    assert f[67] == pytest.approx(1.8847, abs=5e-4)
    assert f[67 * 71] == pytest.approx(f[67] * f[71], rel=1e-15)
    assert f.support.tolist() == [1, 67, 71, 67 * 71]


def test_resonator_empty_window_is_indicator():
    p = ResonatorParams(10**6)
    assert p.L == pytest.approx(6.02, abs=0.01)
    assert p.support_lo > p.support_hi
    f = resonator(p)
    assert f.support.tolist() == [1] and f[1] == 1.0


def test_resonator_requires_M_at_least_3():
    with pytest.raises(ValueError):
        ResonatorParams(2)


def test_resonator_override_window_labelled():
    p = ResonatorParams(1000, override_interval=(3, 20))
    f = resonator(p)
    assert "override" in f.label
    assert resonator(ResonatorParams(10**9)).label.count("natural") == 1


@given(st.integers(30, 5000), st.floats(2, 20), st.floats(0, 40))
@settings(max_examples=40, deadline=None)
def test_resonator_invariants(M, lo, width):
    p = ResonatorParams(M, override_interval=(lo, lo + width))
    f = resonator(p)
    prime_set = set(p.support_primes())
    dense = f.dense()
    for n in f.support.tolist():
        fac = arith.factor(n)
        assert fac.is_squarefree
        assert set(fac.primes) <= prime_set
        assert dense[n] == pytest.approx(math.prod(p.f_prime(q) for q in fac.primes), rel=1e-13)
    for a in f.support.tolist():
        for b in f.support.tolist():
            if a * b <= M and math.gcd(a, b) == 1:
                assert f[a * b] == pytest.approx(f[a] * f[b], rel=1e-15)


def test_resonator_prime_values_bounded_on_natural_window():
    p = ResonatorParams(10**12)
    f = resonator(p)
    bound = p.L / (2 * math.log(p.L))
    for q in p.support_primes():
        assert f[q] <= bound + 1e-12


# -- divisor coefficients ----------------------------------------------------

def test_divisor_examples():
    x = divisor_coefficients(8)
    assert x[1] == pytest.approx(1.0, abs=1e-15)
    assert x[2] == pytest.approx(-2 / 3, abs=1e-14)
    assert x[4] == 0.0
    x7 = divisor_coefficients(7, (0.3, 1.0))
    assert x7[7] == pytest.approx(-0.3, abs=1e-14)


@given(st.integers(2, 2000), st.lists(st.floats(-3, 3), min_size=1, max_size=4))
@settings(max_examples=40, deadline=None)
def test_divisor_bounded_by_poly_sup(M, coefs):
    x = divisor_coefficients(M, coefs)
    poly = np.polynomial.Polynomial(coefs)
    crit = [r.real for r in poly.deriv().roots() if abs(r.imag) < 1e-12 and 0 <= r.real <= 1]
    sup = np.abs(poly(np.array([0.0, 1.0] + crit))).max()
    assert np.all(np.abs(x.coeffs) <= sup + 1e-9)


def test_divisor_callable_polynomial():
    a = divisor_coefficients(50, lambda u: u * u)
    b = divisor_coefficients(50, (0, 0, 1))
    assert np.allclose(a.dense(), b.dense(), atol=1e-15)


# -- norms -------------------------------------------------------------------

def test_norm_examples():
    assert norms(CoefficientVector.ones(4)).l1_over_n == pytest.approx(25 / 12, abs=1e-15)
    n1 = norms(CoefficientVector.indicator())
    assert n1.sup == 1.0 and n1.l1 == 1.0


def test_resonator_f2n_under_envelope():
    f = resonator(ResonatorParams(10**9))
    val = norms(f).l2_over_n
    assert 1.0 < val <= f2n_envelope(10**9)


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=40), st.integers(0, 2**31))
def test_norms_monotone(vals, seed):
    rng = np.random.default_rng(seed)
    a = np.abs(np.array(vals))
    b = a * rng.random(len(a))
    big = norms(CoefficientVector.from_dense(np.concatenate([[0.0], a])))
    small = norms(CoefficientVector.from_dense(np.concatenate([[0.0], b])))
    for name in ("sup", "l1", "l1_over_n", "l2_over_n"):
        assert getattr(small, name) <= getattr(big, name) + 1e-12


# -- convolved norm ----------------------------------------------------------

def test_convolved_norm_examples():
    assert convolved_norm(CoefficientVector.indicator(), 3) == 1.0
    assert convolved_norm(CoefficientVector.ones(4), 1) == pytest.approx(1 + 2 / 2 + 2 / 3 + 3 / 4, abs=1e-14)


def test_convolved_norm_matches_dense_convolution():
    c = divisor_coefficients(300)
    tau = np.array([0.0] + [arith.tau_r(n, 2) for n in range(1, 301)])
    conv = arith.dirichlet_convolve(tau, c.dense(), 300)
    w = arith.J_WEIGHT.table(300)
    n = np.arange(1, 301)
    ref = math.fsum(w[1:] * conv[1:] * c.dense()[1:] / n)
    assert convolved_norm(c, 2, arith.J_WEIGHT) == pytest.approx(ref, rel=1e-12)


def test_convolved_norm_resonator_finite():
    f = resonator(ResonatorParams(10**9))
    val = convolved_norm(f, 3, arith.J_WEIGHT)
    assert math.isfinite(val) and val > 1.0


# -- vector plumbing ---------------------------------------------------------

def test_vector_roundtrip(tmp_path):
    x = divisor_coefficients(40)
    path = tmp_path / "x.txt"
    x.save(path)
    assert path.read_text().startswith("# coeffs label=divisor M=40")
    y = CoefficientVector.load(path)
    assert y.M == 40 and y.label == x.label
    assert np.array_equal(x.dense(), y.dense())


def test_vector_rejects_bad_input():
    with pytest.raises(ValueError):
        CoefficientVector(3, [4], [1.0])
    with pytest.raises(ValueError):
        CoefficientVector(3, [1, 1], [1.0, 2.0])
    with pytest.raises(ValueError):
        CoefficientVector.loads("# coeffs label=a M=3\n5 1.0\n")
    with pytest.raises(ValueError):
        CoefficientVector.loads("1 1.0\n")
    x = CoefficientVector.indicator(5)
    with pytest.raises(IndexError):
        x[6]
    assert x[5] == 0.0
    with pytest.raises(ValueError):
        x.support[0] = 3


def test_evaluate_dirichlet_polynomial():
    x = divisor_coefficients(30)
    s = 0.5 + 7.0j
    ref = sum(x[n] * n ** (-s) for n in range(1, 31))
    assert x.evaluate(s) == pytest.approx(ref, abs=1e-13)
    assert x.evaluate(np.array([s, 2.0])).shape == (2,)
