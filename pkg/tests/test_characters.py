import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zeta_moments import arith
from zeta_moments.characters import (
    additive_decomposition_check,
    build_table,
    conductor_brute_force,
    delta_envelope_report,
    delta_factor,
    e,
    gauss_sum,
    induced_gauss_sum_check,
    inducing_primitive,
    nonprincipal_sum,
    primitive_decomposition_check,
    primitive_decomposition_rhs,
)


def test_table_examples():
    t3 = build_table(3)
    assert len(t3) == 2
    assert t3.principal.is_principal
    odd = t3.characters[1]
    assert odd(2) == pytest.approx(-1) and odd.parity() == -1
    t8 = build_table(8)
    assert len(t8) == 4
    assert sorted(c.conductor for c in t8) == [1, 4, 8, 8]
    assert sum(c.is_primitive for c in t8) == 2
    t1 = build_table(1)
    assert len(t1) == 1 and t1.principal(5) == 1


def test_bad_modulus():
    with pytest.raises(ValueError):
        build_table(0)
    with pytest.raises(ValueError):
        build_table(10**5 + 1)


@pytest.mark.parametrize("q", list(range(1, 61)))
def test_table_structure(q):
    tab = build_table(q)
    assert len(tab) == arith.euler_phi(q)
    assert sum(c.is_principal for c in tab) == 1
    M = tab.matrix
    gram = M @ M.conj().T
    assert np.abs(gram - tab.phi * np.eye(len(tab))).max() < 1e-12
    unit = np.array([math.gcd(a, q) == 1 for a in range(q)])
    assert np.all(M[:, ~unit] == 0)
    for ch in tab:
        assert ch.conductor == conductor_brute_force(ch)
        v = ch.values()
        for a in range(q):
            for b in range(0, q, max(1, q // 7)):
                assert abs(v[a * b % q] - v[a] * v[b]) < 1e-12


def test_character_algebra():
    tab = build_table(15)
    a, b = tab.characters[3], tab.characters[5]
    assert np.allclose((a * b).values(), a.values() * b.values())
    assert np.allclose(a.conj().values(), np.conj(a.values()))


def test_gauss_sum_examples():
    chi = build_table(3).characters[1]
    assert gauss_sum(chi) == pytest.approx(1j * math.sqrt(3), abs=1e-12)
    assert abs(gauss_sum(build_table(4).principal)) < 1e-12
    for ch in build_table(5).primitive():
        assert abs(abs(gauss_sum(ch)) - math.sqrt(5)) < 1e-12


def test_gauss_sum_matches_definition():
    for q in (7, 12, 16):
        for ch in build_table(q):
            direct = sum(ch(a) * e(a / q) for a in range(1, q + 1))
            assert gauss_sum(ch) == pytest.approx(direct, abs=1e-11)


def test_principal_gauss_sum_is_mobius():
    for q in range(1, 61):
        assert gauss_sum(build_table(q).principal) == pytest.approx(arith.mobius(q), abs=1e-10)


def test_primitive_gauss_sum_modulus():
    for q in range(1, 61):
        for ch in build_table(q).primitive():
            assert abs(abs(gauss_sum(ch)) ** 2 - q) < 1e-10


def test_induced_gauss_sum_examples():
    psi = build_table(3).characters[1]
    for kp in (3, 6, 12):
        chi = build_table(kp).find(np.array([psi(a) if math.gcd(a, kp) == 1 else 0 for a in range(kp)]))
        assert induced_gauss_sum_check(chi, psi) < 1e-10
    with pytest.raises(ValueError):
        induced_gauss_sum_check(build_table(5).characters[1], psi)


def test_induced_gauss_sum_all():
    worst = 0.0
    for kp in range(1, 41):
        for chi in build_table(kp):
            psi = inducing_primitive(chi)
            assert psi.q == chi.conductor and psi.is_primitive
            worst = max(worst, induced_gauss_sum_check(chi, psi))
    assert worst < 1e-10


def test_additive_examples():
    assert additive_decomposition_check(2, 6) < 1e-12
    assert additive_decomposition_check(10, 5) < 1e-14
    assert additive_decomposition_check(1, 5) < 1e-12
    assert nonprincipal_sum(5, 5) == 0


def test_additive_decomposition_all():
    worst = max(additive_decomposition_check(m, k) for k in range(2, 61) for m in range(1, k + 1))
    assert worst < 1e-10


def test_delta_examples():
    psi = build_table(7).characters[2]
    assert delta_factor(7, 7, 1, psi) == pytest.approx(psi(-1).conjugate() / 6, abs=1e-15)
    psi3 = build_table(3).characters[1]
    # q = 3, k = 6, d = 2: only e = 1 contributes since mu(k/(eq)) = mu(2/e) and e | gcd(2, 2)
    brute = sum(
        arith.mobius(2 // f) / arith.euler_phi(6 // f) * psi3(-(2 // f)).conjugate() * psi3(2 // f) * arith.mobius(2 // f)
        for f in (1, 2)
    )
    assert delta_factor(3, 6, 2, psi3) == pytest.approx(brute, abs=1e-15)
    assert delta_factor(3, 12, 1, psi3) == 0  # mu(4) = 0
    with pytest.raises(ValueError):
        delta_factor(3, 10, 1, psi3)


def test_primitive_decomposition_examples():
    assert primitive_decomposition_check(2, 4) < 1e-10
    assert primitive_decomposition_check(3, 7) < 1e-12
    assert primitive_decomposition_check(8, 12) < 1e-10


def test_primitive_decomposition_all():
    worst = max(primitive_decomposition_check(m, k) for k in range(2, 41) for m in range(1, k + 1))
    assert worst < 1e-10


@given(st.integers(2, 40), st.integers(1, 200))
@settings(max_examples=40, deadline=None)
def test_primitive_decomposition_readings_agree(k, m):
    a = primitive_decomposition_rhs(m, k, "swapped")
    b = primitive_decomposition_rhs(m, k, "inner")
    assert abs(a - b) < 1e-10
    assert abs(a - nonprincipal_sum(m, k)) < 1e-10


def test_delta_envelope_report_runs():
    rows = delta_envelope_report(max_kq=60)
    assert rows and all(r.envelope > 0 for r in rows)
    assert all(math.isfinite(r.ratio) for r in rows)
