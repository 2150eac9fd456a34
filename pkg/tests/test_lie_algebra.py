import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import expm

from freemass.exceptions import NotPlausibleError
from freemass.lie_algebra import (
    J_MINUS,
    J_PLUS,
    J_Z,
    AbcdMatrix,
    GlFormParams,
    HamiltonianParams,
    ThreeStepParams,
    abcd_from_gl_form,
    abcd_from_hamiltonian,
    abcd_from_three_step,
    breaching_three_step,
    hamiltonian_from_zeta,
    is_plausible,
    onc_satisfied,
)

from conftest import expm_oracle

OZAWA_KZ = math.pi / (3 * math.sqrt(3))
coupling = st.floats(-3, 3)


def ham_matrix(p):
    return np.array([[p.k_z, p.k_plus], [p.k_minus, -p.k_z]])


class TestHamiltonian:
    def test_zero_is_identity(self):
        assert abcd_from_hamiltonian(HamiltonianParams(0, 0, 0)).as_tuple() == (1, 0, 0, 1)

    def test_ozawa_point(self):
        m = abcd_from_hamiltonian(HamiltonianParams(2 * OZAWA_KZ, -2 * OZAWA_KZ, OZAWA_KZ))
        assert np.allclose(m.as_tuple(), (1, -1, 1, 0), atol=1e-12)

    @given(coupling, coupling, coupling)
    def test_matches_exponential(self, kp, km, kz):
        p = HamiltonianParams(kp, km, kz)
        got = abcd_from_hamiltonian(p).matrix
        assert np.allclose(got, expm(ham_matrix(p)), rtol=0, atol=1e-10 * max(1, np.abs(got).max()))
        assert np.allclose(got, expm_oracle(ham_matrix(p)), rtol=0, atol=1e-10 * max(1, np.abs(got).max()))

    def test_generator_matches_matrix(self):
        p = HamiltonianParams(0.3, -0.7, 1.1)
        assert np.allclose(p.generator(), ham_matrix(p))

    @given(coupling, coupling, coupling)
    def test_group_inverse(self, kp, km, kz):
        p = HamiltonianParams(kp, km, kz)
        prod = abcd_from_hamiltonian(p) @ abcd_from_hamiltonian(-p)
        assert prod.allclose(AbcdMatrix(1, 0, 0, 1), atol=1e-10 * max(1, abs(abcd_from_hamiltonian(p).a) ** 2))

    def test_continuity_at_zero(self):
        p = HamiltonianParams(0.8, -1.3, 0.4)
        for eps in (1e-3, 1e-5, 1e-7):
            m = abcd_from_hamiltonian(HamiltonianParams(eps * p.k_plus, eps * p.k_minus, eps * p.k_z))
            deviation = m.matrix - np.eye(2)
            assert np.allclose(deviation / eps, ham_matrix(p), atol=10 * eps)

    def test_series_branch_is_continuous(self):
        # K^2 straddles the switch between series and closed form
        for k_sq in (0.99e-8, 1.01e-8, -0.99e-8, -1.01e-8):
            p = HamiltonianParams(1.0, k_sq, 0.0)
            assert np.allclose(abcd_from_hamiltonian(p).matrix, expm(ham_matrix(p)), rtol=0, atol=1e-15)

    def test_imaginary_branch_plausible_d(self):
        for rho in np.linspace(-0.95, -0.05, 10):
            kabs = math.acos(1 + rho)
            kz = (1 - math.cos(kabs)) * kabs / math.sin(kabs)
            p = HamiltonianParams(2 * kz, kz / rho, kz)
            assert p.k_plus * p.k_minus < -p.k_z**2
            m = abcd_from_hamiltonian(p)
            assert is_plausible(m, tol=1e-10)
            K = math.sqrt(-(p.k_z**2 + p.k_plus * p.k_minus))
            assert m.d.real == pytest.approx(2 * math.cos(K) - 1, abs=1e-12)
            assert -3 < m.d.real < 1


class TestThreeStep:
    def test_zero_is_identity(self):
        assert abcd_from_three_step(ThreeStepParams(0, 0, 0)).as_tuple() == (1, 0, 0, 1)

    def test_ln2_example(self):
        m = abcd_from_three_step(ThreeStepParams(1, -0.5, math.log(2)))
        assert np.allclose(m.as_tuple(), (1, -0.5, 1, 0.5), atol=1e-15)
        product = expm(1 * J_PLUS) @ expm(-0.5 * J_MINUS) @ expm(2 * math.log(2) * J_Z)
        assert np.allclose(m.matrix, product, atol=1e-15)

    @given(coupling, coupling, st.floats(-2, 2))
    def test_triple_product(self, zp, zm, zz):
        product = expm(zp * J_PLUS) @ expm(zm * J_MINUS) @ expm(2 * zz * J_Z)
        m = abcd_from_three_step(ThreeStepParams(zp, zm, zz))
        assert np.allclose(m.matrix, product, rtol=1e-10, atol=1e-10)
        assert m.determinant == pytest.approx(1, abs=1e-10 * max(1, abs(m.a * m.d)))


class TestGlForm:
    def test_identity(self):
        assert np.allclose(abcd_from_gl_form(GlFormParams(0, 0, 2.0)).as_tuple(), (1, 0, 0, 1))

    def test_unit_parameters(self):
        m = abcd_from_gl_form(GlFormParams(1, 1, 1))
        assert np.allclose(m.as_tuple(), (1, -1, 1, 0), atol=1e-15)

    @given(coupling, coupling, st.floats(0.1, 3) | st.floats(-3, -0.1))
    def test_factor_product(self, g1, g2, s):
        theta = math.pi * g2 / 2
        product = expm(-g1 * J_PLUS) @ expm(theta * (J_PLUS / s - s * J_MINUS))
        m = abcd_from_gl_form(GlFormParams(g1, g2, s))
        assert np.allclose(m.matrix, product, atol=1e-10)
        assert -1 <= m.d.real <= 1

    def test_rejects_zero_s(self):
        with pytest.raises(ValueError):
            GlFormParams(1, 1, 0)

    def test_equals_ozawa_hamiltonian(self):
        gl = abcd_from_gl_form(GlFormParams(1, 1, 1))
        ham = abcd_from_hamiltonian(HamiltonianParams(2 * OZAWA_KZ, -2 * OZAWA_KZ, OZAWA_KZ))
        assert gl.allclose(ham, atol=1e-10)


class TestDeterminant:
    def test_thousand_draws(self, rng):
        for _ in range(1000):
            x, y, z = rng.uniform(-2, 2, 3)
            for m in (
                abcd_from_hamiltonian(HamiltonianParams(x, y, z)),
                abcd_from_three_step(ThreeStepParams(x, y, z)),
                abcd_from_gl_form(GlFormParams(x, y, z if abs(z) > 1e-3 else 1.0)),
            ):
                assert abs(m.determinant - 1) <= 1e-10 * max(1, abs(m.a * m.d))

    def test_rejects_bad_determinant(self):
        with pytest.raises(ValueError):
            AbcdMatrix(1, 1, 1, 1)


class TestBreaching:
    def test_ln2(self):
        p = breaching_three_step(math.log(2))
        assert p.zeta_plus == pytest.approx(1, abs=1e-15)
        assert p.zeta_minus == pytest.approx(-0.5, abs=1e-15)
        m = abcd_from_three_step(p)
        assert m.d.real == pytest.approx(0.5)
        assert is_plausible(m)

    @given(st.floats(1e-6, 20))
    def test_plausible_family(self, z):
        # 1 + zeta_plus * zeta_minus = exp(-z) cancels, so rounding grows like exp(z)
        ulps = 8 * np.finfo(float).eps * math.exp(z)
        m = abcd_from_three_step(breaching_three_step(z))
        assert abs(m.a - 1) <= ulps
        assert abs(m.c - 1) <= 4 * np.finfo(float).eps
        assert abs(m.b - (m.d - 1)) <= 4 * np.finfo(float).eps
        assert 0 < m.d.real < 1

    def test_large_zeta_approaches_gl(self):
        assert abcd_from_three_step(breaching_three_step(40)).d.real < 1e-17

    def test_small_zeta_reaches_von_neumann(self):
        # feedback and dilatation vanish; the entangling step stays at -1
        p = breaching_three_step(1e-12)
        assert abs(p.zeta_plus) < 2e-12 and abs(p.zeta_z) < 2e-12
        assert abs(p.zeta_minus + 1) < 2e-12
        assert abcd_from_three_step(p).allclose(AbcdMatrix(1, 0, 1, 1), atol=1e-11)

    @pytest.mark.parametrize("bad", [0.0, -1.0])
    def test_rejects_nonpositive(self, bad):
        with pytest.raises(ValueError):
            breaching_three_step(bad)


class TestHamiltonianFromZeta:
    @given(st.floats(1e-3, 10))
    def test_kplus_twice_kz(self, z):
        p = hamiltonian_from_zeta(z)
        assert p.k_plus == 2 * p.k_z
        assert -0.5 < p.k_z / p.k_minus < 0

    def test_ln2_ratio(self):
        p = hamiltonian_from_zeta(math.log(2))
        assert p.k_z / p.k_minus == pytest.approx(-0.25, rel=1e-12)

    def test_round_trip(self, rng):
        for z in rng.uniform(0.01, 8, 20):
            a = abcd_from_hamiltonian(hamiltonian_from_zeta(z))
            b = abcd_from_three_step(breaching_three_step(z))
            assert a.allclose(b, atol=1e-9)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            hamiltonian_from_zeta(0.0)


class TestOnc:
    def test_gl_point(self):
        assert onc_satisfied(AbcdMatrix(1, -1, 1, 0))

    def test_von_neumann(self):
        assert not onc_satisfied(AbcdMatrix(1, 0, 1, 1))

    def test_half(self):
        assert onc_satisfied(AbcdMatrix(1, -0.5, 1, 0.5))

    def test_not_plausible(self):
        with pytest.raises(NotPlausibleError):
            onc_satisfied(AbcdMatrix(2, 0, 1, 0.5))
