import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import minimize_scalar

from freemass.exceptions import NormalizationError
from freemass.gaussian_states import (
    GaussianState,
    PhysicalUnits,
    dilate,
    free_evolve,
    is_contractive,
    make_muw,
    make_tcs,
    min_variance_point,
    moments,
    multiply_gaussian_factor,
    norm_squared,
    normalize,
    overlap,
    shift_position,
    squeezed_tcs_params,
    states_close,
    variance_curve,
)
from freemass.grid_oracle import Grid, GridState, discretize, moments_grid

from conftest import gaussian_states

# tcs with xi = 1 and |mu + nu|^2 = 4, so that t_M = 0.5 for omega = 1
MU_HALF = math.sqrt(29) / 4
NU_HALF = (11 + 16j) / (4 * math.sqrt(29))


def hyperbolic_pairs():
    return st.tuples(st.floats(0.0, 1.5), st.floats(-math.pi, math.pi), st.floats(-math.pi, math.pi)).map(
        lambda t: (cmath.exp(1j * t[1]) * math.cosh(t[0]), cmath.exp(1j * t[2]) * math.sinh(t[0]))
    )


class TestConstruction:
    def test_muw_zero_mean(self):
        mo = moments(make_muw(0, 0, 0.5))
        assert mo.var_q == pytest.approx(0.5, rel=1e-14)
        assert mo.var_p == pytest.approx(0.5, rel=1e-14)
        assert mo.corr == 0

    def test_muw_means(self):
        units = PhysicalUnits(hbar=0.5)
        mo = moments(make_muw(1, 2, 0.25, units), units)
        assert mo.mean_q == 1
        assert mo.mean_p == pytest.approx(2 * 0.5)

    def test_muw_normalized(self):
        assert norm_squared(make_muw(0.3, -1, 0.7)) == pytest.approx(1, abs=1e-14)

    @pytest.mark.parametrize("bad", [0.0, -1.0])
    def test_muw_rejects_nonpositive_width(self, bad):
        with pytest.raises(ValueError):
            make_muw(0, 0, bad)

    def test_muw_against_grid(self):
        s = make_muw(0, 0, 0.5)
        g = moments_grid(discretize(s, Grid(-12, 12, 4096)))
        mo = moments(s)
        for name in ("mean_q", "var_q", "mean_p", "var_p", "corr"):
            assert getattr(g, name) == pytest.approx(getattr(mo, name), abs=1e-9)

    def test_coherent_tcs(self):
        units = PhysicalUnits(hbar=1.0, mass=2.0, omega=3.0)
        mo = moments(make_tcs(1, 0, 0, units), units)
        assert mo.var_q == pytest.approx(1 / (2 * 2 * 3))
        assert mo.corr == pytest.approx(0, abs=1e-15)

    def test_squeezed_tcs_is_contractive(self):
        r = 1.0
        s = make_tcs(math.cosh(r), 1j * math.sinh(r))
        expected = -math.sinh(r) * math.cosh(r)
        assert moments(s).corr == pytest.approx(expected, rel=1e-12)
        assert is_contractive(s)
        g = moments_grid(discretize(s, n_points=8192))
        assert g.corr == pytest.approx(expected, abs=1e-8)

    def test_tcs_width_with_units(self):
        units = PhysicalUnits(hbar=2.0, mass=3.0, omega=0.5)
        mu, nu = MU_HALF, NU_HALF
        s = make_tcs(mu, nu, 0.4 + 0.9j, units)
        mo = moments(s, units)
        assert mo.var_q == pytest.approx(2.0 / (2 * 3.0 * 0.5) * abs(mu - nu) ** 2, rel=1e-12)
        assert mo.mean_q == pytest.approx(0.4)
        assert mo.mean_p == pytest.approx(0.9)
        assert mo.corr == pytest.approx(-2.0 * 1.0, rel=1e-12)

    def test_tcs_rejects_bad_normalization(self):
        with pytest.raises(ValueError):
            make_tcs(1.0, 0.5)

    @given(hyperbolic_pairs())
    def test_tcs_correlation(self, pair):
        mu, nu = pair
        assert moments(make_tcs(mu, nu)).corr == pytest.approx(-(mu.conjugate() * nu).imag, rel=1e-10, abs=1e-12)

    @given(hyperbolic_pairs())
    def test_tcs_purity(self, pair):
        mo = moments(make_tcs(*pair))
        assert mo.heisenberg_excess() == pytest.approx(0, abs=1e-12 * mo.var_q * mo.var_p)

    def test_squeezed_params(self):
        mu, nu = squeezed_tcs_params(5.0)
        assert abs(mu) ** 2 - abs(nu) ** 2 == pytest.approx(1, abs=1e-12)
        assert (mu.conjugate() * nu).imag == pytest.approx(5.0, rel=1e-12)

    def test_non_normalizable(self):
        with pytest.raises(NormalizationError):
            GaussianState(-1.0)

    def test_units_positive(self):
        with pytest.raises(ValueError):
            PhysicalUnits(hbar=0.0)
        with pytest.raises(ValueError):
            PhysicalUnits(mass=float("inf"))


class TestInvariants:
    @given(gaussian_states())
    def test_purity_identity(self, s):
        mo = moments(s)
        assert mo.var_q * mo.var_p - mo.corr**2 == pytest.approx(0.25, rel=1e-12)

    @settings(max_examples=100)
    @given(gaussian_states(), st.floats(-5, 5))
    def test_evolution_consistency(self, s, t):
        mo0 = moments(s)
        mo = moments(free_evolve(s, t))
        assert mo.var_q == pytest.approx(mo0.var_q + 2 * mo0.corr * t + mo0.var_p * t**2, rel=1e-10)
        assert mo.mean_q == pytest.approx(mo0.mean_q + mo0.mean_p * t, rel=1e-10, abs=1e-12)
        assert mo.var_p == pytest.approx(mo0.var_p, rel=1e-10)
        assert norm_squared(free_evolve(s, t)) == pytest.approx(1, rel=1e-10)

    @given(gaussian_states(), st.floats(-3, 3), st.floats(-3, 3))
    def test_evolution_group(self, s, t1, t2):
        a = free_evolve(free_evolve(s, t1), t2)
        b = free_evolve(s, t1 + t2)
        assert states_close(a, b, atol=1e-9)

    @given(gaussian_states(), st.floats(0.1, 10))
    def test_dilate_inverse(self, s, lam):
        assert states_close(dilate(dilate(s, lam), 1 / lam), s, atol=1e-12)

    @given(gaussian_states(), st.floats(-5, 5))
    def test_shift_inverse(self, s, a):
        assert states_close(shift_position(shift_position(s, a), -a), s, atol=1e-12)

    @given(gaussian_states(), st.floats(0.2, 5))
    def test_dilate_preserves_purity(self, s, lam):
        mo = moments(dilate(s, lam))
        assert mo.heisenberg_excess() == pytest.approx(0, abs=1e-12 * mo.var_q * mo.var_p)

    def test_sql_minimization(self):
        sql = 1.0
        res = minimize_scalar(lambda v: v + sql**2 / (4 * v), bracket=(0.1, 1.0, 5.0), method="golden", tol=1e-12)
        assert res.fun == pytest.approx(sql, abs=1e-9)
        assert res.x == pytest.approx(sql / 2, abs=1e-6)
        # the same minimum through the evolution code
        evolved = variance_curve(make_muw(0, 0, sql / 2), 1.0)
        assert evolved == pytest.approx(sql, abs=1e-12)

    def test_grid_agreement_random(self, rng):
        for _ in range(50):
            var = rng.uniform(0.1, 2)
            s = normalize(GaussianState((1 + 1j * rng.uniform(-2, 2)) / (4 * var), rng.uniform(-1, 1), rng.uniform(-1, 1)))
            g = moments_grid(discretize(s, n_points=4096))
            mo = moments(s)
            for name in ("mean_q", "var_q", "mean_p", "var_p", "corr"):
                assert getattr(g, name) == pytest.approx(getattr(mo, name), abs=1e-8)


class TestEvolution:
    def test_muw_spreading(self):
        d2, t = 0.3, 1.7
        assert moments(free_evolve(make_muw(0, 0, d2), t)).var_q == pytest.approx(d2 + t**2 / (4 * d2), rel=1e-13)

    def test_identity_at_zero(self):
        s = make_tcs(MU_HALF, NU_HALF, 0.2 + 0.1j)
        assert states_close(free_evolve(s, 0.0), s, atol=0)

    def test_contractive_tcs_shrinks(self):
        s = make_tcs(MU_HALF, NU_HALF)
        v = variance_curve(s, np.array([0.0, 0.1, 0.2]))
        assert v[1] < v[0] and v[2] < v[1]

    def test_braginskii_form_without_correlation(self):
        s = make_muw(0, 0, 0.7)
        t = np.linspace(0, 3, 7)
        assert np.allclose(variance_curve(s, t), 0.7 + t**2 / (4 * 0.7), rtol=1e-14)

    def test_variance_curve_at_zero(self):
        s = make_tcs(MU_HALF, NU_HALF)
        assert variance_curve(s, 0.0) == pytest.approx(s.var_q)

    def test_tcs_minimum(self):
        s = make_tcs(MU_HALF, NU_HALF)
        t_m, v_min = min_variance_point(s)
        assert abs(MU_HALF + NU_HALF) ** 2 == pytest.approx(4)
        assert t_m == pytest.approx(0.5, rel=1e-12)
        assert v_min == pytest.approx(t_m / (4 * 1.0), rel=1e-12)
        t = np.linspace(0, 1, 100001)
        dense = variance_curve(s, t)
        assert t[np.argmin(dense)] == pytest.approx(0.5, abs=2e-5)
        assert dense.min() == pytest.approx(v_min, rel=1e-9)

    def test_non_contractive_minimum(self):
        s = normalize(GaussianState(0.25 - 0.3j))
        assert min_variance_point(s) == (0.0, s.var_q)

    def test_minimum_below_sql_for_large_xi(self):
        for xi in (0.5, 2.0, 10.0):
            s = make_tcs(*squeezed_tcs_params(xi))
            t_m, v_min = min_variance_point(s)
            assert v_min < t_m
            assert v_min == pytest.approx(t_m / (4 * xi), rel=1e-12)


class TestElementaryMaps:
    def test_unit_factor(self):
        s = make_tcs(MU_HALF, NU_HALF, 0.5)
        assert states_close(multiply_gaussian_factor(s), s, atol=1e-14)

    def test_real_factor_parallel_sum(self):
        s = make_muw(0.2, 0.5, 0.8)
        v2, c2 = 0.3, 0.4
        out = multiply_gaussian_factor(s, 1 / (4 * v2), 2 * c2 / (4 * v2), 0)
        assert out.var_q == pytest.approx(1 / (1 / 0.8 + 1 / v2), rel=1e-13)
        grid = discretize(s)
        factor = np.exp(-((grid.points - c2) ** 2) / (4 * v2))
        g = moments_grid(GridState(grid.grid, grid.amplitudes * factor))
        mo = moments(out)
        assert g.var_q == pytest.approx(mo.var_q, abs=1e-10)
        assert g.mean_q == pytest.approx(mo.mean_q, abs=1e-10)
        assert g.mean_p == pytest.approx(mo.mean_p, abs=1e-9)

    def test_imaginary_factor_changes_only_correlation(self):
        s = make_muw(0, 0, 0.5)
        out = multiply_gaussian_factor(s, 0.7j, 0, 0)
        assert out.var_q == pytest.approx(s.var_q, rel=1e-14)
        grid = discretize(s)
        g = moments_grid(GridState(grid.grid, grid.amplitudes * np.exp(-0.7j * grid.points**2)))
        assert g.var_q == pytest.approx(0.5, abs=1e-10)
        assert g.corr == pytest.approx(moments(out).corr, abs=1e-9)
        assert g.corr != pytest.approx(0, abs=1e-3)

    def test_factor_not_normalizable(self):
        with pytest.raises(NormalizationError):
            multiply_gaussian_factor(make_muw(0, 0, 1), -1.0, 0, 0)

    def test_trivial_shift_and_dilate(self):
        s = make_tcs(MU_HALF, NU_HALF, 0.1)
        assert states_close(shift_position(s, 0), s, atol=0)
        assert states_close(dilate(s, 1.0), s, atol=0)

    def test_dilate_scaling(self):
        s = dilate(make_muw(0, 0, 1.0), 2.0)
        mo = moments(s)
        assert mo.var_q == pytest.approx(0.25)
        assert mo.var_p == pytest.approx(4 * 0.25)
        assert norm_squared(s) == pytest.approx(1)

    def test_dilate_keeps_correlation(self):
        s = make_tcs(MU_HALF, NU_HALF)
        assert moments(dilate(s, 3.0)).corr == pytest.approx(moments(s).corr, rel=1e-13)

    def test_dilate_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            dilate(make_muw(), 0.0)

    def test_shift_moves_mean_only(self):
        s = make_tcs(MU_HALF, NU_HALF)
        mo, mo2 = moments(s), moments(shift_position(s, 1.5))
        assert mo2.mean_q == pytest.approx(1.5)
        assert (mo2.var_q, mo2.var_p, mo2.corr) == pytest.approx((mo.var_q, mo.var_p, mo.corr))


class TestOverlap:
    def test_self_overlap(self):
        s = make_tcs(MU_HALF, NU_HALF, 0.3 - 0.2j)
        assert overlap(s, s) == pytest.approx(1, abs=1e-14)

    def test_displaced_states_decay(self):
        s = make_muw(0, 0, 0.5)
        values = [abs(overlap(s, shift_position(s, d))) for d in (1, 5, 20)]
        assert values[0] > values[1] > values[2]
        assert values[2] < 1e-40

    @given(gaussian_states(1.0), gaussian_states(1.0))
    @settings(max_examples=20)
    def test_against_grid(self, a, b):
        grid = Grid(-15, 15, 8192)
        q = grid.points
        direct = np.sum(np.conj(a(q)) * b(q)) * grid.spacing
        assert overlap(a, b) == pytest.approx(direct, abs=1e-8)
        assert abs(overlap(a, b)) <= 1 + 1e-12
