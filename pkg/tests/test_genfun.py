import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wallwalk.genfun import (U_SWITCH, b_coefficient, closed_forms, generating_functions,
                             generating_functions_dp, h_series, ode_residual, phi_closed, phi_series,
                             psi_identity_residual, psi_prime)
from wallwalk.measure import build_measure
from wallwalk.walk import mean_trajectory, stationary

T_VALUES = [-0.9, 0.0, 0.5, 0.99]


class TestHSeries:
    def test_seeds(self):
        t = np.linspace(-1, 1, 9)
        H = h_series(1.5, t, 2)
        assert np.all(H[0] == 0.0)
        assert np.allclose(H[1], t / 2.5, atol=1e-15)
        assert np.allclose(H[2], (3.5 * t**2 - 2.5) / (2.5 * 3.5), atol=1e-15)

    def test_recursion(self):
        d = 1.5
        t = np.linspace(-1, 1, 41)
        H = h_series(d, t, 51)
        for y in range(2, 51):
            lhs = (2 * y + d) * t * H[y]
            rhs = (y + d + 1) * H[y + 1] + (y - 1) * H[y - 1]
            assert np.max(np.abs(lhs - rhs)) <= 1e-12


class TestClosedForms:
    def test_origin(self):
        for t in (-1.0, 0.0, 0.7, 1.0):
            v = phi_closed(1.5, t, 0.0)
            assert v.phi == 0.0 and v.psi == 0.0

    def test_example_point(self):
        v = phi_closed(1.5, 0.5, 0.2)
        phi, psi, dpsi = phi_series(1.5, 0.5, 0.2)
        assert v.phi == pytest.approx(float(phi), abs=1e-10)
        assert v.psi == pytest.approx(float(psi), abs=1e-10)
        assert v.psi_prime == pytest.approx(float(dpsi), abs=1e-10)

    def test_psi_prime_leading_term(self):
        # Psi'(u) -> (pi_1 / pi_0) Q_1(t) = 1.4 t as u -> 0
        for t in (0.3, -0.8):
            assert float(psi_prime(1.5, t, 1e-7)) == pytest.approx(1.4 * t, rel=1e-6)

    @pytest.mark.parametrize("delta", [1.25, 1.5, 1.75])
    def test_series_agreement(self, delta):
        tt, uu = np.meshgrid(T_VALUES, np.linspace(0.0, 0.3, 31))
        series = phi_series(delta, tt, uu)
        closed = closed_forms(delta, tt, uu)
        for s, c in zip(series, closed):
            assert np.max(np.abs(s - c)) <= 1e-10

    @pytest.mark.parametrize("delta", [1.25, 1.5, 1.75])
    def test_negative_u_through_parity(self, delta):
        # Phi_t(-u) = Phi_{-t}(u); the series is summed at -u directly
        tt, uu = np.meshgrid(T_VALUES, np.linspace(0.01, 0.3, 30))
        series = phi_series(delta, tt, -uu)
        closed = closed_forms(delta, -tt, uu)
        assert np.max(np.abs(series[0] - closed[0])) <= 1e-10
        assert np.max(np.abs(series[2] - psi_prime(delta, tt, -uu))) <= 1e-10

    def test_closed_branch_is_used_above_switch(self):
        u = U_SWITCH * 1.5
        B = b_coefficient(1.5, 0.3, 0.7, u)
        assert np.isfinite(B)
        phi, psi, dpsi = phi_series(1.5, 0.3, u)
        assert float(closed_forms(1.5, 0.3, u)[2]) == pytest.approx(float(dpsi), abs=1e-12)

    def test_near_one(self):
        # the closed forms stay finite up to u close to 1, where the series is useless
        for t in (-1.0, 0.0, 0.999, 1.0):
            v = phi_closed(1.5, t, 0.999)
            assert np.isfinite([v.phi, v.psi, v.psi_prime]).all()

    def test_psi_identity(self):
        assert psi_identity_residual(1.5) <= 1e-7
        assert psi_identity_residual(1.25) <= 1e-7

    @given(st.floats(min_value=1.05, max_value=1.95), st.floats(min_value=-1.0, max_value=1.0),
           st.floats(min_value=0.0, max_value=0.3))
    @settings(max_examples=60, deadline=None)
    def test_series_agreement_random(self, delta, t, u):
        s = phi_series(delta, t, u)
        c = closed_forms(delta, t, u)
        assert abs(float(s[0]) - float(c[0])) <= 1e-10
        assert abs(float(s[1]) - float(c[1])) <= 1e-10

    def test_domain(self):
        with pytest.raises(ValueError):
            phi_closed(1.5, 0.5, 1.0)
        with pytest.raises(ValueError):
            phi_closed(1.5, 1.5, 0.5)


class TestODE:
    def test_stated_grid(self):
        assert ode_residual(1.5, 0.5, np.linspace(0.1, 0.9, 9)) <= 1e-6

    def test_boundary_t(self):
        assert ode_residual(1.5, 1.0, [0.5]) <= 1e-6
        assert ode_residual(1.5, -1.0, [0.5]) <= 1e-6

    @pytest.mark.parametrize("t", [-0.99, -0.5, 0.0, 0.5, 0.99])
    def test_q_positive(self, t):
        u = np.linspace(0.01, 0.99, 50)
        assert np.all(1 - 2 * t * u + u * u > 0)
        assert np.isfinite(ode_residual(1.5, t, np.linspace(0.1, 0.98, 12)))

    def test_grid_domain(self):
        with pytest.raises(ValueError):
            ode_residual(1.5, 0.5, [0.0, 0.5])


class TestGeneratingFunctions:
    def test_zero(self):
        g = generating_functions(1.5, 0.0)
        assert g.g_e == 0.0 and g.g_o == 0.0

    def test_against_dp(self):
        g = generating_functions(1.5, 0.3)
        ref, tail = generating_functions_dp(1.5, 0.3, 400)
        assert tail < 1e-100
        assert g.g_e == pytest.approx(ref.g_e, abs=1e-8)
        assert g.g_o == pytest.approx(ref.g_o, abs=1e-8)

    def test_odd_part_via_shifted_start(self):
        # E_0 X_n = E_1 X_{n-1}, so g_o(z) = z sum_{m even} z^m E_1 X_m
        z = 0.3
        m = mean_trajectory(1.5, 1, 400)
        alt = z * sum(z**k * m[k] for k in range(0, 401, 2))
        assert generating_functions(1.5, z).g_o == pytest.approx(alt, abs=1e-8)

    def test_odd_integral_term(self):
        # g_o minus z/(1-z^2) is exactly the integral term
        mu = build_measure(1.5, 1024)
        z = 0.6
        g = generating_functions(1.5, z, measure=mu)
        ref, _ = generating_functions_dp(1.5, z, 2000)
        assert g.g_o - z / (1 - z * z) == pytest.approx(ref.g_o - z / (1 - z * z), abs=1e-9)

    @pytest.mark.parametrize("z", [0.3, 0.9, 0.99])
    def test_half_and_full_range_agree(self, z):
        mu = build_measure(1.5, 1024)
        a = generating_functions(1.5, z, measure=mu, half_range=True)
        b = generating_functions(1.5, z, measure=mu, half_range=False)
        assert a.g_e == pytest.approx(b.g_e, rel=1e-11)
        assert a.g_o == pytest.approx(b.g_o, rel=1e-11)

    @pytest.mark.parametrize("z", [0.9, 0.99, 0.999])
    def test_node_doubling(self, z):
        a = generating_functions(1.5, z, nodes=1024)
        b = generating_functions(1.5, z, nodes=2048)
        assert a.g_e == pytest.approx(b.g_e, rel=1e-10)

    def test_near_one_against_long_dp(self):
        g = generating_functions(1.5, 0.99)
        ref, tail = generating_functions_dp(1.5, 0.99, 8000)
        assert tail < 1e-20
        assert g.g_e == pytest.approx(ref.g_e, rel=1e-11)
        assert g.g_o == pytest.approx(ref.g_o, rel=1e-11)

    def test_domain(self):
        with pytest.raises(ValueError):
            generating_functions(1.5, 0.9995)
        with pytest.raises(ValueError):
            generating_functions(2.5, 0.5)


def test_psi_coefficients_are_stationary_ratios():
    # Psi_1(u) = sum (pi_y / pi_0) u^y because Q_y(1) = 1
    pi = stationary(1.5, 200).values
    u = 0.4
    ref = sum(pi[y] / pi[0] * u**y for y in range(1, 201))
    assert float(closed_forms(1.5, 1.0, u)[1]) == pytest.approx(ref, rel=1e-12)
