import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wallwalk.quadrature import gauss_jacobi, gauss_jacobi_ab, gauss_legendre, jacobi_weight_mass, tanh_sinh


def test_two_point_legendre():
    r = gauss_legendre(2)
    assert np.allclose(r.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], atol=1e-15)
    assert np.allclose(r.weights, [1.0, 1.0], atol=1e-15)


def test_weight_sum_delta_one_and_a_half():
    r = gauss_jacobi(-0.75, 64)
    ref = float(mp.sqrt(mp.pi) * mp.gamma(0.25) / mp.gamma(0.75))
    assert r.weights.sum() == pytest.approx(ref, abs=1e-10)
    assert ref == pytest.approx(5.24412, abs=1e-5)


def test_second_moment_beta_identity():
    r = gauss_jacobi(-0.75, 64)
    total = jacobi_weight_mass(-0.75)
    ref = float(mp.beta(1.5, 0.25) / mp.beta(0.5, 0.25)) * total
    assert r.integrate(r.nodes**2) == pytest.approx(ref, abs=1e-10)


@given(st.floats(min_value=-0.95, max_value=3.0), st.integers(min_value=1, max_value=200))
@settings(max_examples=60, deadline=None)
def test_rule_invariants(a, n):
    r = gauss_jacobi(a, n)
    assert r.node_count == n
    assert np.all(np.diff(r.nodes) > 0)
    assert np.allclose(r.nodes, -r.nodes[::-1], atol=1e-14)
    assert np.all(r.weights > 0)
    assert abs(r.weights.sum() - jacobi_weight_mass(a)) <= 1e-10 * max(1.0, jacobi_weight_mass(a))


@pytest.mark.parametrize("a", [-0.9, -0.5, 0.25, 1.5])
def test_polynomial_exactness(a):
    n = 12
    r = gauss_jacobi(a, n)
    for k in range(0, 2 * n, 2):
        ref = float(mp.beta((k + 1) / 2.0, a + 1))
        assert r.integrate(r.nodes**k) == pytest.approx(ref, rel=1e-12)


def test_asymmetric_rule():
    r = gauss_jacobi_ab(0.0, 0.5, 20)
    # int_{-1}^{1} t (1+t)^{1/2} dt
    ref = float(mp.quad(lambda t: t * mp.sqrt(1 + t), [-1, 1]))
    assert r.integrate(r.nodes) == pytest.approx(ref, rel=1e-13)


@pytest.mark.parametrize("a", [-0.995, -0.75, -0.25, 0.5])
def test_tanh_sinh_mass(a):
    r = tanh_sinh(a, 512)
    assert r.weights.sum() == pytest.approx(jacobi_weight_mass(a), rel=1e-12)
    assert np.all(r.one_minus >= 0) and np.all(r.one_plus >= 0)


def test_tanh_sinh_complements_and_logs():
    r = tanh_sinh(-0.9, 256)
    inner = np.abs(r.nodes) < 0.5
    assert np.allclose(r.one_minus[inner], 1 - r.nodes[inner], rtol=1e-14)
    assert np.allclose(np.exp(r.log_one_minus), r.one_minus, rtol=1e-13)
    assert np.allclose(np.exp(r.log_one_plus), r.one_plus, rtol=1e-13)
    # for a near -1 the deepest complements underflow but their logarithms stay finite
    deep = tanh_sinh(-0.995, 256)
    assert deep.one_minus[-1] == 0.0
    assert np.all(np.isfinite(deep.log_one_minus)) and deep.log_one_minus[-1] < -745


def test_tanh_sinh_singular_integrand():
    # (1 - t)^{1/4} has a branch point the Gauss rule cannot absorb
    a = -0.75
    # int (1-t)^{-1/2} (1+t)^{-3/4} dt = 2^{-1/4} B(1/2, 1/4)
    ref = float(mp.mpf(2) ** -0.25 * mp.beta(0.5, 0.25))
    r = tanh_sinh(a, 256)
    assert r.integrate(r.one_minus**0.25) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("bad", [(-1.0, 4), (-2.0, 4), (0.0, 0)])
def test_invalid(bad):
    with pytest.raises(ValueError):
        gauss_jacobi(*bad)
