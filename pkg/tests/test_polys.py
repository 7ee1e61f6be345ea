import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wallwalk.polys import (FAMILIES, PolyFamily, eval_all, eval_family, gegenbauer, h_factor,
                            identity_residuals, recursion_residual)

GRID = np.linspace(-1.0, 1.0, 101)


def test_low_degrees():
    t = np.linspace(-1, 1, 7)
    q = eval_family("Q", 2, t, delta=1.5)
    assert np.allclose(q[1], t, atol=1e-15)
    assert np.allclose(q[2], 3.5 * t**2 - 2.5, atol=1e-14)


@pytest.mark.parametrize("delta", [1.1, 1.5, 1.9, 3.0])
def test_value_at_one(delta):
    q = eval_family("Q", 150, 1.0, delta=delta)
    assert np.allclose(q, 1.0, atol=1e-12)


def test_gegenbauer_degree_one():
    for lam in (0.3, 0.75, 1.75, 4.0):
        g = gegenbauer(lam, 1, GRID)
        assert np.allclose(g[1], 2 * lam * GRID, atol=1e-15)


@pytest.mark.parametrize("lam", [0.25, 0.75, 1.75])
def test_gegenbauer_against_mpmath(lam):
    t = np.array([-0.7, 0.1, 0.95])
    g = gegenbauer(lam, 12, t)
    for y in range(13):
        ref = [float(mp.gegenbauer(y, lam, x)) for x in t]
        assert np.allclose(g[y], ref, rtol=1e-12, atol=1e-13)


def test_gegenbauer_links():
    d = 1.5
    q1 = eval_family("Q1", 30, GRID, delta=d)
    assert np.allclose(q1, gegenbauer(d / 2 + 1, 30, GRID), rtol=1e-12, atol=1e-12)
    qs = eval_family("QStar", 30, GRID, delta=d)
    g = gegenbauer(d / 2, 30, GRID)
    for y in range(31):
        scale = math.exp(math.lgamma(y + 1) + math.lgamma(d) - math.lgamma(y + d))
        assert np.allclose(qs[y], scale * g[y], rtol=1e-11, atol=1e-11)


def test_identity_residuals():
    res = identity_residuals(1.5, 30, GRID)
    assert set(res) == {"Q1", "QStar", "QStar1", "Wimp"}
    assert max(res.values()) <= 1e-10


def test_identity_degree_zero_and_one():
    res = identity_residuals(1.5, 0, GRID)
    assert all(v == 0.0 for v in res.values())
    # Q*_1 = t and 1! Gamma(d)/Gamma(1+d) G_1^{d/2} = t
    qs = eval_family("QStar", 1, GRID, delta=1.5)
    assert np.allclose(qs[1], GRID, atol=1e-15)


@pytest.mark.parametrize("delta", [1.25, 1.75])
def test_identities_other_delta(delta):
    assert max(identity_residuals(delta, 30, GRID).values()) <= 1e-10


@pytest.mark.parametrize("family", FAMILIES)
@given(delta=st.floats(min_value=1.01, max_value=1.99), t=st.floats(min_value=0.0, max_value=1.0))
@settings(max_examples=30, deadline=None)
def test_parity(family, delta, t):
    plus = eval_family(family, 100, t, delta=delta)
    minus = eval_family(family, 100, -t, delta=delta)
    sign = (-1.0) ** np.arange(101)
    scale = np.maximum(np.abs(plus), 1e-300)
    assert np.all(np.abs(minus - sign * plus) <= 1e-12 * scale + 1e-300)


@pytest.mark.parametrize("family", FAMILIES)
def test_recursion_residual(family):
    fam = PolyFamily(family, 1.5)
    vals = eval_family(fam, 100, GRID)
    assert recursion_residual(fam, vals, GRID) <= 1e-10


def test_eval_all_matches_single():
    every = eval_all(1.5, 20, GRID)
    for k in FAMILIES:
        assert np.array_equal(every[k], eval_family(k, 20, GRID, delta=1.5))


def test_h_link_recursion():
    d = 1.5
    t = GRID
    q = eval_family("Q", 101, t, delta=d)
    y = np.arange(1, 102)
    H = np.zeros_like(q)
    H[1:] = h_factor(d, y)[:, None] * q[1:]
    worst = 0.0
    for k in range(2, 101):
        lhs = (2 * k + d) * t * H[k]
        rhs = (k + d + 1) * H[k + 1] + (k - 1) * H[k - 1]
        scale = np.abs(lhs) + np.abs((k + d + 1) * H[k + 1]) + np.abs((k - 1) * H[k - 1])
        worst = max(worst, float(np.max(np.abs(lhs - rhs) / np.maximum(scale, 1e-300))))
    assert worst <= 1e-12


def test_guards():
    with pytest.raises(ValueError):
        eval_family("Q", 300, 0.5, delta=1.5)
    with pytest.raises(ValueError):
        eval_family("Q", 3, 1.2, delta=1.5)
    with pytest.raises(ValueError):
        eval_family("Nope", 3, 0.5, delta=1.5)
    with pytest.raises(ValueError):
        gegenbauer(0.0, 3, 0.5)
    with pytest.raises(OverflowError):
        # huge delta makes p_y tiny, so the forward recursion blows up
        eval_family("Q", 200, 0.9, delta=1e8)


def test_pure():
    a = eval_family("QStar1", 40, GRID, delta=1.3)
    b = eval_family("QStar1", 40, GRID, delta=1.3)
    assert np.array_equal(a, b)
