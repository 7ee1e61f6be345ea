"""Generating functions of the walk polynomials and of E_0 X_n.

With H_y(t) = Gamma(d+1) Gamma(y) / Gamma(y+d+1) Q_y(t),

    Phi_t(u) = sum_{y>=1} H_y(t) u^y
             = 1/d - u^{-d} q_t(u)^{d/2} int_0^u v^{d-1} q_t(v)^{-d/2} dv,
    Psi_t(u) = sum_{y>=1} (pi_y/pi_0) Q_y(t) u^y = 2u Phi' + d Phi,

where q_t(u) = 1 - 2tu + u^2. Both series converge for |u| < 1, and the
closed forms are evaluated with the inner integral on a panel rule that
refines geometrically towards the near-singularity of q_t at v = 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .measure import SpectralMeasure, build_measure
from .polys import eval_family, h_factor
from .quadrature import gauss_jacobi_ab, gauss_legendre
from .walk import mean_trajectory

__all__ = [
    "GenFunPoint",
    "PhiValue",
    "SERIES_TERMS",
    "b_coefficient",
    "closed_forms",
    "psi_identity_residual",
    "U_SWITCH",
    "generating_functions",
    "generating_functions_dp",
    "h_series",
    "ode_residual",
    "phi_closed",
    "phi_series",
    "psi_prime",
]

U_SWITCH = 0.05
SERIES_TERMS = 60
GEN_NODES = 1024
PANEL_NODES = 20
Z_CAP = 0.999


def h_series(delta: float, t, max_y: int) -> np.ndarray:
    """``H_y(t)`` for y = 0..max_y, with H_0 set to 0."""
    q = eval_family("Q", max_y, t, delta=delta)
    y = np.arange(1, max_y + 1)
    fac = h_factor(delta, y).reshape((-1,) + (1,) * np.ndim(t))
    out = np.zeros_like(q)
    out[1:] = fac * q[1:]
    return out


def phi_series(delta: float, t, u, terms: int = SERIES_TERMS):
    """Truncated power series ``(Phi, Psi, Psi')`` at (t, u)."""
    t, u = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(u, dtype=float))
    H = h_series(delta, t, terms)
    y = np.arange(terms + 1, dtype=float).reshape((-1,) + (1,) * t.ndim)
    powers = u[None] ** y
    with np.errstate(invalid="ignore"):
        lower = np.where(y > 0, u[None] ** np.maximum(y - 1, 0), 0.0)
    phi = np.sum(H * powers, axis=0)
    psi = np.sum((2 * y + delta) * H * powers, axis=0)
    dpsi = np.sum(y * (2 * y + delta) * H * lower, axis=0)
    return phi, psi, dpsi


@lru_cache(maxsize=32)
def _panels(delta: float, kmax: int):
    """Nodes/weights on [0, 1] for int s^{d-1} g(s) ds, g smooth but peaked at 1."""
    head = gauss_jacobi_ab(0.0, delta - 1.0, PANEL_NODES)
    s_head = (1.0 + head.nodes) / 4.0
    w_head = head.weights * 4.0 ** (-delta)
    gl = gauss_legendre(PANEL_NODES)
    edges = np.concatenate([1.0 - 0.5 ** np.arange(1, kmax + 1), [1.0]])
    lo, hi = edges[:-1, None], edges[1:, None]
    s_tail = (0.5 * (hi - lo) * gl.nodes + 0.5 * (hi + lo)).ravel()
    w_tail = (0.5 * (hi - lo) * gl.weights).ravel() * s_tail ** (delta - 1.0)
    return np.concatenate([s_head, s_tail]), np.concatenate([w_head, w_tail])


def _q(u, omt, t):
    # 1 - 2tu + u^2 written to keep accuracy near t = 1
    return (1.0 - u) ** 2 + 2.0 * u * omt


def _inner(delta, t, omt, u):
    """``u^{-d} int_0^u v^{d-1} q_t(v)^{-d/2} dv`` for u in (0, 1)."""
    eps = np.sqrt(_q(u, omt, t))
    kmax = int(np.clip(np.ceil(np.log2(16.0 / np.min(eps))), 1, 60))
    s, w = _panels(float(delta), kmax)
    us = u[..., None] * s
    qs = (1.0 - us) ** 2 + 2.0 * us * omt[..., None]
    return np.sum(w * qs ** (-delta / 2.0), axis=-1)


def b_coefficient(delta, t, omt, u):
    """Coefficient multiplying the inner integral in the closed form of Psi'."""
    return 4.0 * u * omt - 2.0 * t * (1.0 - u) ** 2 + delta * (1.0 - u * t) * (1.0 - u * u) / u


def _closed(delta, t, omt, u):
    d = delta
    q = _q(u, omt, t)
    L = _inner(d, t, omt, u)
    phi = 1.0 / d - q ** (d / 2.0) * L
    psi = -1.0 + d * (1.0 - u * u) * q ** (d / 2.0 - 1.0) * L
    B = b_coefficient(d, t, omt, u)
    dpsi = d * (1.0 - u * u) / (u * q) - B * d * L / q ** (2.0 - d / 2.0)
    return phi, psi, dpsi


def closed_forms(delta, t, u, omt=None):
    """Vectorised ``(Phi, Psi, Psi')`` for |t| <= 1, 0 <= u < 1.

    Points with u below ``U_SWITCH`` take the truncated series instead.
    """
    t, u = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(u, dtype=float))
    omt = np.broadcast_to(1.0 - t if omt is None else np.asarray(omt, dtype=float), t.shape)
    if np.any(np.abs(t) > 1.0) or np.any(u < 0) or np.any(u >= 1.0):
        raise ValueError("closed forms need |t| <= 1 and 0 <= u < 1")
    phi = np.empty(t.shape)
    psi = np.empty(t.shape)
    dpsi = np.empty(t.shape)
    small = u < U_SWITCH
    if np.any(small):
        phi[small], psi[small], dpsi[small] = phi_series(delta, t[small], u[small])
    big = ~small
    if np.any(big):
        phi[big], psi[big], dpsi[big] = _closed(delta, t[big], omt[big], u[big])
    return phi, psi, dpsi


@dataclass(frozen=True)
class PhiValue:
    t: float
    u: float
    phi: float
    psi: float
    psi_prime: float


def phi_closed(delta: float, t: float, u: float) -> PhiValue:
    """``Phi_t(u)``, ``Psi_t(u)`` and ``Psi_t'(u)`` for |t| <= 1, 0 <= u < 1.

    Below ``U_SWITCH`` the truncated series is used, since the closed
    forms cancel like 1/u there.
    """
    phi, psi, dpsi = closed_forms(delta, t, u)
    return PhiValue(float(t), float(u), float(phi), float(psi), float(dpsi))


def psi_prime(delta: float, t, u, one_minus_t=None, one_plus_t=None):
    """``Psi_t'(u)`` for |u| < 1, vectorised.

    Negative u is reduced to positive u through Q_y(-t) = (-1)^y Q_y(t),
    i.e. ``Psi_t'(-u) = -Psi_{-t}'(u)``.
    """
    t, u = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(u, dtype=float))
    omt = np.broadcast_to(1.0 - t if one_minus_t is None else one_minus_t, t.shape)
    opt = np.broadcast_to(1.0 + t if one_plus_t is None else one_plus_t, t.shape)
    neg = u < 0
    tt = np.where(neg, -t, t)
    oo = np.where(neg, opt, omt)
    _, _, dpsi = closed_forms(delta, tt, np.abs(u), oo)
    return np.where(neg, -dpsi, dpsi)


def ode_residual(delta: float, t: float, u_grid, step: float = 1e-5) -> float:
    """Max residual of ``q_t(u) Phi' = t - u - d (1/u - t) Phi`` on the grid.

    Phi' is a centred difference of the closed form.
    """
    u = np.asarray(u_grid, dtype=float)
    if np.any(u <= 0) or np.any(u + step >= 1.0):
        raise ValueError("grid must lie in (0, 1 - step)")
    phi, _, _ = closed_forms(delta, t, u)
    up, _, _ = closed_forms(delta, t, u + step)
    dn, _, _ = closed_forms(delta, t, u - step)
    dphi = (up - dn) / (2.0 * step)
    lhs = (1.0 - 2.0 * t * u + u * u) * dphi
    rhs = t - u - delta * (1.0 / u - t) * phi
    return float(np.max(np.abs(lhs - rhs)))


def psi_identity_residual(delta: float, t_values=(-0.9, -0.3, 0.0, 0.5, 0.99),
                          u_grid=None, step: float = 1e-5) -> float:
    """Max of ``|Psi - (2u Phi' + d Phi)|`` with Phi' by centred differences."""
    u_grid = np.linspace(0.1, 0.9, 9) if u_grid is None else u_grid
    tt, uu = np.meshgrid(np.asarray(t_values, dtype=float), np.asarray(u_grid, dtype=float))
    phi, psi, _ = closed_forms(delta, tt, uu)
    up = closed_forms(delta, tt, uu + step)[0]
    dn = closed_forms(delta, tt, uu - step)[0]
    other = 2.0 * uu * (up - dn) / (2.0 * step) + delta * phi
    return float(np.max(np.abs(psi - other)))


@dataclass(frozen=True)
class GenFunPoint:
    z: float
    g_e: float
    g_o: float


def _integrands(delta, z, t, omt, opt):
    zt = z * t
    P = psi_prime(delta, t, zt, omt, opt)
    M = psi_prime(delta, t, -zt, omt, opt)
    zz = np.full_like(t, z)
    Pz = psi_prime(delta, t, zz, omt, opt)
    Mz = psi_prime(delta, t, -zz, omt, opt)
    a = 1.0 - zt * zt
    b = 1.0 - z * z
    even = 0.5 * (zt * (P - M) / a - z * (Pz - Mz) / b)
    odd = 0.5 * (zt * (P + M) / a - t * z * (Pz + Mz) / b)
    return even, odd


def generating_functions(delta: float, z: float, nodes: int = GEN_NODES,
                         measure: SpectralMeasure | None = None,
                         half_range: bool = True) -> GenFunPoint:
    """``g_e(z)`` and ``g_o(z)`` from the spectral integral.

    ``half_range`` integrates ``2 int_0^1`` as written for the even/odd
    symmetric integrand; ``half_range=False`` evaluates the integrand on all
    of (-1, 1) instead, using Psi' at negative arguments directly.
    """
    if not 1.0 < delta < 2.0:
        raise ValueError("generating functions need delta in (1, 2)")
    if not 0.0 <= z <= Z_CAP:
        raise ValueError(f"z must lie in [0, {Z_CAP}]")
    if z == 0.0:
        return GenFunPoint(0.0, 0.0, 0.0)
    m = measure if measure is not None else build_measure(delta, nodes)
    r = m.rule
    w = m.weights
    if half_range:
        keep = r.nodes > 0
        even, odd = _integrands(delta, z, r.nodes[keep], r.one_minus[keep], r.one_plus[keep])
        ge = 2.0 * np.dot(w[keep], even)
        go = 2.0 * np.dot(w[keep], odd)
        centre = r.nodes == 0
        if np.any(centre):
            ce, co = _integrands(delta, z, r.nodes[centre], r.one_minus[centre], r.one_plus[centre])
            ge += np.dot(w[centre], ce)
            go += np.dot(w[centre], co)
    else:
        even, odd = _integrands(delta, z, r.nodes, r.one_minus, r.one_plus)
        ge = np.dot(w, even)
        go = np.dot(w, odd)
    return GenFunPoint(float(z), float(ge), float(z / (1.0 - z * z) + go))


def generating_functions_dp(delta: float, z: float, n_max: int = 400):
    """Partial sums of ``sum z^n E_0 X_n`` from the exact DP.

    Returns ``(GenFunPoint, tail_bound)``; the tail uses E_0 X_n <= n.
    """
    means = mean_trajectory(delta, 0, n_max)
    n = np.arange(n_max + 1)
    terms = z**n * means
    k = n_max + 1
    tail = z**k * (k - (k - 1) * z) / (1.0 - z) ** 2
    return GenFunPoint(float(z), float(terms[::2].sum()), float(terms[1::2].sum())), float(tail)
