"""Spectral measure of the walk polynomials and the transition formula.

For 1 < d < 2 the orthogonality measure of Q is

    mu = pi_0 (delta_{+1} + delta_{-1}) + w(t) dt,
    w(t) = (1 - t^2)^{(d-3)/2} / |F(t)|^2 / (d Z),

with F the boundary function and Z = int (1-t^2)^{(d-3)/2} / |F|^2 dt, so
that the continuous part has mass 1/d. Transition probabilities are

    P_x(X_n = y) = (pi_y / pi_0) int t^n Q_x(t) Q_y(t) dmu(t).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .polys import eval_family
from .quadrature import QuadratureRule, gauss_jacobi, jacobi_weight_mass, tanh_sinh
from .specfun import boundary_F
from .walk import stationary, step_probs

__all__ = [
    "DetteReport",
    "SpectralMeasure",
    "Transition",
    "build_measure",
    "dette_checks",
    "gram",
    "integrate",
    "km_row",
    "km_transition",
]

DEFAULT_NODES = 512
KM_NODES = 2048


def _check_delta(delta):
    if not 1.0 < delta < 2.0:
        raise ValueError(f"the spectral measure is built for delta in (1, 2), got {delta}")


def _rule(a, n, quadrature):
    if quadrature == "tanh-sinh":
        return tanh_sinh(a, n)
    if quadrature == "gauss-jacobi":
        return gauss_jacobi(a, n)
    raise ValueError(f"unknown quadrature {quadrature!r}")


def _inv_abs_F2(delta, rule: QuadratureRule):
    f = boundary_F(delta, rule.nodes, one_minus_t=rule.one_minus, one_plus_t=rule.one_plus,
                   log_one_minus_t=rule.log_one_minus, log_one_plus_t=rule.log_one_plus)
    return 1.0 / f.abs_squared


@dataclass(frozen=True)
class SpectralMeasure:
    delta: float
    atom_mass: float
    rule: QuadratureRule
    inv_F2: np.ndarray
    Z: float

    @property
    def density_exponent(self) -> float:
        return self.rule.weight_exponent

    @property
    def nodes(self) -> np.ndarray:
        return self.rule.nodes

    @property
    def weights(self) -> np.ndarray:
        """Quadrature weights of the continuous part alone."""
        return self.rule.weights * self.inv_F2 / (self.delta * self.Z)

    @property
    def continuous_mass(self) -> float:
        return float(self.weights.sum())

    @property
    def total_mass(self) -> float:
        return 2.0 * self.atom_mass + self.continuous_mass

    def density(self, t):
        """Continuous density w(t) on (-1, 1)."""
        t = np.asarray(t, dtype=float)
        f = boundary_F(self.delta, t)
        return (1.0 - t * t) ** self.density_exponent / f.abs_squared / (self.delta * self.Z)


def build_measure(delta: float, n: int = DEFAULT_NODES, quadrature: str = "tanh-sinh") -> SpectralMeasure:
    """Spectral measure of Q for ``delta`` discretised on ``n`` nodes.

    The default double-exponential rule copes with the non-integer powers
    of 1 -+ t inside 1/|F|^2; a Gauss-Jacobi rule is accepted for
    comparison but converges only algebraically here.
    """
    _check_delta(delta)
    rule = _rule((delta - 3.0) / 2.0, n, quadrature)
    inv = _inv_abs_F2(delta, rule)
    Z = float(np.dot(rule.weights, inv))
    return SpectralMeasure(delta, (delta - 1.0) / (2.0 * delta), rule, inv, Z)


def integrate(measure: SpectralMeasure, f) -> float:
    """``int f dmu`` with the atoms at +-1 added exactly.

    ``f`` is called on the node array and on ``+-1``.
    """
    vals = np.asarray(f(measure.nodes), dtype=float)
    ends = np.asarray(f(np.array([1.0, -1.0])), dtype=float)
    if not (np.all(np.isfinite(vals)) and np.all(np.isfinite(ends))):
        raise ValueError("integrand is not finite on the nodes")
    return float(np.dot(measure.weights, vals) + measure.atom_mass * ends.sum())


def gram(measure: SpectralMeasure, max_degree: int) -> np.ndarray:
    """``G[x, y] = int Q_x Q_y dmu`` for x, y <= max_degree."""
    d = measure.delta
    q = eval_family("Q", max_degree, measure.nodes, delta=d)
    G = (q * measure.weights) @ q.T
    # Q_y(1) = 1 and Q_y(-1) = (-1)^y
    sign = (-1.0) ** np.arange(max_degree + 1)
    G += measure.atom_mass * (1.0 + np.outer(sign, sign))
    return G


@dataclass(frozen=True)
class Transition:
    raw: float

    @property
    def probability(self) -> float:
        """Clipped to [0, 1] for display; ``raw`` keeps the quadrature value."""
        return min(1.0, max(0.0, self.raw))


def km_row(measure: SpectralMeasure, x: int, n: int) -> np.ndarray:
    """Raw ``P_x(X_n = y)`` for y = 0..x+n from the spectral formula."""
    if x < 0 or n < 0:
        raise ValueError("x and n must be nonnegative")
    d = measure.delta
    top = x + n
    q = eval_family("Q", top, measure.nodes, delta=d)
    t = measure.nodes
    kern = measure.weights * t**n * q[x]
    cont = q @ kern
    sign = (-1.0) ** np.arange(top + 1)
    atoms = measure.atom_mass * (1.0 + (-1.0) ** n * (-1.0) ** x * sign)
    pi = stationary(d, top).values
    return pi / pi[0] * (cont + atoms)


def km_transition(delta: float, x: int, y: int, n: int, nodes: int = KM_NODES,
                  measure: SpectralMeasure | None = None) -> Transition:
    """``P_x(X_n = y)`` through the spectral representation."""
    m = measure if measure is not None else build_measure(delta, nodes)
    if x < 0 or y < 0 or n < 0:
        raise ValueError("x, y and n must be nonnegative")
    if y > x + n:
        return Transition(0.0)
    # only degrees up to max(x, y) are needed, so n itself is not capped
    q = eval_family("Q", max(x, y), m.nodes, delta=m.delta)
    cont = float(np.dot(m.weights, m.nodes**n * q[x] * q[y]))
    atoms = m.atom_mass * (1.0 + (-1.0) ** (n + x + y))
    pi = stationary(m.delta, y).values
    return Transition(pi[y] / pi[0] * (cont + atoms))


def _normalised_offdiag(G):
    dg = np.sqrt(np.abs(np.diag(G)))
    R = G / np.outer(dg, dg)
    np.fill_diagonal(R, 0.0)
    return float(np.max(np.abs(R))) if R.size > 1 else 0.0


@dataclass(frozen=True)
class DetteReport:
    delta: float
    max_degree: int
    qstar1_offdiag: float
    q1_offdiag: float
    qstar_offdiag: float
    density_ratio_spread: float
    density_ratio_mean: float
    gegenbauer_ratio_spread: float
    gegenbauer_ratio_mean: float
    diag00: tuple

    def worst(self) -> float:
        return max(self.qstar1_offdiag, self.q1_offdiag, self.qstar_offdiag,
                   self.density_ratio_spread, self.gegenbauer_ratio_spread,
                   abs(self.density_ratio_mean - 1.0), abs(self.gegenbauer_ratio_mean - 1.0))


def dette_checks(delta: float, max_degree: int = 20, nodes: int = 256) -> DetteReport:
    """Orthogonality of the associated/dual families and the density links.

    (i)   QStar1 under (1-t^2)^{(d-1)/2} / |F|^2, normalised
    (ii)  Q1 under (1-t^2)^{(d+1)/2}
    (iii) QStar under (1-t^2)^{(d-1)/2}
    (iv)  (1/p_1)(1-t^2) w(t) against the normalised density of (i), pointwise
    (v)   (1/q_1)(1-t^2) times the density of (iii) against that of (ii)

    Ratios in (iv) and (v) compare probability densities, so both should be
    identically one.
    """
    _check_delta(delta)
    d = delta
    # (i): density with the same endpoint structure as the measure itself
    r1 = tanh_sinh((d - 1.0) / 2.0, nodes)
    inv1 = _inv_abs_F2(d, r1)
    z_star1 = float(np.dot(r1.weights, inv1))
    w1 = r1.weights * inv1 / z_star1
    q = eval_family("QStar1", max_degree, r1.nodes, delta=d)
    g1 = (q * w1) @ q.T

    # (ii), (iii): polynomial integrands, Gauss-Jacobi is exact
    r2 = gauss_jacobi((d + 1.0) / 2.0, nodes)
    q = eval_family("Q1", max_degree, r2.nodes, delta=d)
    g2 = (q * r2.weights) @ q.T / r2.weights.sum()
    r3 = gauss_jacobi((d - 1.0) / 2.0, nodes)
    q = eval_family("QStar", max_degree, r3.nodes, delta=d)
    g3 = (q * r3.weights) @ q.T / r3.weights.sum()

    mu = build_measure(d, 2 * DEFAULT_NODES)
    grid = np.linspace(-0.96, 0.96, 17)
    p1, q1 = step_probs(d, 1)
    lhs = (1.0 - grid**2) * mu.density(grid) / p1
    rhs = (1.0 - grid**2) ** ((d - 1.0) / 2.0) / boundary_F(d, grid).abs_squared / z_star1
    ratio = lhs / rhs
    m_star = jacobi_weight_mass((d - 1.0) / 2.0)
    m_one = jacobi_weight_mass((d + 1.0) / 2.0)
    geg = ((1.0 - grid**2) * (1.0 - grid**2) ** ((d - 1.0) / 2.0) / m_star / q1) / (
        (1.0 - grid**2) ** ((d + 1.0) / 2.0) / m_one)
    return DetteReport(
        delta=d,
        max_degree=max_degree,
        qstar1_offdiag=_normalised_offdiag(g1),
        q1_offdiag=_normalised_offdiag(g2),
        qstar_offdiag=_normalised_offdiag(g3),
        density_ratio_spread=float(np.ptp(ratio) / np.mean(ratio)),
        density_ratio_mean=float(np.mean(ratio)),
        gegenbauer_ratio_spread=float(np.ptp(geg) / np.mean(geg)),
        gegenbauer_ratio_mean=float(np.mean(geg)),
        diag00=(float(g1[0, 0]), float(g2[0, 0]), float(g3[0, 0])),
    )
