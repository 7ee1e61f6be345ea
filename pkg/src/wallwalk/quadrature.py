"""Quadrature rules for Jacobi-type weights on [-1, 1].

Two constructions share the :class:`QuadratureRule` container:

* :func:`gauss_jacobi` -- Golub-Welsch nodes for ``(1 - t)^alpha (1 + t)^beta``,
  exact for polynomials of degree ``2n - 1``.
* :func:`tanh_sinh` -- double-exponential rule for ``(1 - t^2)^a``. It is not
  polynomial-exact, but it converges geometrically for integrands carrying
  extra non-integer powers of ``1 -+ t``, which the spectral density does.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .specfun import gamma, log_gamma

__all__ = [
    "QuadratureRule",
    "gauss_jacobi",
    "gauss_jacobi_ab",
    "gauss_legendre",
    "jacobi_weight_mass",
    "tanh_sinh",
]


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights for ``int_{-1}^{1} f(t) (1 - t^2)^a dt``.

    ``one_minus`` and ``one_plus`` hold ``1 - t`` and ``1 + t`` computed
    without cancellation; for double-exponential rules the nodes themselves
    round to +-1 long before these reach zero. Their logarithms are kept as
    well, since for weight exponents near -1 a visible share of the mass
    sits where ``1 - |t|`` underflows.
    """

    nodes: np.ndarray
    weights: np.ndarray
    weight_exponent: float
    one_minus: np.ndarray
    one_plus: np.ndarray
    kind: str = "gauss-jacobi"
    log_one_minus: np.ndarray | None = None
    log_one_plus: np.ndarray | None = None

    def __post_init__(self):
        if self.log_one_minus is None:
            with np.errstate(divide="ignore"):
                object.__setattr__(self, "log_one_minus", np.log(self.one_minus))
                object.__setattr__(self, "log_one_plus", np.log(self.one_plus))

    @property
    def node_count(self) -> int:
        return int(self.nodes.size)

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))


def jacobi_weight_mass(a: float) -> float:
    """``int_{-1}^{1} (1 - t^2)^a dt = sqrt(pi) Gamma(a+1) / Gamma(a+3/2)``."""
    return math.sqrt(math.pi) * math.exp(log_gamma(a + 1.0) - log_gamma(a + 1.5))


def _jacobi_recurrence(n, alpha, beta):
    k = np.arange(n, dtype=float)
    ab = alpha + beta
    with np.errstate(divide="ignore", invalid="ignore"):
        diag = (beta**2 - alpha**2) / ((2 * k + ab) * (2 * k + ab + 2))
    diag[0] = (beta - alpha) / (ab + 2)
    k = np.arange(1, n, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        off2 = (4 * k * (k + alpha) * (k + beta) * (k + ab)
                / ((2 * k + ab) ** 2 * (2 * k + ab + 1) * (2 * k + ab - 1)))
    if n > 1:
        # k = 1 is 0/0 when alpha + beta = -1; use the cancelled form.
        off2[0] = 4 * (1 + alpha) * (1 + beta) / ((2 + ab) ** 2 * (3 + ab))
    return diag, np.sqrt(off2)


def gauss_jacobi_ab(alpha: float, beta: float, n: int) -> QuadratureRule:
    """Gauss rule for the weight ``(1 - t)^alpha (1 + t)^beta``.

    Nodes are the eigenvalues of the Jacobi matrix and the weights the squared
    first eigenvector components (Golub-Welsch), so the zeroth and first few
    moments are reproduced to rounding.
    """
    if not (alpha > -1 and beta > -1):
        raise ValueError("Jacobi exponents must exceed -1")
    if n < 1:
        raise ValueError("need at least one node")
    diag, off = _jacobi_recurrence(n, alpha, beta)
    mu0 = 2.0 ** (alpha + beta + 1) * gamma(alpha + 1) * gamma(beta + 1) / gamma(alpha + beta + 2)
    if n == 1:
        nodes, first = diag.copy(), np.ones(1)
    else:
        try:
            nodes, vecs = eigh_tridiagonal(diag, off)
        except np.linalg.LinAlgError as exc:
            raise ArithmeticError("tridiagonal eigensolver did not converge") from exc
        first = vecs[0]
    weights = mu0 * first * first
    if alpha == beta:
        nodes = 0.5 * (nodes - nodes[::-1])
        weights = 0.5 * (weights + weights[::-1])
    return QuadratureRule(nodes, weights, alpha if alpha == beta else math.nan,
                          1.0 - nodes, 1.0 + nodes)


def gauss_jacobi(a: float, n: int) -> QuadratureRule:
    """n-point Gauss rule for the symmetric weight ``(1 - t^2)^a``, a > -1."""
    return gauss_jacobi_ab(a, a, n)


def gauss_legendre(n: int) -> QuadratureRule:
    return gauss_jacobi_ab(0.0, 0.0, n)


def tanh_sinh(a: float, n: int, tail: float = 40.0) -> QuadratureRule:
    """Double-exponential rule for ``(1 - t^2)^a`` with ``n`` nodes.

    Uses ``t = tanh(pi/2 sinh x)`` on an equispaced x-grid. The grid is cut
    where the weight has decayed by ``exp(-tail)``, which for a near -1
    means going very deep into the endpoints; positions there are carried
    by ``one_minus``/``one_plus`` only.
    """
    if not a > -1:
        raise ValueError("weight exponent must exceed -1")
    if n < 2:
        raise ValueError("need at least two nodes")
    u_max = tail / (2.0 * (a + 1.0))
    x_max = math.asinh(2.0 * u_max / math.pi)
    x = np.linspace(-x_max, x_max, n)
    h = x[1] - x[0]
    u = 0.5 * math.pi * np.sinh(x)
    au = np.abs(u)
    e = np.exp(-2.0 * au)
    # 1 - |t| = 2 e / (1 + e),  1 + |t| = 2 / (1 + e)
    near = 2.0 * e / (1.0 + e)
    far = 2.0 / (1.0 + e)
    one_minus = np.where(u >= 0, near, far)
    one_plus = np.where(u >= 0, far, near)
    log_near = math.log(2.0) - 2.0 * au - np.log1p(e)
    log_far = math.log(2.0) - np.log1p(e)
    nodes = np.tanh(u)
    log_sech = math.log(2.0) - au - np.log1p(e)
    weights = h * 0.5 * math.pi * np.cosh(x) * np.exp(2.0 * (a + 1.0) * log_sech)
    return QuadratureRule(nodes, weights, a, one_minus, one_plus, kind="tanh-sinh",
                          log_one_minus=np.where(u >= 0, log_near, log_far),
                          log_one_plus=np.where(u >= 0, log_far, log_near))
