"""Random-walk polynomial families and Gegenbauer polynomials.

Every family obeys a recursion of the form

    t P_y = A_y P_{y+1} + C_y P_{y-1},   P_{-1} = 0,  P_0 = 1,

and is evaluated by running it forward. Families:

``Q``       the walk itself, A_y = p_y, C_y = q_y (p_0 = 1, q_0 = 0)
``Q1``      first associated, A_y = p_{y+1}, C_y = q_{y+1}
``QStar``   dual walk, A_y = q_y, C_y = p_y for y >= 1, A_0 = 1
``QStar1``  first associated of the dual, A_y = q_{y+1}, C_y = p_{y+1}
``Gegenbauer``  A_y = (y+1)/(2y+2l), C_y = (y-1+2l)/(2y+2l)
``GegenbauerAssoc``  Gegenbauer with the index shifted by one
``JacobiAssoc``  symmetric Jacobi P^{(al,al)}_y(t; c) with index shifted by c
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .specfun import log_gamma

__all__ = [
    "DEGREE_CAP",
    "FAMILIES",
    "OVERFLOW_LIMIT",
    "PolyFamily",
    "eval_all",
    "eval_family",
    "gegenbauer",
    "h_factor",
    "identity_residuals",
    "recursion_residual",
]

DEGREE_CAP = 200
OVERFLOW_LIMIT = 1e300
FAMILIES = ("Q", "Q1", "QStar", "QStar1")


@dataclass(frozen=True)
class PolyFamily:
    kind: str
    param: float
    shift: float = 0.0

    def coefficients(self, max_degree: int):
        """Arrays ``(A_y, C_y)`` for y = 0..max_degree-1."""
        y = np.arange(max(max_degree, 1), dtype=float)
        k, d = self.kind, self.param
        if k == "Q":
            A = np.where(y > 0, y / (2 * y + d), 1.0)
            C = np.where(y > 0, (y + d) / (2 * y + d), 0.0)
        elif k == "Q1":
            A = (y + 1) / (2 * y + 2 + d)
            C = (y + 1 + d) / (2 * y + 2 + d)
        elif k == "QStar":
            A = np.where(y > 0, (y + d) / (2 * y + d), 1.0)
            C = np.where(y > 0, y / (2 * y + d), 0.0)
        elif k == "QStar1":
            A = (y + 1 + d) / (2 * y + 2 + d)
            C = (y + 1) / (2 * y + 2 + d)
        elif k in ("Gegenbauer", "GegenbauerAssoc"):
            lam = d
            m = y + (1.0 if k == "GegenbauerAssoc" else 0.0)
            A = (m + 1) / (2 * m + 2 * lam)
            C = (m - 1 + 2 * lam) / (2 * m + 2 * lam)
        elif k == "JacobiAssoc":
            al, m = d, y + self.shift
            s = 2 * m + 2 * al
            A = 2 * (m + 1) * (m + 2 * al + 1) / ((s + 1) * (s + 2))
            with np.errstate(divide="ignore", invalid="ignore"):
                C = 2 * (m + al) ** 2 / (s * (s + 1))
        else:
            raise ValueError(f"unknown polynomial family {k!r}")
        if k in ("Q1", "QStar1", "Gegenbauer", "GegenbauerAssoc", "JacobiAssoc"):
            C = C.copy()
            C[0] = 0.0
        return A[:max_degree], C[:max_degree]


def _check(max_degree, t, cap):
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    if max_degree > cap:
        raise ValueError(f"max_degree {max_degree} exceeds cap {cap}")
    if np.any(np.abs(np.asarray(t)) > 1.0):
        raise ValueError("polynomials are evaluated on [-1, 1]")


def _run(A, C, max_degree, t):
    t = np.asarray(t, dtype=float)
    out = np.empty((max_degree + 1,) + t.shape)
    out[0] = 1.0
    prev = np.zeros_like(t)
    for y in range(max_degree):
        out[y + 1] = (t * out[y] - C[y] * prev) / A[y]
        prev = out[y]
        if np.any(~(np.abs(out[y + 1]) <= OVERFLOW_LIMIT)):
            raise OverflowError(f"polynomial of degree {y + 1} exceeded {OVERFLOW_LIMIT:g}")
    return out


def eval_family(family, max_degree: int, t, delta=None, cap: int = DEGREE_CAP) -> np.ndarray:
    """Values of degrees 0..max_degree at t; shape ``(max_degree+1,) + t.shape``.

    ``family`` is a :class:`PolyFamily` or one of the names in ``FAMILIES``
    together with ``delta``.
    """
    if not isinstance(family, PolyFamily):
        family = PolyFamily(family, float(delta))
    _check(max_degree, t, cap)
    A, C = family.coefficients(max_degree)
    return _run(A, C, max_degree, t)


def eval_all(delta: float, max_degree: int, t, cap: int = DEGREE_CAP) -> dict:
    """The four walk families at t in one call."""
    _check(max_degree, t, cap)
    return {k: _run(*PolyFamily(k, delta).coefficients(max_degree), max_degree, t)
            for k in FAMILIES}


def gegenbauer(lam: float, max_degree: int, t, cap: int = DEGREE_CAP) -> np.ndarray:
    if not lam > 0:
        raise ValueError("Gegenbauer index must be positive")
    return eval_family(PolyFamily("Gegenbauer", lam), max_degree, t, cap=cap)


def recursion_residual(family, values: np.ndarray, t) -> float:
    """Max relative residual of ``t P_y - A_y P_{y+1} - C_y P_{y-1}``, y >= 1."""
    t = np.asarray(t, dtype=float)
    n = values.shape[0] - 1
    A, C = family.coefficients(n)
    worst = 0.0
    for y in range(1, n):
        lhs = t * values[y]
        rhs = A[y] * values[y + 1] + C[y] * values[y - 1]
        scale = np.abs(lhs) + np.abs(A[y] * values[y + 1]) + np.abs(C[y] * values[y - 1])
        r = np.abs(lhs - rhs) / np.maximum(scale, 1e-300)
        worst = max(worst, float(np.max(r)))
    return worst


def _rel(a, b):
    # relative to the largest magnitude of each degree over the grid
    scale = np.maximum(np.max(np.abs(a), axis=-1, keepdims=True), 1e-300)
    return float(np.max(np.abs(a - b) / scale))


def identity_residuals(delta: float, max_degree: int, t_grid) -> dict:
    """Max relative residuals of the Gegenbauer identifications.

    ``Q1``       Q1_y = G^{d/2+1}_y
    ``QStar``    QStar_y = y! Gamma(d) / Gamma(y+d) G^{d/2}_y
    ``QStar1``   QStar1_y = (y+1)! Gamma(d+1) / Gamma(y+1+d) G^{d/2,1}_y
    ``Wimp``     QStar1_y = (y+1)! Gamma((d+3)/2) / Gamma(y+(d+3)/2) P^{(a,a)}_y(t; 1),
                 a = (d-1)/2
    """
    if not 1.0 < delta < 2.0:
        raise ValueError("identities are checked for delta in (1, 2)")
    t = np.asarray(t_grid, dtype=float)
    d = delta
    fam = eval_all(d, max_degree, t)
    y = np.arange(max_degree + 1, dtype=float)[:, None]
    g_hi = gegenbauer(d / 2 + 1, max_degree, t)
    g_lo = gegenbauer(d / 2, max_degree, t)
    g_assoc = eval_family(PolyFamily("GegenbauerAssoc", d / 2), max_degree, t)
    wimp = eval_family(PolyFamily("JacobiAssoc", (d - 1) / 2, shift=1.0), max_degree, t)
    lg = log_gamma
    s_star = np.exp(lg(y + 1) + log_gamma(d) - lg(y + d))
    s_star1 = np.exp(lg(y + 2) + log_gamma(d + 1) - lg(y + 1 + d))
    s_wimp = np.exp(lg(y + 2) + log_gamma((d + 3) / 2) - lg(y + (d + 3) / 2))
    return {
        "Q1": _rel(fam["Q1"], g_hi),
        "QStar": _rel(fam["QStar"], s_star * g_lo),
        "QStar1": _rel(fam["QStar1"], s_star1 * g_assoc),
        "Wimp": _rel(fam["QStar1"], s_wimp * wimp),
    }


def h_factor(delta: float, y) -> np.ndarray:
    """``Gamma(d+1) Gamma(y) / Gamma(y+d+1)`` for y >= 1."""
    ya = np.asarray(y, dtype=float)
    return np.exp(log_gamma(delta + 1.0) + np.asarray(log_gamma(ya)) - np.asarray(log_gamma(ya + delta + 1.0)))
