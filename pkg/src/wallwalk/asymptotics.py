"""The amplitude K_d and numerical checks of the power laws

    g_e(z)   ~ Gamma(2 - d/2) K_d (1 - z)^{d/2 - 2}     as z -> 1,
    E_0 X_n  ~ K_d n^{1 - d/2}                          as n -> infinity,

with the stated relative corrections of order (1-z)^e and n^{-e},
e = (1 - d/2)(d - 1). The reports measure ratios and fitted exponents;
they never assume them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import curve_fit

from .genfun import generating_functions
from .measure import DEFAULT_NODES, build_measure
from .specfun import gamma
from .walk import DP_CAP, WalkParams, mean_trajectory

__all__ = [
    "AsymptoticReport",
    "KDelta",
    "TauberianFit",
    "check_gen_asymptotics",
    "check_moment_asymptotics",
    "correction_exponent",
    "k_delta",
    "k_delta_value",
    "tauberian_fit",
]

CONVERGENCE_TOL = 1e-8


def correction_exponent(delta: float) -> float:
    """Stated exponent ``(1 - d/2)(d - 1)`` of the relative correction."""
    return (1.0 - delta / 2.0) * (delta - 1.0)


def _prefactor(delta):
    return 2.0 ** ((delta - 5.0) / 2.0) * math.sqrt(math.pi / 2.0) * gamma((delta - 1.0) / 2.0) / (1.0 - delta / 2.0)


def k_delta_value(delta: float, nodes: int = DEFAULT_NODES) -> float:
    """K_d on a single rule, without the convergence check."""
    WalkParams(delta).require_subcritical()
    return _prefactor(delta) / build_measure(delta, nodes).Z


@dataclass(frozen=True)
class KDelta:
    delta: float
    value: float
    nodes: int
    converged: bool
    change: float


def k_delta(delta: float, nodes: int = DEFAULT_NODES) -> KDelta:
    """K_d = 2^{(d-5)/2} sqrt(pi/2) Gamma((d-1)/2) / (1 - d/2) / Z.

    Z is the unnormalised integral of (1-t^2)^{(d-3)/2} / |F|^2, the same
    constant that normalises the spectral measure. ``converged`` records
    whether doubling the node count moves the value by at most 1e-8
    relative.
    """
    value = k_delta_value(delta, nodes)
    finer = k_delta_value(delta, 2 * nodes)
    change = abs(finer - value) / abs(finer)
    return KDelta(delta, value, nodes, bool(change <= CONVERGENCE_TOL), change)


def _slope(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    return float(coef[0])


@dataclass(frozen=True)
class AsymptoticReport:
    """Samples of one side of the power law together with fitted exponents.

    ``samples`` holds ``(x, value, ratio)`` with x the step count n (moment
    side) or z (generating-function side). ``fitted_exponent`` is the
    log-log slope of the values on the moment side and the slope of
    ``log|r - 1|`` against ``log(1 - z)`` on the z side; it is NaN when
    fewer than two samples are available. ``envelope_constant`` is the
    smallest C with ``|r - 1| <= C s^e`` over the samples, where s is
    1/n or 1 - z and e the stated correction exponent.
    """

    side: str
    delta: float
    k_delta: float
    fitted_exponent: float
    envelope_constant: float
    samples: list = field(default_factory=list)
    correction_slope: float = math.nan

    @property
    def ratios(self) -> np.ndarray:
        return np.array([s[2] for s in self.samples])

    @property
    def max_deviation(self) -> float:
        return float(np.max(np.abs(self.ratios - 1.0)))


def check_gen_asymptotics(delta: float, z_grid, nodes: int = 1024) -> AsymptoticReport:
    """Ratios ``g_e(z) / (Gamma(2 - d/2) K_d (1 - z)^{d/2 - 2})`` over ``z_grid``."""
    WalkParams(delta).require_subcritical()
    z = np.asarray(z_grid, dtype=float)
    if z.size == 0 or np.any(z < 0.9) or np.any(z > 0.999):
        raise ValueError("z_grid must be a nonempty subset of [0.9, 0.999]")
    z = np.sort(z)
    k = k_delta_value(delta)
    measure = build_measure(delta, nodes)
    amp = gamma(2.0 - delta / 2.0) * k
    samples = []
    for zz in z:
        ge = generating_functions(delta, float(zz), measure=measure).g_e
        samples.append((float(zz), ge, ge / (amp * (1.0 - zz) ** (delta / 2.0 - 2.0))))
    r = np.array([s[2] for s in samples])
    dev = np.abs(r - 1.0)
    e = correction_exponent(delta)
    env = float(np.max(dev / (1.0 - z) ** e))
    slope = _slope(np.log(1.0 - z), np.log(dev)) if z.size >= 2 and np.all(dev > 0) else math.nan
    return AsymptoticReport("z", delta, k, slope, env, samples, slope)


def check_moment_asymptotics(delta: float, n_list, cap: int = DP_CAP) -> AsymptoticReport:
    """Ratios ``E_0 X_n / (K_d n^{1 - d/2})`` over even ``n_list``.

    ``fitted_exponent`` is the least-squares slope of log E_0 X_n against
    log n over the top half of ``n_list``; ``correction_slope`` is the
    slope of ``log|r - 1|`` against ``log n`` over the same half.
    """
    WalkParams(delta).require_subcritical()
    n = np.asarray(sorted(int(v) for v in n_list))
    if n.size == 0 or np.any(n <= 0) or np.any(n % 2):
        raise ValueError("n_list must hold positive even step counts")
    if n[-1] > cap:
        raise ValueError(f"largest n {n[-1]} exceeds the DP cap {cap}")
    k = k_delta_value(delta)
    means = mean_trajectory(delta, 0, int(n[-1]), cap)[n]
    ratio = means / (k * n ** (1.0 - delta / 2.0))
    samples = [(int(a), float(b), float(c)) for a, b, c in zip(n, means, ratio)]
    dev = np.abs(ratio - 1.0)
    env = float(np.max(dev * n ** correction_exponent(delta)))
    if n.size < 2:
        return AsymptoticReport("n", delta, k, math.nan, env, samples)
    top = slice(n.size // 2, None)
    slope = _slope(np.log(n[top]), np.log(means[top]))
    corr = _slope(np.log(n[top]), np.log(dev[top])) if np.all(dev[top] > 0) else math.nan
    return AsymptoticReport("n", delta, k, slope, env, samples, corr)


@dataclass(frozen=True)
class TauberianFit:
    """Fit of ``g_e(z) (1 - z)^{2 - d/2} = C (1 + b1 s^g1 + b2 s^g2)``, s = 1 - z."""

    delta: float
    constant: float
    target: float
    amplitudes: tuple
    exponents: tuple

    @property
    def relative_error(self) -> float:
        return abs(self.constant / self.target - 1.0)


def tauberian_fit(delta: float, z_grid, nodes: int = 1024) -> TauberianFit:
    """Recover the z-side constant by extrapolating to z = 1.

    Two correction powers with free amplitudes and exponents are fitted, so
    the recovered constant is tested against ``Gamma(2 - d/2) K_d`` without
    assuming the correction law.
    """
    rep = check_gen_asymptotics(delta, z_grid, nodes)
    z = np.array([s[0] for s in rep.samples])
    if z.size < 6:
        raise ValueError("the fit has five parameters and needs at least six points")
    s = 1.0 - z
    y = np.array([v[1] for v in rep.samples]) * s ** (2.0 - delta / 2.0)

    def model(s, c, b1, b2, g1, g2):
        return c * (1.0 + b1 * s**g1 + b2 * s**g2)

    e = correction_exponent(delta)
    p0 = (y[-1], -1.0, 0.0, e, 2.0 * e)
    bounds = ([0.0, -np.inf, -np.inf, 0.01, 0.01], [np.inf, np.inf, np.inf, 3.0, 3.0])
    try:
        (c, b1, b2, g1, g2), _ = curve_fit(model, s, y, p0=p0, bounds=bounds, maxfev=50000)
    except RuntimeError as exc:
        raise ArithmeticError(f"Tauberian fit did not converge at delta={delta}") from exc
    target = gamma(2.0 - delta / 2.0) * rep.k_delta
    return TauberianFit(delta, float(c), float(target), (float(b1), float(b2)), (float(g1), float(g2)))
