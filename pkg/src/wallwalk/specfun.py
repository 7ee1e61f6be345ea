"""Real special functions: log-gamma, gamma, Gauss 2F1 on [0, 1] and the
boundary function F(t) entering the spectral density of the walk.

Everything here is self-contained (numpy only) and accepts scalars or
arrays for the real argument.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BoundaryFunctionValue",
    "Hyp2F1Params",
    "boundary_F",
    "boundary_K",
    "gamma",
    "hyp2f1",
    "log_gamma",
    "log_gamma_ratio",
    "rgamma",
]

# Lanczos approximation, g = 671/128, 14 terms.
_LANCZOS_G = 671.0 / 128.0
_LANCZOS_C0 = 0.999999999999997092
_LANCZOS_C = np.array([
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
])
_SQRT_2PI = 2.5066282746310005

MAX_TERMS = 10_000
SERIES_RTOL = 1e-16
_CONSECUTIVE = 3


def _lanczos_sum(x):
    x = np.asarray(x, dtype=float)
    j = np.arange(1, _LANCZOS_C.size + 1, dtype=float)
    return _LANCZOS_C0 + np.sum(_LANCZOS_C / (x[..., None] + j), axis=-1)


def _scalar_out(value, like):
    return float(value) if np.ndim(like) == 0 else value


def log_gamma(x):
    """Natural log of the gamma function for x > 0.

    Raises ``ValueError`` if any argument is not strictly positive.
    """
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa > 0)):
        raise ValueError("log_gamma requires x > 0")
    # Lanczos loses relative accuracy for tiny x; shift by one there.
    small = xa < 0.5
    xs = np.where(small, xa + 1.0, xa)
    tmp = xs + _LANCZOS_G
    out = (xs + 0.5) * np.log(tmp) - tmp + np.log(_SQRT_2PI * _lanczos_sum(xs) / xs)
    out = np.where(small, out - np.log(xa), out)
    return _scalar_out(out, x)


def log_gamma_ratio(x, a):
    """Return ``log Gamma(x + a) - log Gamma(x)`` without cancellation.

    Needed for the stationary weights at large sites, where both log-gammas
    are ~1e7 but their difference is O(log x).
    """
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa > 0)) or np.any(~(xa + a > 0)):
        raise ValueError("log_gamma_ratio requires x > 0 and x + a > 0")
    big = xa >= 8.0
    xb = np.where(big, xa, 8.0)
    base = xb + _LANCZOS_G
    direct = (
        (xb + 0.5) * np.log1p(a / base)
        + a * np.log(base + a)
        - a
        + np.log(_lanczos_sum(xb + a) / _lanczos_sum(xb))
        + np.log(xb / (xb + a))
    )
    if np.all(big):
        return _scalar_out(direct, x)
    xs = np.where(big, 1.0, xa)
    naive = np.asarray(log_gamma(xs + a)) - np.asarray(log_gamma(xs))
    return _scalar_out(np.where(big, direct, naive), x)


def _is_pole(x):
    return x <= 0 and x == math.floor(x)


def gamma(x):
    """Gamma function on the real line, reflection formula for x < 1/2.

    Raises ``ValueError`` at the poles 0, -1, -2, ...
    """
    xa = np.asarray(x, dtype=float)
    if np.any((xa <= 0) & (xa == np.floor(xa))):
        raise ValueError("gamma has a pole at nonpositive integers")
    neg = xa < 0.5
    pos_arg = np.where(neg, 1.0 - xa, xa)
    g = np.exp(np.asarray(log_gamma(pos_arg)))
    with np.errstate(divide="ignore", invalid="ignore"):
        refl = math.pi / (np.sin(math.pi * xa) * g)
    return _scalar_out(np.where(neg, refl, g), x)


def rgamma(x: float) -> float:
    """1/Gamma(x), zero at the poles."""
    if _is_pole(x):
        return 0.0
    return 1.0 / gamma(x)


@dataclass(frozen=True)
class Hyp2F1Params:
    a: float
    b: float
    c: float
    x: float

    def __post_init__(self):
        if _is_pole(self.c):
            raise ValueError("c must not be a nonpositive integer")
        if not 0.0 <= self.x <= 1.0:
            raise ValueError("x must lie in [0, 1]")
        if self.x == 1.0 and not self.c - self.a - self.b > 0:
            raise ValueError("2F1 at x = 1 needs c - a - b > 0")


def _series(a, b, c, x):
    """Gauss series, vectorised over x, with the deterministic stop rule."""
    x = np.asarray(x, dtype=float)
    total = np.ones_like(x)
    term = np.ones_like(x)
    quiet = np.zeros(x.shape, dtype=int)
    for k in range(MAX_TERMS):
        term = term * ((a + k) * (b + k) / ((c + k) * (k + 1.0))) * x
        total = total + term
        small = np.abs(term) <= SERIES_RTOL * np.abs(total)
        quiet = np.where(small, quiet + 1, 0)
        if np.all(quiet >= _CONSECUTIVE):
            return total
    raise ArithmeticError(f"2F1 series did not converge in {MAX_TERMS} terms")


def hyp2f1(a, b=None, c=None, x=None, *, one_minus_x=None, log_one_minus_x=None):
    """Gauss hypergeometric function 2F1(a, b; c; x) for x in [0, 1].

    Accepts either a :class:`Hyp2F1Params` or the four numbers. ``x`` may be
    an array. Near x = 1 pass ``one_minus_x`` as well; it is used in place
    of ``1 - x`` so that the (1 - x)**(c - a - b) branch keeps full relative
    accuracy when 1 - x is below machine epsilon. ``log_one_minus_x``, if
    given, is used for that power instead, which also covers 1 - x below
    the smallest double.

    For x <= 1/2 the series is summed directly, otherwise the argument is
    mapped to 1 - x by the standard connection formula (requires c - a - b
    non-integer).
    """
    if isinstance(a, Hyp2F1Params):
        a, b, c, x = a.a, a.b, a.c, a.x
    else:
        Hyp2F1Params(a, b, c, float(np.min(x)) if np.size(x) else 0.0)
        if np.size(x):
            Hyp2F1Params(a, b, c, float(np.max(x)))
    xa = np.asarray(x, dtype=float)
    omx = np.asarray(1.0 - xa if one_minus_x is None else one_minus_x, dtype=float)
    out = np.empty(xa.shape)
    lo = xa <= 0.5
    if np.any(lo):
        out[lo] = _series(a, b, c, xa[lo])
    if np.any(~lo):
        s = c - a - b
        if s == math.floor(s):
            raise ValueError("connection formula needs c - a - b non-integer")
        y = omx[~lo]
        coef1 = gamma(c) * gamma(s) * rgamma(c - a) * rgamma(c - b)
        coef2 = gamma(c) * gamma(-s) * rgamma(a) * rgamma(b)
        part = coef1 * _series(a, b, 1.0 - s, y)
        if coef2 != 0.0:
            if log_one_minus_x is None:
                ys = y**s
            else:
                ys = np.exp(s * np.broadcast_to(np.asarray(log_one_minus_x, dtype=float), xa.shape)[~lo])
            part = part + coef2 * ys * _series(c - a, c - b, 1.0 + s, y)
        out[~lo] = part
    return _scalar_out(out, x)


@dataclass(frozen=True)
class BoundaryFunctionValue:
    re: np.ndarray | float
    im: np.ndarray | float

    @property
    def abs_squared(self):
        return self.re * self.re + self.im * self.im

    def __complex__(self):
        return complex(self.re, self.im)


def _check_delta(delta):
    if not 1.0 < delta < 2.0:
        raise ValueError(f"delta must lie in (1, 2), got {delta}")


def boundary_K(delta: float) -> float:
    """Constant Gamma(d) Gamma((1-d)/2) / Gamma((d-1)/2); negative on (1, 2)."""
    _check_delta(delta)
    return gamma(delta) * gamma((1.0 - delta) / 2.0) / gamma((delta - 1.0) / 2.0)


def boundary_F(delta, t, *, one_minus_t=None, one_plus_t=None,
               log_one_minus_t=None, log_one_plus_t=None) -> BoundaryFunctionValue:
    """Boundary function F(t) on [-1, 1] for delta in (1, 2).

    ``F(t) = 2F1(1, 1-d; (3-d)/2; (1+t)/2) + K e^{i pi (d-1)/2} ((1-t^2)/4)^{(d-1)/2}``

    The optional complements ``1 - t`` and ``1 + t`` are used verbatim
    when given, for nodes that sit closer to +-1 than double precision can
    resolve in ``t`` itself; their logarithms, when given, carry the
    non-integer powers for nodes where the complements underflow.
    """
    _check_delta(delta)
    ta = np.asarray(t, dtype=float)
    if np.any(np.abs(ta) > 1.0):
        raise ValueError("boundary_F requires |t| <= 1")
    omt = np.asarray(1.0 - ta if one_minus_t is None else one_minus_t, dtype=float)
    opt = np.asarray(1.0 + ta if one_plus_t is None else one_plus_t, dtype=float)
    expo = (delta - 1.0) / 2.0
    phase = math.pi * expo
    k = boundary_K(delta)
    log_omx = None
    if log_one_minus_t is not None and log_one_plus_t is not None:
        log_omx = np.asarray(log_one_minus_t, dtype=float) - math.log(2.0)
        radial = np.exp(expo * (log_omx + np.asarray(log_one_plus_t, dtype=float) - math.log(2.0)))
    else:
        radial = (omt * opt / 4.0) ** expo
    head = np.asarray(hyp2f1(1.0, 1.0 - delta, (3.0 - delta) / 2.0, opt / 2.0,
                             one_minus_x=omt / 2.0, log_one_minus_x=log_omx))
    re = head + k * math.cos(phase) * radial
    im = k * math.sin(phase) * radial
    if np.ndim(t) == 0:
        return BoundaryFunctionValue(float(re), float(im))
    return BoundaryFunctionValue(re, im)
