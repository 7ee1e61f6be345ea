"""Wall-attracted random walk: exact dynamics, spectral representation,
generating functions and the large-time power law of the mean position."""
from .asymptotics import (AsymptoticReport, check_gen_asymptotics, check_moment_asymptotics,
                          k_delta, tauberian_fit)
from .genfun import (GenFunPoint, PhiValue, generating_functions, generating_functions_dp, ode_residual,
                     phi_closed, phi_series)
from .measure import SpectralMeasure, build_measure, dette_checks, gram, integrate, km_transition
from .polys import PolyFamily, eval_family, gegenbauer, identity_residuals
from .quadrature import QuadratureRule, gauss_jacobi, tanh_sinh
from .specfun import boundary_F, boundary_K, gamma, hyp2f1, log_gamma
from .walk import (Distribution, StationaryMeasure, WalkParams, evolve, expected_position,
                   mean_trajectory, simulate, stationary, step_probs)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticReport",
    "Distribution",
    "GenFunPoint",
    "PhiValue",
    "PolyFamily",
    "QuadratureRule",
    "SpectralMeasure",
    "StationaryMeasure",
    "WalkParams",
    "boundary_F",
    "boundary_K",
    "build_measure",
    "check_gen_asymptotics",
    "check_moment_asymptotics",
    "dette_checks",
    "eval_family",
    "evolve",
    "expected_position",
    "gamma",
    "gauss_jacobi",
    "gegenbauer",
    "generating_functions",
    "generating_functions_dp",
    "gram",
    "hyp2f1",
    "identity_residuals",
    "integrate",
    "k_delta",
    "km_transition",
    "log_gamma",
    "mean_trajectory",
    "ode_residual",
    "phi_closed",
    "phi_series",
    "simulate",
    "stationary",
    "step_probs",
    "tanh_sinh",
    "tauberian_fit",
]
