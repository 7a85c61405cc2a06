"""Maximization of the weighted absolute-Gram functional and its optimality theory."""

from .kkt import (
    HessianCheck,
    KktDiagnostics,
    constraint_gradients,
    kkt_diagnostics,
    lagrangian_hessian,
    projected_hessian_check,
)
from .moments import (
    CurvatureResult,
    GammaCoefficients,
    MajorizationResult,
    R4Scan,
    R4_UPPER,
    curvature_check,
    gamma_tools,
    r4_example_scan,
    r4_admissible,
    r4_example_system,
    r4_value,
    sphere_moment,
    sphere_moment_quadrature,
)
from .problem import EPS_SCHEDULE, PhiProblem, PhiState, maximize_phi, phi_objective, state_from_system

__all__ = [
    "EPS_SCHEDULE",
    "CurvatureResult",
    "GammaCoefficients",
    "HessianCheck",
    "KktDiagnostics",
    "MajorizationResult",
    "PhiProblem",
    "PhiState",
    "R4Scan",
    "R4_UPPER",
    "constraint_gradients",
    "curvature_check",
    "gamma_tools",
    "kkt_diagnostics",
    "lagrangian_hessian",
    "maximize_phi",
    "phi_objective",
    "projected_hessian_check",
    "r4_example_scan",
    "r4_admissible",
    "r4_example_system",
    "r4_value",
    "sphere_moment",
    "sphere_moment_quadrature",
    "state_from_system",
]
