"""Curve shortening flow of convex curves in the metric-affine plane."""

from ._backend import BACKEND
from .config import RunConfig, parse_config, serialize_config
from .contorsion import (
    ContorsionTensor,
    PsiCoefficients,
    Reduction,
    canonical_tensor,
    norm,
    projective,
    psi_coefficients,
    psi_direct,
    psi_eval,
    psi_second_deriv_plus_psi,
    reduce_by_translation,
    reduce_to_canonical,
    semi_symmetric,
)
from .curve import (
    Diagnostics,
    PlaneCurve,
    SupportGrid,
    area,
    curvature,
    diagnostics,
    ellipse_support,
    length,
    reconstruct,
    support_of_points,
)
from .errors import (
    BeyondCollapse,
    HypothesisViolated,
    InsufficientTrace,
    MacsfError,
    NonConvex,
    NonPositiveAxis,
    OmegaNotEstimated,
    ParseError,
    SolverError,
    StepUnderflow,
    ValidationError,
)
from .flow import (
    FlowConfig,
    FlowState,
    FlowTrace,
    StopReason,
    area_identity_residual,
    containment_check,
    exact_circle,
    monitor_bounds,
    omega_bound,
    run,
    step,
)
from .normalized import (
    NormalizedState,
    circle_deviation,
    entropy,
    normalize_trace,
    run_normalized,
    stationarity_residual,
    step_normalized,
)

__version__ = "0.1.0"

__all__ = [
    "RunConfig",
    "parse_config",
    "serialize_config",
    "BACKEND",
    "BeyondCollapse",
    "ContorsionTensor",
    "Diagnostics",
    "FlowConfig",
    "FlowState",
    "FlowTrace",
    "HypothesisViolated",
    "InsufficientTrace",
    "MacsfError",
    "NonConvex",
    "NonPositiveAxis",
    "NormalizedState",
    "OmegaNotEstimated",
    "ParseError",
    "PlaneCurve",
    "PsiCoefficients",
    "Reduction",
    "SolverError",
    "StepUnderflow",
    "StopReason",
    "SupportGrid",
    "ValidationError",
    "area",
    "area_identity_residual",
    "canonical_tensor",
    "circle_deviation",
    "containment_check",
    "curvature",
    "diagnostics",
    "ellipse_support",
    "entropy",
    "exact_circle",
    "length",
    "monitor_bounds",
    "norm",
    "normalize_trace",
    "omega_bound",
    "projective",
    "psi_coefficients",
    "psi_direct",
    "psi_eval",
    "psi_second_deriv_plus_psi",
    "reconstruct",
    "reduce_by_translation",
    "reduce_to_canonical",
    "run",
    "run_normalized",
    "semi_symmetric",
    "stationarity_residual",
    "step",
    "step_normalized",
    "support_of_points",
]
