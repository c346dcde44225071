"""Curve shortening flow of graphs on rotationally symmetric surfaces."""

from ._kernels import BACKEND_NAME
from .curve import (CurveFields, GraphCurve, IdentityResiduals, arc_length, curve_fields,
                    graph_curvature, static_identity_residuals)
from .errors import (BlowupError, CsfrotError, DtUnderflowError, FlowDomainError, FlowError,
                     InadmissibleProfileError, InputError, MonitorDomainError)
from .flow import (DiagnosticsRow, FlowConfig, FlowState, GradientMonitor, InitialCurveSpec, Mode,
                   RunResult, cfl_dt, circle_flow, gradient_monitor, initial_state, rhs_graph, run,
                   step_rk4)
from .geometry import SurfaceScalars, g_prime, kcal_prime, surface_scalars
from .profile import (ProfileEvaluation, ProfileSpec, ValidityWindow, evaluate, power_btilde,
                      setting_rs_margin, validity_window)

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME", "CurveFields", "GraphCurve", "IdentityResiduals", "arc_length",
    "curve_fields", "graph_curvature", "static_identity_residuals", "BlowupError",
    "CsfrotError", "DtUnderflowError", "FlowDomainError", "FlowError",
    "InadmissibleProfileError", "InputError", "MonitorDomainError", "DiagnosticsRow",
    "FlowConfig", "FlowState", "GradientMonitor", "InitialCurveSpec", "Mode", "RunResult",
    "cfl_dt", "circle_flow", "gradient_monitor", "initial_state", "rhs_graph", "run",
    "step_rk4", "SurfaceScalars", "g_prime", "kcal_prime", "surface_scalars",
    "ProfileEvaluation", "ProfileSpec", "ValidityWindow", "evaluate", "power_btilde",
    "setting_rs_margin", "validity_window",
]
