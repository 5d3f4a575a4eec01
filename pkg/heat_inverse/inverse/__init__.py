from .problem import FitProblem, FitOptions, GridPolicy, default_bounds
from .jacobian import residuals, objective, jacobian_fd, experiment_grids, fd_steps
from .optimizer import TerminationReason, IterationRecord, projected_levenberg_marquardt
from .inverse_fit import FitResult, fit, diffusivity, lambda_error, scaling_diagnostics

__all__ = [
    "FitProblem",
    "FitOptions",
    "GridPolicy",
    "default_bounds",
    "residuals",
    "objective",
    "jacobian_fd",
    "experiment_grids",
    "fd_steps",
    "TerminationReason",
    "IterationRecord",
    "projected_levenberg_marquardt",
    "FitResult",
    "fit",
    "diffusivity",
    "lambda_error",
    "scaling_diagnostics",
]
