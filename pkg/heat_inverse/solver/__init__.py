from .grid import Grid
from .params import ParamVector
from .experiment import Experiment, resample_experiment, linear_profile
from .forward_solver import (
    Material,
    TemperatureField,
    harmonic_mean,
    max_diffusivity,
    max_stable_dt,
    check_stability,
    solve_forward,
    solve_forward_batch,
)

__all__ = [
    "Grid",
    "ParamVector",
    "Experiment",
    "resample_experiment",
    "linear_profile",
    "Material",
    "TemperatureField",
    "harmonic_mean",
    "max_diffusivity",
    "max_stable_dt",
    "check_stability",
    "solve_forward",
    "solve_forward_batch",
]
