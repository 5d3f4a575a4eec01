"""
Cooling experiments: two Dirichlet boundary series, an initial profile and the core series.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from heat_inverse.shared.config import CORNER_TOLERANCE
from heat_inverse.shared.errors import DataError
from heat_inverse.solver.grid import Grid

logger = logging.getLogger(__name__)

# Stamps may miss the grid span by this much (s / m) before it counts as a gap
COVERAGE_SLACK: float = 1e-9


def _as_series(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DataError(f"{name} must be a non-empty 1D series")
    if not np.all(np.isfinite(arr)):
        raise DataError(f"{name} contains non-finite values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Experiment:
    """
    One cooling run.
    - times: stamps of the boundary series u_bottom (z = 0) and u_top (z = L)
    - depths/u_init: initial profile over z at t = 0
    - core_times/u_core: measured core series (optional for pure forward runs)
    """
    times: np.ndarray
    u_bottom: np.ndarray
    u_top: np.ndarray
    depths: np.ndarray
    u_init: np.ndarray
    core_times: Optional[np.ndarray] = None
    u_core: Optional[np.ndarray] = None
    name: str = field(default="experiment")

    def __post_init__(self) -> None:
        for key in ("times", "u_bottom", "u_top", "depths", "u_init"):
            object.__setattr__(self, key, _as_series(getattr(self, key), key))
        if not (self.times.size == self.u_bottom.size == self.u_top.size):
            raise DataError(f"{self.name}: boundary series and time stamps differ in length")
        if self.depths.size != self.u_init.size:
            raise DataError(f"{self.name}: initial profile depths and values differ in length")
        if np.any(np.diff(self.times) <= 0.0):
            raise DataError(f"{self.name}: time stamps must be strictly increasing")
        if np.any(np.diff(self.depths) <= 0.0):
            raise DataError(f"{self.name}: profile depths must be strictly increasing")

        if self.u_core is not None:
            core = _as_series(self.u_core, "u_core")
            stamps = self.times if self.core_times is None else _as_series(self.core_times, "core_times")
            if stamps.size != core.size:
                raise DataError(f"{self.name}: core series and its stamps differ in length")
            if np.any(np.diff(stamps) < 0.0):
                raise DataError(f"{self.name}: core stamps must be non-decreasing")
            object.__setattr__(self, "u_core", core)
            object.__setattr__(self, "core_times", stamps)
        elif self.core_times is not None:
            object.__setattr__(self, "core_times", _as_series(self.core_times, "core_times"))

    @property
    def duration(self) -> float:
        return float(self.times[-1])

    @property
    def has_core(self) -> bool:
        return self.u_core is not None

    def with_core(self, u_core: np.ndarray, core_times: Optional[np.ndarray] = None) -> "Experiment":
        return replace(self, u_core=u_core, core_times=self.times if core_times is None else core_times)

    def corner_mismatch(self) -> float:
        """Largest |u_init - boundary| at the two corners at t = 0."""
        return max(abs(self.u_init[0] - self.u_bottom[0]), abs(self.u_init[-1] - self.u_top[0]))

    def check_corners(self, tolerance: float = CORNER_TOLERANCE) -> bool:
        """Log a warning when the initial profile and the boundary data disagree at t = 0."""
        mismatch = self.corner_mismatch()
        if mismatch > tolerance:
            logger.warning("%s: initial profile and boundary data differ by %.3f degC at t = 0 (tolerance %.3f)",
                           self.name, mismatch, tolerance)
            return False
        return True


def linear_profile(u_bottom: float, u_top: float, L: float) -> tuple:
    """Two-point initial profile joining the boundary values at t = 0."""
    return np.array([0.0, L]), np.array([u_bottom, u_top], dtype=float)


def resample_experiment(exp: Experiment, grid: Grid) -> Experiment:
    """
    Align an experiment with the solver grid.
    - boundary series linearly interpolated onto the grid times
    - initial profile linearly interpolated onto the grid depths
    - core series stays on its native stamps
    """
    if exp.times[0] > COVERAGE_SLACK or exp.times[-1] < grid.T - COVERAGE_SLACK:
        raise DataError(f"{exp.name}: measured span [{exp.times[0]}, {exp.times[-1]}] s does not cover grid "
                        f"span [0, {grid.T}] s")
    if exp.depths[0] > COVERAGE_SLACK or exp.depths[-1] < grid.L - COVERAGE_SLACK:
        raise DataError(f"{exp.name}: initial profile span [{exp.depths[0]}, {exp.depths[-1]}] m does not "
                        f"cover [0, {grid.L}] m")

    times, depths = grid.times, grid.depths

    if np.array_equal(exp.times, times):
        u_bottom, u_top = exp.u_bottom, exp.u_top
    else:
        u_bottom = np.interp(times, exp.times, exp.u_bottom)
        u_top = np.interp(times, exp.times, exp.u_top)

    if np.array_equal(exp.depths, depths):
        u_init = exp.u_init
    else:
        u_init = np.interp(depths, exp.depths, exp.u_init)

    return replace(exp, times=times, u_bottom=u_bottom, u_top=u_top, depths=depths, u_init=u_init)
