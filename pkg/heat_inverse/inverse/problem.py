from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Tuple

import numpy as np

from heat_inverse.pchip import Partition
from heat_inverse.shared.config import (
    C_LOWER,
    C_UPPER,
    DT_SAFETY,
    FTOL,
    GTOL,
    JOBS,
    K_LOWER,
    K_UPPER,
    MAX_ITERATIONS,
    MAX_TIME_STEPS,
    SPACE_NODES,
    THICKNESS,
    XTOL,
)
from heat_inverse.shared.errors import DataError, SolverError
from heat_inverse.solver import Experiment, Grid, Material, max_stable_dt


@dataclass(frozen=True)
class GridPolicy:
    """
    How solver grids are chosen per experiment.
    - auto_dt: dt = dt_safety * stability bound, re-derived for every candidate
    - otherwise the fixed dt is used as given (and checked by the solver)
    """
    L: float = THICKNESS
    l: int = SPACE_NODES
    auto_dt: bool = True
    dt: Optional[float] = None
    dt_safety: float = DT_SAFETY
    max_steps: int = MAX_TIME_STEPS

    def __post_init__(self) -> None:
        if not self.auto_dt and (self.dt is None or not self.dt > 0.0):
            raise DataError("a fixed grid policy needs a positive dt")
        if not 0.0 < self.dt_safety <= 1.0:
            raise DataError(f"dt_safety must lie in (0, 1], got {self.dt_safety}")

    @property
    def dz(self) -> float:
        return self.L / (self.l - 1)

    def grid_for(self, exp: Experiment, material: Material) -> Grid:
        dt = self.dt_safety * max_stable_dt(material, self.dz) if self.auto_dt else self.dt
        if exp.duration / dt > self.max_steps:
            raise SolverError(f"{exp.name}: dt={dt!r} s needs more than {self.max_steps} time steps")
        return Grid.from_dt(exp.duration, self.L, self.l, dt)


@dataclass(frozen=True)
class FitOptions:
    """Stopping rules and execution options of the optimizer."""
    ftol: float = FTOL
    xtol: float = XTOL
    gtol: float = GTOL
    max_iterations: int = MAX_ITERATIONS
    pin_scale: bool = False
    pin_index: Optional[int] = None   # default: C at u_min
    jobs: int = JOBS
    progress: bool = False

    def __post_init__(self) -> None:
        if self.max_iterations < 0:
            raise DataError(f"max_iterations must be non-negative, got {self.max_iterations}")
        if self.jobs < 1:
            raise DataError(f"jobs must be at least 1, got {self.jobs}")
        for name in ("ftol", "xtol", "gtol"):
            if getattr(self, name) < 0.0:
                raise DataError(f"{name} must be non-negative")


def default_bounds(partition: Partition) -> Tuple[np.ndarray, np.ndarray]:
    n = partition.n
    lower = np.concatenate([np.full(n, K_LOWER), np.full(n, C_LOWER)])
    upper = np.concatenate([np.full(n, K_UPPER), np.full(n, C_UPPER)])
    return lower, upper


@dataclass(frozen=True, eq=False)
class FitProblem:
    """
    Multi-experiment least-squares problem
    J_M(p) = sum_i w_i * ||Q F_i(p) - u_core_i||^2.
    """
    experiments: Tuple[Experiment, ...]
    partition: Partition
    policy: GridPolicy = field(default_factory=GridPolicy)
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None
    options: FitOptions = field(default_factory=FitOptions)
    weights: Optional[Tuple[float, ...]] = None
    depth: Optional[float] = None

    def __post_init__(self) -> None:
        experiments = tuple(self.experiments)
        if not experiments:
            raise DataError("a fit needs at least one experiment")
        for exp in experiments:
            if not exp.has_core:
                raise DataError(f"{exp.name}: no core series to fit against")
        object.__setattr__(self, "experiments", experiments)

        lower, upper = default_bounds(self.partition)
        lower = lower if self.lower is None else np.array(self.lower, dtype=float)
        upper = upper if self.upper is None else np.array(self.upper, dtype=float)
        size = 2 * self.partition.n
        if lower.shape != (size,) or upper.shape != (size,):
            raise DataError(f"bounds must have {size} entries")
        if np.any(lower <= 0.0) or np.any(lower >= upper):
            raise DataError("bounds must satisfy 0 < lower < upper componentwise")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

        if self.weights is not None:
            weights = tuple(float(w) for w in self.weights)
            if len(weights) != len(experiments) or any(w <= 0.0 for w in weights):
                raise DataError("weights need one positive value per experiment")
            object.__setattr__(self, "weights", weights)

        depth = self.policy.L / 2.0 if self.depth is None else float(self.depth)
        if not 0.0 < depth < self.policy.L:
            raise DataError(f"observation depth {depth} outside (0, {self.policy.L})")
        object.__setattr__(self, "depth", depth)

        pinned = self.pinned_index()
        if pinned is not None and not 0 <= pinned < size:
            raise DataError(f"pin index {pinned} outside [0, {size - 1}]")

    @property
    def M(self) -> int:
        return len(self.experiments)

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(exp.u_core.size for exp in self.experiments)

    @property
    def total_size(self) -> int:
        return int(sum(self.sizes))

    def weight(self, index: int) -> float:
        return 1.0 if self.weights is None else self.weights[index]

    def pinned_index(self) -> Optional[int]:
        if not self.options.pin_scale:
            return None
        return self.partition.n if self.options.pin_index is None else self.options.pin_index

    def free_indices(self) -> np.ndarray:
        pinned = self.pinned_index()
        return np.array([j for j in range(2 * self.partition.n) if j != pinned], dtype=int)

    def with_options(self, **changes) -> "FitProblem":
        return replace(self, options=replace(self.options, **changes))
