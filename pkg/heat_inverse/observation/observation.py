"""
Observation operator: picks the core-depth temperature history out of a temperature field.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from heat_inverse.shared.errors import DataError
from heat_inverse.solver import Grid, TemperatureField

# Fractional grid positions this close to an integer count as on the node
SNAP_TOLERANCE: float = 1e-9


@dataclass(frozen=True, eq=False)
class ObservationSpec:
    """Where (depth, m) and when (stamps, s) the core thermocouple is read."""
    depth: float
    stamps: np.ndarray

    def __post_init__(self) -> None:
        stamps = np.array(self.stamps, dtype=float)
        if stamps.ndim != 1 or stamps.size == 0:
            raise DataError("observation stamps must be a non-empty 1D series")
        if np.any(np.diff(stamps) < 0.0):
            raise DataError("observation stamps must be non-decreasing")
        stamps.setflags(write=False)
        object.__setattr__(self, "stamps", stamps)

    @classmethod
    def core(cls, L: float, stamps: np.ndarray, depth: Optional[float] = None) -> "ObservationSpec":
        """Default observation at z = L/2."""
        return cls(L / 2.0 if depth is None else depth, stamps)


def _fractional_index(position: np.ndarray, nodes: int) -> tuple:
    """Lower node index and weight in [0, 1], snapping near-integer positions."""
    nearest = np.rint(position)
    position = np.where(np.abs(position - nearest) <= SNAP_TOLERANCE, nearest, position)
    lower = np.clip(np.floor(position).astype(int), 0, nodes - 2)
    return lower, position - lower


def observe(field: Union[TemperatureField, np.ndarray], grid: Grid, spec: ObservationSpec) -> np.ndarray:
    """
    Bilinear interpolation of the field at (stamp, depth) for every stamp.
    field may be a TemperatureField, an (m, l) matrix or a batch (B, m, l); returns (q,) or (B, q).
    On-grid stamps and depths reproduce matrix entries exactly.
    """
    values = field.values if isinstance(field, TemperatureField) else np.asarray(field, dtype=float)
    if values.shape[-2:] != (grid.m, grid.l):
        raise DataError(f"field shape {values.shape} does not match grid (m={grid.m}, l={grid.l})")
    if not 0.0 < spec.depth < grid.L:
        raise DataError(f"observation depth {spec.depth} m outside (0, {grid.L}) m")
    stamps = spec.stamps
    if stamps[0] < 0.0 or stamps[-1] > grid.T * (1.0 + SNAP_TOLERANCE):
        raise DataError(f"observation stamps [{stamps[0]}, {stamps[-1]}] s outside [0, {grid.T}] s")

    i0, wt = _fractional_index(stamps / grid.dt, grid.m)
    j0, wz = _fractional_index(np.array(spec.depth / grid.dz), grid.l)
    j0, wz = int(j0), float(wz)

    lower = values[..., i0, j0] * (1.0 - wz) + values[..., i0, j0 + 1] * wz
    upper = values[..., i0 + 1, j0] * (1.0 - wz) + values[..., i0 + 1, j0 + 1] * wz
    return lower * (1.0 - wt) + upper * wt


def observed_range(cores: Sequence[np.ndarray]) -> Tuple[float, float]:
    """Observed temperature range interval: span of all core measurements."""
    cores = [np.asarray(core, dtype=float) for core in cores if core is not None]
    if not cores:
        raise DataError("no core data to take the observed range from")
    stacked = np.concatenate(cores)
    return float(stacked.min()), float(stacked.max())
