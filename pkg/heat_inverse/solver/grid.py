from dataclasses import dataclass
from math import ceil

import numpy as np

from heat_inverse.shared.errors import DataError


@dataclass(frozen=True)
class Grid:
    """Equidistant time/space grid: m time nodes on [0, T], l space nodes on [0, L]."""
    T: float
    L: float
    m: int
    l: int

    def __post_init__(self) -> None:
        if self.m < 2 or self.l < 3:
            raise DataError(f"grid needs m >= 2 and l >= 3, got m={self.m}, l={self.l}")
        if not (self.T > 0.0 and self.L > 0.0):
            raise DataError(f"grid needs T > 0 and L > 0, got T={self.T}, L={self.L}")

    @classmethod
    def from_dt(cls, T: float, L: float, l: int, dt_max: float) -> "Grid":
        """Smallest m whose step T/(m-1) does not exceed dt_max."""
        if not dt_max > 0.0:
            raise DataError(f"time step must be positive, got {dt_max}")
        steps = max(1, ceil(T / dt_max))
        if T / steps > dt_max:
            steps += 1
        return cls(T, L, steps + 1, l)

    @property
    def dt(self) -> float:
        return self.T / (self.m - 1)

    @property
    def dz(self) -> float:
        return self.L / (self.l - 1)

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.T, self.m)

    @property
    def depths(self) -> np.ndarray:
        return np.linspace(0.0, self.L, self.l)
