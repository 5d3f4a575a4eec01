from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from heat_inverse.pchip import Interpolant, Partition, build_interpolant
from heat_inverse.shared.errors import DataError


@dataclass(frozen=True, eq=False)
class ParamVector:
    """
    Node values of k (conductivity, W/(m K)) and C (volumetric heat capacity, J/(m^3 K))
    on one shared temperature partition. The optimization unknown p = (k, C).
    """
    partition: Partition
    k_values: np.ndarray
    c_values: np.ndarray

    def __post_init__(self) -> None:
        for name in ("k_values", "c_values"):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.shape != (self.partition.n,):
                raise DataError(f"{name} must have {self.partition.n} entries, got shape {arr.shape}")
            if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
                raise DataError(f"{name} must be finite and strictly positive")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    # ------------------- Constructors -------------------

    @classmethod
    def constant(cls, partition: Partition, k: float, c: float) -> "ParamVector":
        return cls(partition, np.full(partition.n, float(k)), np.full(partition.n, float(c)))

    @classmethod
    def from_array(cls, partition: Partition, p: Union[Sequence[float], np.ndarray]) -> "ParamVector":
        p = np.asarray(p, dtype=float)
        n = partition.n
        if p.shape != (2 * n,):
            raise DataError(f"parameter array must have {2 * n} entries, got shape {p.shape}")
        return cls(partition, p[:n], p[n:])

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.k_values, self.c_values])

    def scaled(self, alpha: float) -> "ParamVector":
        """alpha * p; leaves the diffusivity k/C unchanged."""
        return ParamVector(self.partition, alpha * self.k_values, alpha * self.c_values)

    # ------------------- Material interface -------------------

    @cached_property
    def k(self) -> Interpolant:
        return build_interpolant(self.partition, self.k_values)

    @cached_property
    def C(self) -> Interpolant:
        return build_interpolant(self.partition, self.c_values)

    @property
    def u_min(self) -> float:
        return self.partition.u_min

    @property
    def u_max(self) -> float:
        return self.partition.u_max

    def conductivity(self, u) -> np.ndarray:
        return self.k(u)

    def capacity(self, u) -> np.ndarray:
        return self.C(u)

    def diffusivity(self, u) -> np.ndarray:
        return self.k(u) / self.C(u)
