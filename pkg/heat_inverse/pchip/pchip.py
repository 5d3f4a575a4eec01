"""
Monotone piecewise cubic Hermite interpolation (Fritsch-Carlson slopes).
Represents k(u) and C(u) by their values on a fixed temperature partition.
"""

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from heat_inverse.shared.errors import DataError

ArrayLike = Union[float, Sequence[float], np.ndarray]


def _frozen(values: ArrayLike) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr

# ---------------------------------------------------------
#   Partition
# ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Partition:
    """Strictly increasing temperature nodes u_1 < ... < u_n covering U = [u_min, u_max]."""
    nodes: np.ndarray

    def __post_init__(self) -> None:
        nodes = _frozen(self.nodes)
        if nodes.ndim != 1 or nodes.size < 2:
            raise DataError(f"partition needs at least 2 nodes, got {nodes.size}")
        if not np.all(np.isfinite(nodes)):
            raise DataError("partition nodes must be finite")
        if np.any(np.diff(nodes) <= 0.0):
            raise DataError("partition nodes must be strictly increasing")
        object.__setattr__(self, "nodes", nodes)

    @classmethod
    def uniform(cls, u_min: float, u_max: float, n: int) -> "Partition":
        """Equidistant partition with n nodes (endpoints included)."""
        if n < 2:
            raise DataError(f"partition needs at least 2 nodes, got {n}")
        if not u_min < u_max:
            raise DataError(f"u_min {u_min} must be below u_max {u_max}")
        return cls(np.linspace(u_min, u_max, n))

    @property
    def n(self) -> int:
        return int(self.nodes.size)

    @property
    def u_min(self) -> float:
        return float(self.nodes[0])

    @property
    def u_max(self) -> float:
        return float(self.nodes[-1])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Partition) and np.array_equal(self.nodes, other.nodes)

    def __hash__(self) -> int:
        return hash(self.nodes.tobytes())

# ---------------------------------------------------------
#   Vectorized kernels
# ---------------------------------------------------------

def _endpoint_slope(h0: float, h1: float, m0: np.ndarray, m1: np.ndarray) -> np.ndarray:
    """Non-centered three-point endpoint derivative, clipped to keep shape."""
    d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1)
    d = np.where(np.sign(d) != np.sign(m0), 0.0, d)
    clip = (np.sign(m0) != np.sign(m1)) & (np.abs(d) > 3.0 * np.abs(m0))
    return np.where(clip, 3.0 * m0, d)


def pchip_slopes(nodes: np.ndarray, values: np.ndarray) -> np.ndarray:
    """
    Fritsch-Carlson derivatives for values of shape (..., n).
    - interior: weighted harmonic mean of neighbouring secants, zero at local extrema
    - endpoints: clipped three-point rule
    - two nodes: both slopes equal the secant (linear interpolant)
    """
    nodes = np.asarray(nodes, dtype=float)
    values = np.asarray(values, dtype=float)
    h = np.diff(nodes)
    delta = np.diff(values, axis=-1) / h

    if nodes.size == 2:
        return np.stack([delta[..., 0], delta[..., 0]], axis=-1)

    slopes = np.zeros_like(values)
    h_left, h_right = h[:-1], h[1:]
    d_left, d_right = delta[..., :-1], delta[..., 1:]
    w1 = 2.0 * h_right + h_left
    w2 = h_right + 2.0 * h_left
    same_sign = np.sign(d_left) * np.sign(d_right) > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        harmonic = (w1 + w2) / (w1 / d_left + w2 / d_right)
    slopes[..., 1:-1] = np.where(same_sign, harmonic, 0.0)

    slopes[..., 0] = _endpoint_slope(h[0], h[1], delta[..., 0], delta[..., 1])
    slopes[..., -1] = _endpoint_slope(h[-1], h[-2], delta[..., -1], delta[..., -2])
    return slopes


def hermite_eval(nodes: np.ndarray, values: np.ndarray, slopes: np.ndarray, u: ArrayLike) -> np.ndarray:
    """
    Evaluate cubic Hermite data at u, clamping u to [nodes[0], nodes[-1]].
    values/slopes are (n,) for any shape of u, or (B, n) with u of shape (B, q).
    """
    u = np.clip(np.asarray(u, dtype=float), nodes[0], nodes[-1])
    idx = np.clip(np.searchsorted(nodes, u, side="right") - 1, 0, nodes.size - 2)
    x0 = nodes[idx]
    h = nodes[idx + 1] - x0
    t = (u - x0) / h

    if values.ndim == 1:
        y0, y1 = values[idx], values[idx + 1]
        d0, d1 = slopes[idx], slopes[idx + 1]
    else:
        y0 = np.take_along_axis(values, idx, axis=-1)
        y1 = np.take_along_axis(values, idx + 1, axis=-1)
        d0 = np.take_along_axis(slopes, idx, axis=-1)
        d1 = np.take_along_axis(slopes, idx + 1, axis=-1)

    # Hermite basis; exact 0/1 at t = 0 and t = 1
    t2 = t * t
    t3 = t2 * t
    h00 = 2.0 * t3 - 3.0 * t2 + 1.0
    h10 = t3 - 2.0 * t2 + t
    h01 = -2.0 * t3 + 3.0 * t2
    h11 = t3 - t2
    return h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1

# ---------------------------------------------------------
#   Interpolant
# ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Interpolant:
    """Immutable C1 monotone cubic interpolant of positive node values."""
    partition: Partition
    values: np.ndarray
    slopes: np.ndarray = field(repr=False)

    def __call__(self, u: ArrayLike) -> np.ndarray:
        return evaluate(self, u)


def _check_values(partition: Partition, values: ArrayLike) -> np.ndarray:
    values = np.array(values, dtype=float)
    if values.ndim != 1 or values.size != partition.n:
        raise DataError(f"expected {partition.n} node values, got {values.size}")
    if not np.all(np.isfinite(values)) or np.any(values <= 0.0):
        raise DataError("node values must be finite and strictly positive")
    return values


def build_interpolant(partition: Partition, values: ArrayLike) -> Interpolant:
    """Build the Fritsch-Carlson interpolant of positive values on the partition."""
    values = _check_values(partition, values)
    slopes = pchip_slopes(partition.nodes, values)
    return Interpolant(partition, _frozen(values), _frozen(slopes))


def evaluate(interp: Interpolant, u: ArrayLike) -> np.ndarray:
    """Evaluate the interpolant; outside [u_min, u_max] the endpoint value is returned."""
    out = hermite_eval(interp.partition.nodes, interp.values, interp.slopes, u)
    return out if out.ndim else out[()]


def perturb_node(interp: Interpolant, i: int, new_value: float) -> Interpolant:
    """
    Rebuild the interpolant with node i (0-based) set to new_value.
    Evaluations outside [u_{i-2}, u_{i+2}] stay bitwise identical.
    """
    if not 0 <= i < interp.partition.n:
        raise DataError(f"node index {i} out of range [0, {interp.partition.n - 1}]")
    if not new_value > 0.0:
        raise DataError(f"node value must be positive, got {new_value}")
    values = interp.values.copy()
    values[i] = new_value
    return build_interpolant(interp.partition, values)


def locality_window(partition: Partition, i: int) -> tuple:
    """Temperature interval [u_{i-2}, u_{i+2}] that a change of node i can affect."""
    lo = max(i - 2, 0)
    hi = min(i + 2, partition.n - 1)
    return float(partition.nodes[lo]), float(partition.nodes[hi])
