"""
Explicit marching scheme for C(u) u_t = (k(u) u_z)_z with Dirichlet data.
Interface conductivities are harmonic means of k at the old time level.
"""

from dataclasses import dataclass
from typing import Callable, List, Protocol, Sequence, Tuple, Union

import numpy as np

from heat_inverse.pchip import hermite_eval, pchip_slopes
from heat_inverse.shared.config import STABILITY_SCAN_POINTS
from heat_inverse.shared.errors import DataError, NonFiniteTemperature, StabilityViolation
from heat_inverse.solver.experiment import Experiment
from heat_inverse.solver.grid import Grid
from heat_inverse.solver.params import ParamVector

# Relative slack on dt vs bound so a grid built from the bound itself passes
STABILITY_SLACK: float = 1e-12


class Material(Protocol):
    """Temperature dependent coefficients on U = [u_min, u_max]."""
    u_min: float
    u_max: float

    def conductivity(self, u) -> np.ndarray: ...

    def capacity(self, u) -> np.ndarray: ...


@dataclass(frozen=True, eq=False)
class TemperatureField:
    """u[i, j] = u(t_i, z_j): m rows (time) by l columns (depth)."""
    values: np.ndarray
    grid: Grid

    @property
    def core(self) -> np.ndarray:
        """Middle column; only the core when l is odd."""
        return self.values[:, (self.grid.l - 1) // 2]

# ---------------------------------------------------------
#   Stability
# ---------------------------------------------------------

def _harmonic(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return 2.0 * a * b / (a + b)


def harmonic_mean(a, b):
    """2ab/(a+b) for positive a, b (elementwise, symmetric)."""
    a_arr, b_arr = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if np.any(a_arr <= 0.0) or np.any(b_arr <= 0.0):
        raise DataError("harmonic mean needs strictly positive arguments")
    out = _harmonic(a_arr, b_arr)
    return out if out.ndim else float(out)


def _scan_points(material: Material, points: int) -> np.ndarray:
    scan = np.linspace(material.u_min, material.u_max, points)
    partition = getattr(material, "partition", None)
    if partition is not None:
        scan = np.union1d(scan, partition.nodes)
    return scan


def max_diffusivity(material: Material, points: int = STABILITY_SCAN_POINTS) -> float:
    """max of k/C over a dense scan of U plus the partition nodes."""
    scan = _scan_points(material, points)
    return float(np.max(material.conductivity(scan) / material.capacity(scan)))


def max_stable_dt(material: Material, dz: float, points: int = STABILITY_SCAN_POINTS) -> float:
    """Stability bound dz^2 / (2 max lambda) of the explicit scheme."""
    return dz * dz / (2.0 * max_diffusivity(material, points))


def check_stability(material: Material, grid: Grid) -> float:
    """Return the bound; raise StabilityViolation when grid.dt exceeds it."""
    bound = max_stable_dt(material, grid.dz)
    if grid.dt > bound * (1.0 + STABILITY_SLACK):
        raise StabilityViolation(grid.dt, bound)
    return bound

# ---------------------------------------------------------
#   Coefficient evaluation
# ---------------------------------------------------------

CoefficientFn = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]


def _stacked_coefficients(params: Sequence[ParamVector]) -> CoefficientFn:
    """Batched k, C evaluation for parameter vectors sharing one partition."""
    nodes = params[0].partition.nodes
    k_values = np.stack([p.k_values for p in params])
    c_values = np.stack([p.c_values for p in params])
    k_slopes = pchip_slopes(nodes, k_values)
    c_slopes = pchip_slopes(nodes, c_values)

    def coefficients(u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return hermite_eval(nodes, k_values, k_slopes, u), hermite_eval(nodes, c_values, c_slopes, u)

    return coefficients


def _generic_coefficients(materials: Sequence[Material]) -> CoefficientFn:
    def coefficients(u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        k = np.empty_like(u)
        c = np.empty_like(u)
        for b, material in enumerate(materials):
            u_b = np.clip(u[b], material.u_min, material.u_max)
            k[b] = material.conductivity(u_b)
            c[b] = material.capacity(u_b)
        return k, c

    return coefficients


def _coefficients_for(materials: Sequence[Material]) -> CoefficientFn:
    if all(isinstance(m, ParamVector) for m in materials):
        partition = materials[0].partition
        if all(m.partition == partition for m in materials):
            return _stacked_coefficients(materials)
    return _generic_coefficients(materials)

# ---------------------------------------------------------
#   Marching scheme
# ---------------------------------------------------------

def _march(coefficients: CoefficientFn, batch: int, exp: Experiment, grid: Grid) -> np.ndarray:
    """March all batch members through the grid; returns (batch, m, l)."""
    m, l = grid.m, grid.l
    field = np.empty((batch, m, l))
    field[:, 0, :] = exp.u_init
    # Dirichlet data wins at the corners
    field[:, :, 0] = exp.u_bottom
    field[:, :, -1] = exp.u_top

    dt, dz2 = grid.dt, grid.dz * grid.dz
    for i in range(1, m):
        old = field[:, i - 1, :]
        k, c = coefficients(old)
        k_e = _harmonic(k[:, 1:-1], k[:, 2:])
        k_w = _harmonic(k[:, :-2], k[:, 1:-1])
        flux = k_e * (old[:, 2:] - old[:, 1:-1]) - k_w * (old[:, 1:-1] - old[:, :-2])
        new = old[:, 1:-1] + dt / (dz2 * c[:, 1:-1]) * flux
        if not np.all(np.isfinite(new)):
            member, j = np.argwhere(~np.isfinite(new))[0]
            raise NonFiniteTemperature((i, int(j) + 1), int(member))
        field[:, i, 1:-1] = new
    return field


def _check_aligned(exp: Experiment, grid: Grid) -> None:
    if exp.u_bottom.size != grid.m or exp.u_init.size != grid.l:
        raise DataError(f"{exp.name}: experiment is not resampled to the grid "
                        f"({exp.u_bottom.size} stamps / {exp.u_init.size} depths vs m={grid.m}, l={grid.l})")


def solve_forward_batch(materials: Sequence[Material], exp: Experiment, grid: Grid) -> np.ndarray:
    """
    Solve the same experiment for several materials at once.
    Every member is checked against the stability bound; returns (B, m, l).
    """
    _check_aligned(exp, grid)
    materials = list(materials)
    for b, material in enumerate(materials):
        try:
            check_stability(material, grid)
        except StabilityViolation as err:
            raise err.tag(column=b if len(materials) > 1 else None)
    return _march(_coefficients_for(materials), len(materials), exp, grid)


def solve_forward(material: Material, exp: Experiment, grid: Grid) -> TemperatureField:
    """Temperature matrix for one material and one (resampled) experiment."""
    return TemperatureField(solve_forward_batch([material], exp, grid)[0], grid)
