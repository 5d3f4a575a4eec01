import numpy as np
import pytest

from heat_inverse.pchip import Partition
from heat_inverse.solver import Experiment, Grid, ParamVector, max_stable_dt
from heat_inverse.synthetic import SyntheticScenario, TripletSpec

# Constant coefficients with lambda = 1e-5 m^2/s
K_CONST = 50.0
C_CONST = 5e6
LAMBDA_CONST = K_CONST / C_CONST


@pytest.fixture
def constant_params() -> ParamVector:
    return ParamVector.constant(Partition.uniform(0.0, 900.0, 4), K_CONST, C_CONST)


def sine_experiment(grid: Grid, amplitude: float = 100.0) -> Experiment:
    """Zero boundaries, u0 = amplitude * sin(pi z / L) sampled on the grid depths."""
    depths = grid.depths
    u_init = amplitude * np.sin(np.pi * depths / grid.L)
    u_init[0] = u_init[-1] = 0.0
    zeros = np.zeros(grid.m)
    return Experiment(grid.times, zeros, zeros, depths, u_init, name="sine")


def sine_grid(params: ParamVector, l: int, T: float, L: float = 0.1, safety: float = 0.5) -> Grid:
    dz = L / (l - 1)
    return Grid.from_dt(T, L, l, safety * max_stable_dt(params, dz))


def small_scenario(count: int = 1, noise: float = 0.0, stamp_interval: float = 1.0,
                   reference_l: int = 41, seed: int = 7) -> SyntheticScenario:
    """Short, coarse scenario for fast fitting tests (boundaries stay within [300, 800] degC)."""
    triplets = (
        TripletSpec(plateau=780.0, cooling_time=25.0, minimum=350.0, recovery=450.0),
        TripletSpec(plateau=760.0, cooling_time=20.0, minimum=400.0, recovery=480.0, asymmetry=20.0, bulge=10.0),
        TripletSpec(plateau=790.0, cooling_time=30.0, minimum=380.0, recovery=460.0, asymmetry=-10.0, bulge=5.0),
    )
    return SyntheticScenario(triplets=triplets[:count], T=50.0, stamp_interval=stamp_interval,
                             reference_l=reference_l, noise=noise, seed=seed)
