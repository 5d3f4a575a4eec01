"""
End-to-end twin-experiment checks on the whole pipeline.
Only the quotient lambda = k/C is asserted; k and C individually are not identifiable.
"""

import numpy as np
import pytest

from conftest import small_scenario
from heat_inverse.inverse import (
    FitProblem,
    GridPolicy,
    diffusivity,
    experiment_grids,
    fit,
    lambda_error,
    objective,
)
from heat_inverse.pchip import Partition
from heat_inverse.solver import Grid, ParamVector, resample_experiment, solve_forward
from heat_inverse.synthetic import SIMULATED_STEEL, C_sim, SyntheticScenario, generate_data, k_sim

FIXED_DT = 0.25


@pytest.fixture(scope="module")
def zero_noise_fit():
    """n = 6 fit of data generated by a PCHIP p_true on the fitting grid itself."""
    partition = Partition.uniform(400.0, 800.0, 6)
    p_true = ParamVector(partition, k_sim(partition.nodes), C_sim(partition.nodes))
    grid = Grid.from_dt(50.0, 0.1, 21, FIXED_DT)
    data = generate_data(small_scenario(count=2, noise=0.0, reference_l=21), material=p_true, grid=grid)
    problem = FitProblem(tuple(data.experiments), partition, GridPolicy(l=21, auto_dt=False, dt=FIXED_DT))
    result = fit(ParamVector.constant(partition, 45.0, 4.5e6), problem)
    return p_true, problem, result


def test_scale_ambiguity_of_fields_objective_and_diffusivity() -> None:
    rng = np.random.default_rng(17)
    partition = Partition.uniform(0.0, 900.0, 8)
    data = generate_data(small_scenario(count=2, noise=0.5, reference_l=41))
    problem = FitProblem(tuple(data.experiments), partition, GridPolicy(l=21))
    u = np.linspace(0.0, 900.0, 1001)
    for _ in range(3):
        p = ParamVector(partition, rng.uniform(25.0, 65.0, 8), rng.uniform(3e6, 6e6, 8))
        grids = experiment_grids(p, problem)
        exp = resample_experiment(problem.experiments[0], grids[0])
        field = solve_forward(p, exp, grids[0]).values
        j_m = objective(p, problem, grids)
        for alpha in (0.5, 2.0, 10.0):
            scaled = p.scaled(alpha)
            assert np.allclose(solve_forward(scaled, exp, grids[0]).values, field, rtol=1e-9, atol=0.0)
            assert objective(scaled, problem, grids) == pytest.approx(j_m, rel=1e-9)
            assert np.allclose(diffusivity(scaled, u), diffusivity(p, u), rtol=1e-12, atol=0.0)


def test_zero_noise_fit_is_self_consistent(zero_noise_fit) -> None:
    p_true, problem, result = zero_noise_fit
    assert result.converged
    assert result.objective <= 1e-8 * problem.total_size
    worst, _ = lambda_error(result.p_opt, p_true, result.observed_range)
    assert worst <= 0.005


def test_flattest_direction_is_the_scaling_ray(zero_noise_fit) -> None:
    _, _, result = zero_noise_fit
    assert result.flat_direction_cosine >= 0.99
    assert result.singular_values[-1] <= 1e-3 * result.singular_values[0]


@pytest.mark.slow
def test_twin_experiment_recovers_diffusivity() -> None:
    data = generate_data(SyntheticScenario())
    partition = Partition.uniform(0.0, 900.0, 12)
    problem = FitProblem(tuple(data.experiments), partition, GridPolicy(l=41))
    result = fit(ParamVector.constant(partition, 45.0, 4.5e6), problem)

    worst, mean = lambda_error(result.p_opt, SIMULATED_STEEL, result.observed_range)
    assert worst <= 0.05
    assert mean <= 0.02
    # noisy data keeps the misfit near the noise floor w^2/3 per sample
    noise_floor = problem.total_size * data.scenario.noise**2 / 3.0
    assert result.objective >= 0.5 * noise_floor
