import logging

import numpy as np
import pytest

from conftest import C_CONST, K_CONST, LAMBDA_CONST, sine_experiment, sine_grid
from heat_inverse.pchip import Partition
from heat_inverse.shared.errors import DataError, NonFiniteTemperature, StabilityViolation
from heat_inverse.solver import (
    Experiment,
    Grid,
    ParamVector,
    check_stability,
    harmonic_mean,
    max_stable_dt,
    resample_experiment,
    solve_forward,
    solve_forward_batch,
)
from heat_inverse.synthetic import SIMULATED_STEEL, TripletSpec, build_experiment, SyntheticScenario


def test_harmonic_mean() -> None:
    assert harmonic_mean(7.0, 7.0) == 7.0
    assert harmonic_mean(2.0, 6.0) == pytest.approx(3.0, rel=1e-15)
    assert harmonic_mean(3.3, 41.0) == harmonic_mean(41.0, 3.3)
    with pytest.raises(DataError):
        harmonic_mean(0.0, 1.0)


def test_stability_bound_constant_coefficients(constant_params: ParamVector) -> None:
    assert max_stable_dt(constant_params, 0.01) == pytest.approx(5.0, rel=1e-12)
    assert max_stable_dt(constant_params, 0.005) == pytest.approx(5.0 / 4.0, rel=1e-12)


def test_stability_bound_of_simulated_steel() -> None:
    dz = 0.005
    u = np.linspace(0.0, 900.0, 10001)
    oracle = dz * dz / (2.0 * np.max(SIMULATED_STEEL.diffusivity(u)))
    assert max_stable_dt(SIMULATED_STEEL, dz) == pytest.approx(oracle, rel=1e-6)


def test_equilibrium_stays_constant(constant_params: ParamVector) -> None:
    grid = Grid(50.0, 0.1, 201, 21)
    flat = np.full(grid.m, 780.0)
    exp = Experiment(grid.times, flat, flat, grid.depths, np.full(grid.l, 780.0))
    field = solve_forward(constant_params, exp, grid)
    assert np.all(field.values == 780.0)


def test_relaxes_to_linear_steady_state(constant_params: ParamVector) -> None:
    grid = sine_grid(constant_params, 21, T=1500.0)
    exp = Experiment(grid.times, np.zeros(grid.m), np.full(grid.m, 100.0), grid.depths, np.zeros(grid.l))
    field = solve_forward(constant_params, exp, grid)
    assert np.allclose(field.values[-1], 100.0 * grid.depths / grid.L, atol=0.1)


def test_sine_mode_decays_at_analytic_rate(constant_params: ParamVector) -> None:
    T = 100.0
    grid = sine_grid(constant_params, 81, T)
    field = solve_forward(constant_params, sine_experiment(grid), grid)
    exact = 100.0 * np.exp(-LAMBDA_CONST * np.pi**2 * T / grid.L**2)
    assert field.core[-1] == pytest.approx(exact, rel=0.02)


def test_convergence_is_second_order_under_refinement(constant_params: ParamVector) -> None:
    T = 100.0
    errors = []
    for l in (21, 41, 81):
        grid = sine_grid(constant_params, l, T)
        field = solve_forward(constant_params, sine_experiment(grid), grid)
        exact = 100.0 * np.exp(-LAMBDA_CONST * np.pi**2 * T / grid.L**2)
        errors.append(abs(field.core[-1] - exact))
    orders = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
    assert np.all(orders >= 1.7)


def test_time_step_above_bound_is_rejected(constant_params: ParamVector) -> None:
    l, L = 21, 0.1
    bound = max_stable_dt(constant_params, L / (l - 1))
    grid = Grid(20.0, L, 16, l)
    assert grid.dt > 1.05 * bound
    with pytest.raises(StabilityViolation) as info:
        solve_forward(constant_params, sine_experiment(grid), grid)
    assert info.value.bound == pytest.approx(bound)
    assert "stability bound" in str(info.value)


def test_maximum_principle_below_bound(constant_params: ParamVector) -> None:
    rng = np.random.default_rng(9)
    l, L, T = 21, 0.1, 40.0
    bound = max_stable_dt(constant_params, L / (l - 1))
    grid = Grid.from_dt(T, L, l, 0.95 * bound)
    assert check_stability(constant_params, grid) == pytest.approx(bound)
    exp = Experiment(grid.times, rng.uniform(0.0, 100.0, grid.m), rng.uniform(0.0, 100.0, grid.m),
                     grid.depths, rng.uniform(0.0, 100.0, grid.l))
    values = solve_forward(constant_params, exp, grid).values
    assert values.min() >= -1e-9
    assert values.max() <= 100.0 + 1e-9


def test_boundary_and_initial_data_are_reproduced() -> None:
    scenario = SyntheticScenario(triplets=(TripletSpec(cooling_time=10.0, asymmetry=25.0, bulge=12.0),), T=20.0)
    params = ParamVector.constant(Partition.uniform(0.0, 900.0, 5), 40.0, 4.5e6)
    grid = sine_grid(params, 21, T=20.0)
    exp = resample_experiment(build_experiment(scenario.triplets[0], scenario, 0), grid)
    field = solve_forward(params, exp, grid).values
    assert np.array_equal(field[:, 0], exp.u_bottom)
    assert np.array_equal(field[:, -1], exp.u_top)
    assert np.array_equal(field[0, 1:-1], exp.u_init[1:-1])


def test_scaling_both_coefficients_leaves_field_unchanged() -> None:
    rng = np.random.default_rng(1)
    partition = Partition.uniform(0.0, 900.0, 6)
    p = ParamVector(partition, rng.uniform(30.0, 60.0, 6), rng.uniform(3e6, 5e6, 6))
    scenario = SyntheticScenario(triplets=(TripletSpec(cooling_time=10.0),), T=20.0)
    grid = sine_grid(p, 21, T=20.0, safety=0.4)
    exp = resample_experiment(build_experiment(scenario.triplets[0], scenario, 0), grid)
    base = solve_forward(p, exp, grid).values
    for alpha in (0.5, 2.0, 10.0):
        scaled = solve_forward(p.scaled(alpha), exp, grid).values
        assert np.allclose(scaled, base, rtol=1e-9, atol=0.0)


def test_batch_matches_individual_solves() -> None:
    partition = Partition.uniform(0.0, 900.0, 4)
    members = [ParamVector.constant(partition, k, 5e6) for k in (30.0, 40.0, 50.0)]
    grid = sine_grid(members[-1], 21, T=30.0)
    exp = sine_experiment(grid)
    batch = solve_forward_batch(members, exp, grid)
    for b, member in enumerate(members):
        assert np.array_equal(batch[b], solve_forward(member, exp, grid).values)


class _BrokenMaterial:
    """Capacity undefined above 500 degC."""
    u_min = 0.0
    u_max = 900.0

    def conductivity(self, u):
        return np.full_like(np.asarray(u, dtype=float), K_CONST)

    def capacity(self, u):
        u = np.asarray(u, dtype=float)
        return np.where(u < 500.0, C_CONST, np.nan)


def test_non_finite_temperature_is_reported() -> None:
    grid = Grid(10.0, 0.1, 41, 21)
    profile = np.full(grid.l, 400.0)
    profile[7] = 600.0
    exp = Experiment(grid.times, np.full(grid.m, 400.0), np.full(grid.m, 400.0), grid.depths, profile)
    with pytest.raises(NonFiniteTemperature) as info:
        solve_forward(_BrokenMaterial(), exp, grid)
    assert info.value.position == (1, 7)


def test_resample_keeps_on_grid_series_and_interpolates_linearly() -> None:
    grid = Grid(50.0, 0.1, 3, 5)
    exp = Experiment([0.0, 50.0], [780.0, 400.0], [780.0, 400.0], [0.0, 0.1], [780.0, 780.0])
    resampled = resample_experiment(exp, grid)
    assert resampled.u_bottom[1] == pytest.approx(590.0)
    assert np.array_equal(resampled.u_init, np.full(5, 780.0))

    again = resample_experiment(resampled, grid)
    assert np.array_equal(again.u_bottom, resampled.u_bottom)


def test_resample_rejects_coverage_gap() -> None:
    exp = Experiment([0.0, 40.0], [780.0, 400.0], [780.0, 400.0], [0.0, 0.1], [780.0, 780.0])
    with pytest.raises(DataError, match="does not cover"):
        resample_experiment(exp, Grid(50.0, 0.1, 11, 5))


def test_unaligned_experiment_is_rejected(constant_params: ParamVector) -> None:
    grid = Grid(10.0, 0.1, 11, 5)
    exp = Experiment([0.0, 10.0], [1.0, 1.0], [1.0, 1.0], [0.0, 0.1], [1.0, 1.0])
    with pytest.raises(DataError, match="not resampled"):
        solve_forward(constant_params, exp, grid)


def test_corner_mismatch_is_logged(caplog: pytest.LogCaptureFixture) -> None:
    exp = Experiment([0.0, 10.0], [780.0, 700.0], [780.0, 700.0], [0.0, 0.05, 0.1], [775.0, 790.0, 780.0],
                     name="plate")
    with caplog.at_level(logging.WARNING, logger="heat_inverse.solver.experiment"):
        assert exp.check_corners(1.0) is False
    assert "plate" in caplog.text
    assert "5.000 degC" in caplog.text

    caplog.clear()
    with caplog.at_level(logging.WARNING, logger="heat_inverse.solver.experiment"):
        assert exp.check_corners(10.0) is True
    assert caplog.text == ""
