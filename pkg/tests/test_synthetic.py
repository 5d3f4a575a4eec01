import warnings

import numpy as np
import pytest

from conftest import small_scenario
from heat_inverse.observation import observed_range
from heat_inverse.pchip import Partition
from heat_inverse.shared.errors import DataError
from heat_inverse.solver import Grid, ParamVector, resample_experiment, solve_forward
from heat_inverse.synthetic import (
    SIMULATED_STEEL,
    C_sim,
    SyntheticScenario,
    TripletSpec,
    boundary_curve,
    build_experiment,
    check_reference_resolution,
    generate_data,
    k_sim,
    make_triplet,
    uniform_noise,
)


def test_simulated_coefficients() -> None:
    assert k_sim(0.0) == 60.0
    assert k_sim(900.0) == 30.0
    assert C_sim(0.0) == pytest.approx(3633750.0, rel=1e-6)
    assert C_sim(700.0) == pytest.approx(5307187.5, rel=1e-12)
    assert C_sim(900.0) == pytest.approx(3939750.0, rel=1e-6)
    assert SIMULATED_STEEL.diffusivity(0.0) == pytest.approx(1.6512e-5, rel=1e-3)


def test_simulated_coefficients_clamp_outside_range() -> None:
    assert k_sim(-100.0) == k_sim(0.0)
    assert C_sim(1200.0) == C_sim(900.0)


def test_default_triplet_shape() -> None:
    times = np.linspace(0.0, 50.0, 201)
    depths = np.linspace(0.0, 0.1, 11)
    u_bottom, u_top, u_init = make_triplet(TripletSpec(), times, depths)
    assert u_bottom[0] == 780.0
    assert u_bottom[100] == pytest.approx(350.0, abs=1e-9)
    assert u_bottom[-1] == pytest.approx(450.0, abs=10.0)
    assert np.array_equal(u_bottom, u_top)
    assert np.all(u_init == 780.0)


def test_cooling_past_the_horizon_stays_on_the_drop() -> None:
    t = np.linspace(0.0, 10.0, 41)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        curve = boundary_curve(t, 780.0, 10.0, 350.0, 450.0, 10.0)
    assert curve[0] == 780.0
    assert curve[-1] == pytest.approx(350.0, abs=1e-9)
    assert np.all(np.diff(curve) <= 0.0)


def test_triplets_are_corner_compatible() -> None:
    spec = TripletSpec(asymmetry=30.0, bulge=10.0)
    depths = np.linspace(0.0, 0.1, 201)
    u_bottom, u_top, u_init = make_triplet(spec, np.linspace(0.0, 50.0, 11), depths)
    assert u_init[0] == pytest.approx(u_bottom[0], abs=1e-9)
    assert u_init[-1] == pytest.approx(u_top[0], abs=1e-9)
    assert u_init[100] == pytest.approx(790.0)
    assert u_top.min() == pytest.approx(320.0, abs=1e-9)


@pytest.mark.parametrize("changes", [
    {"minimum": 800.0},
    {"cooling_time": 0.0},
    {"recovery": 100.0},
    {"bulge": -1.0},
    {"style": "wobbly"},
])
def test_invalid_triplet_parameters_are_rejected(changes: dict) -> None:
    with pytest.raises(DataError):
        TripletSpec(**changes)


def test_equilibrium_triplet_stays_put() -> None:
    scenario = SyntheticScenario(triplets=(TripletSpec(style="equilibrium", plateau=780.0),), noise=0.0,
                                 reference_l=21)
    data = generate_data(scenario)
    assert np.allclose(data.experiments[0].u_core, 780.0, rtol=1e-12, atol=0.0)


def test_symmetric_triplet_gives_symmetric_field() -> None:
    params = ParamVector.constant(Partition.uniform(0.0, 900.0, 4), 40.0, 4.5e6)
    scenario = SyntheticScenario(triplets=(TripletSpec(style="symmetric", bulge=8.0),))
    grid = scenario.reference_grid(params)
    exp = resample_experiment(build_experiment(scenario.triplets[0], scenario, 0), grid)
    values = solve_forward(params, exp, grid).values
    assert np.allclose(values, values[:, ::-1], rtol=0.0, atol=1e-9)


def test_noise_is_bounded_and_reproducible() -> None:
    scenario = small_scenario(count=2, noise=0.5, reference_l=21)
    data = generate_data(scenario)
    again = generate_data(scenario)
    for exp, clean, repeat in zip(data.experiments, data.clean_cores, again.experiments):
        assert np.max(np.abs(exp.u_core - clean)) <= 0.5 + 1e-9
        assert np.array_equal(exp.u_core, repeat.u_core)


def test_zero_noise_returns_clean_cores() -> None:
    data = generate_data(small_scenario(count=1, noise=0.0, reference_l=21))
    assert np.array_equal(data.experiments[0].u_core, data.clean_cores[0])


def test_generation_is_identical_across_job_counts() -> None:
    scenario = small_scenario(count=3, noise=0.5, reference_l=21)
    serial = generate_data(scenario, jobs=1)
    threaded = generate_data(scenario, jobs=3)
    for a, b in zip(serial.experiments, threaded.experiments):
        assert np.array_equal(a.u_core, b.u_core)


def test_uniform_noise_statistics() -> None:
    noise = uniform_noise(42, 0, 20000, 0.5)
    assert np.all(np.abs(noise) <= 0.5)
    assert abs(noise.mean()) <= 0.01
    assert np.mean(noise**2) == pytest.approx(1.0 / 12.0, rel=0.05)
    assert not np.array_equal(noise, uniform_noise(42, 1, 20000, 0.5))


def test_default_scenario_observes_a_strict_subinterval() -> None:
    data = generate_data(SyntheticScenario(reference_l=41))
    u_lo, u_hi = observed_range([exp.u_core for exp in data.experiments])
    assert 0.0 < u_lo < u_hi < 900.0
    assert u_hi - u_lo < 900.0


def test_reference_resolution_check() -> None:
    check_reference_resolution(SyntheticScenario(reference_l=81), fit_l=41)
    with pytest.raises(DataError, match="finer"):
        check_reference_resolution(SyntheticScenario(reference_l=41), fit_l=41)


def test_scenario_round_trips_through_dict() -> None:
    scenario = small_scenario(count=2, noise=0.25)
    assert SyntheticScenario.from_dict(scenario.to_dict()) == scenario


def test_explicit_grid_overrides_reference_grid() -> None:
    grid = Grid(50.0, 0.1, 401, 21)
    data = generate_data(small_scenario(), grid=grid)
    assert data.grid is grid
