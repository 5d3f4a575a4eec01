import numpy as np
import pytest

from heat_inverse.observation import ObservationSpec, observe, observed_range
from heat_inverse.shared.errors import DataError
from heat_inverse.solver import Grid, TemperatureField

GRID = Grid(50.0, 0.1, 201, 41)


def test_on_grid_stamps_read_the_middle_column_verbatim() -> None:
    rng = np.random.default_rng(0)
    values = rng.uniform(300.0, 800.0, (GRID.m, GRID.l))
    core = observe(TemperatureField(values, GRID), GRID, ObservationSpec.core(GRID.L, GRID.times))
    assert np.array_equal(core, values[:, 20])


def test_subsampled_stamps_are_exact_gathers() -> None:
    rng = np.random.default_rng(1)
    values = rng.uniform(300.0, 800.0, (GRID.m, GRID.l))
    stamps = np.arange(0.0, 50.0 + 1e-9, 0.5)
    core = observe(values, GRID, ObservationSpec.core(GRID.L, stamps))
    assert np.array_equal(core, values[::2, 20])


def test_depth_between_nodes_is_interpolated() -> None:
    grid = Grid(10.0, 0.1, 11, 4)
    values = np.zeros((grid.m, grid.l))
    values[:, 1] = 400.0
    values[:, 2] = 402.0
    core = observe(values, grid, ObservationSpec.core(grid.L, grid.times))
    assert np.allclose(core, 401.0, rtol=1e-14)


def test_constant_field_observes_constant() -> None:
    values = np.full((GRID.m, GRID.l), 780.0)
    stamps = np.linspace(0.0, 50.0, 37)
    assert np.allclose(observe(values, GRID, ObservationSpec(0.0317, stamps)), 780.0, rtol=1e-15)


def test_values_stay_within_surrounding_cell() -> None:
    rng = np.random.default_rng(2)
    values = rng.uniform(0.0, 1000.0, (GRID.m, GRID.l))
    for _ in range(200):
        t = float(rng.uniform(0.0, GRID.T))
        z = float(rng.uniform(1e-6, GRID.L - 1e-6))
        got = observe(values, GRID, ObservationSpec(z, np.array([t])))[0]
        i = min(int(t / GRID.dt), GRID.m - 2)
        j = min(int(z / GRID.dz), GRID.l - 2)
        cell = values[i:i + 2, j:j + 2]
        assert cell.min() - 1e-9 <= got <= cell.max() + 1e-9


def test_observation_is_linear_in_the_field() -> None:
    rng = np.random.default_rng(3)
    a = rng.uniform(0.0, 800.0, (GRID.m, GRID.l))
    b = rng.uniform(0.0, 800.0, (GRID.m, GRID.l))
    spec = ObservationSpec(0.0431, np.sort(rng.uniform(0.0, 50.0, 60)))
    lhs = observe(2.5 * a + b, GRID, spec)
    rhs = 2.5 * observe(a, GRID, spec) + observe(b, GRID, spec)
    assert np.allclose(lhs, rhs, rtol=1e-12, atol=0.0)


def test_batched_field_matches_members() -> None:
    rng = np.random.default_rng(4)
    batch = rng.uniform(300.0, 800.0, (3, GRID.m, GRID.l))
    spec = ObservationSpec(0.05, np.linspace(0.0, 50.0, 73))
    observed = observe(batch, GRID, spec)
    assert observed.shape == (3, 73)
    for b in range(3):
        assert np.array_equal(observed[b], observe(batch[b], GRID, spec))


@pytest.mark.parametrize("depth", [0.0, 0.1, -0.01, 0.2])
def test_depth_outside_interior_is_rejected(depth: float) -> None:
    with pytest.raises(DataError, match="depth"):
        observe(np.zeros((GRID.m, GRID.l)), GRID, ObservationSpec(depth, np.array([0.0, 1.0])))


def test_stamp_beyond_duration_is_rejected() -> None:
    with pytest.raises(DataError, match="stamps"):
        observe(np.zeros((GRID.m, GRID.l)), GRID, ObservationSpec.core(GRID.L, np.array([0.0, 50.5])))


def test_field_shape_must_match_grid() -> None:
    with pytest.raises(DataError, match="shape"):
        observe(np.zeros((GRID.m - 1, GRID.l)), GRID, ObservationSpec.core(GRID.L, np.array([0.0])))


def test_observed_range_spans_all_cores() -> None:
    assert observed_range([np.array([500.0, 420.0]), np.array([610.0, 455.5])]) == (420.0, 610.0)
    with pytest.raises(DataError):
        observed_range([])
