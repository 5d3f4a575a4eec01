"""
Twin-experiment data: fabricate cooling runs, solve them on a fine reference grid with
known coefficients, observe the core and add seeded uniform noise.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from heat_inverse.observation import ObservationSpec, observe
from heat_inverse.shared.config import (
    DT_SAFETY,
    DURATION,
    NOISE_HALF_WIDTH,
    REFERENCE_FACTOR,
    SEED,
    SPACE_NODES,
    STAMP_INTERVAL,
    THICKNESS,
)
from heat_inverse.shared.errors import DataError
from heat_inverse.shared.utils import ordered_map
from heat_inverse.solver import Experiment, Grid, Material, max_stable_dt, resample_experiment, solve_forward
from heat_inverse.synthetic.material import SIMULATED_STEEL
from heat_inverse.synthetic.triplets import TripletSpec, make_triplet

logger = logging.getLogger(__name__)

# Three runs with different cooling intensity, asymmetry and initial bulge
DEFAULT_TRIPLETS: Tuple[TripletSpec, ...] = (
    TripletSpec(plateau=780.0, cooling_time=25.0, minimum=350.0, recovery=450.0),
    TripletSpec(plateau=800.0, cooling_time=20.0, minimum=400.0, recovery=500.0, asymmetry=30.0, bulge=10.0),
    TripletSpec(plateau=760.0, cooling_time=30.0, minimum=300.0, recovery=420.0, asymmetry=-20.0, bulge=5.0),
)


@dataclass(frozen=True)
class SyntheticScenario:
    """
    Everything needed to regenerate a synthetic dataset bit for bit.
    - reference_l: space nodes of the data-generating grid (dt from the stability bound)
    - stamp_interval: spacing of the measured series
    """
    triplets: Tuple[TripletSpec, ...] = DEFAULT_TRIPLETS
    L: float = THICKNESS
    T: float = DURATION
    stamp_interval: float = STAMP_INTERVAL
    reference_l: int = REFERENCE_FACTOR * (SPACE_NODES - 1) + 1
    dt_safety: float = DT_SAFETY
    noise: float = NOISE_HALF_WIDTH
    seed: int = SEED

    def __post_init__(self) -> None:
        if len(self.triplets) < 1:
            raise DataError("scenario needs at least one experiment")
        if self.noise < 0.0:
            raise DataError(f"noise half-width must be non-negative, got {self.noise}")
        if not 0.0 < self.stamp_interval <= self.T:
            raise DataError(f"stamp interval {self.stamp_interval} must lie in (0, T]")
        if not 0.0 < self.dt_safety <= 1.0:
            raise DataError(f"dt_safety must lie in (0, 1], got {self.dt_safety}")

    @property
    def M(self) -> int:
        return len(self.triplets)

    @property
    def stamps(self) -> np.ndarray:
        count = int(round(self.T / self.stamp_interval))
        return np.linspace(0.0, self.T, count + 1)

    def reference_grid(self, material: Material) -> Grid:
        """Fine grid satisfying the stability bound of the generating material."""
        dz = self.L / (self.reference_l - 1)
        return Grid.from_dt(self.T, self.L, self.reference_l, self.dt_safety * max_stable_dt(material, dz))

    def to_dict(self) -> Dict:
        return {
            "triplets": [spec.to_dict() for spec in self.triplets],
            "L": self.L,
            "T": self.T,
            "stamp_interval": self.stamp_interval,
            "reference_l": self.reference_l,
            "dt_safety": self.dt_safety,
            "noise": self.noise,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "SyntheticScenario":
        data = dict(data)
        data["triplets"] = tuple(TripletSpec(**spec) for spec in data["triplets"])
        return cls(**data)


@dataclass
class SyntheticData:
    """Noisy experiments plus the clean core series they were made from."""
    experiments: List[Experiment]
    clean_cores: List[np.ndarray]
    grid: Grid
    scenario: SyntheticScenario = field(repr=False)

    def __iter__(self):
        return iter(self.experiments)

    def __len__(self) -> int:
        return len(self.experiments)


def check_reference_resolution(scenario: SyntheticScenario, fit_l: int, factor: int = REFERENCE_FACTOR) -> None:
    """Reference grid must be at least `factor` times finer in dz than the fitting grid."""
    fit_dz = scenario.L / (fit_l - 1)
    ref_dz = scenario.L / (scenario.reference_l - 1)
    if ref_dz * factor > fit_dz * (1.0 + 1e-12):
        raise DataError(f"reference grid dz={ref_dz} is not {factor}x finer than fitting dz={fit_dz}")


def uniform_noise(seed: int, index: int, size: int, half_width: float) -> np.ndarray:
    """i.i.d. uniform(-w, w) noise from the (seed, index) sub-stream."""
    rng = np.random.default_rng([seed, index])
    return rng.uniform(-half_width, half_width, size)


def build_experiment(spec: TripletSpec, scenario: SyntheticScenario, index: int, profile_points: int = 201) -> Experiment:
    """Boundary series on the measurement stamps and a densely sampled initial profile."""
    stamps = scenario.stamps
    depths = np.linspace(0.0, scenario.L, profile_points)
    u_bottom, u_top, u_init = make_triplet(spec, stamps, depths)
    return Experiment(stamps, u_bottom, u_top, depths, u_init, name=f"experiment_{index}")


def generate_data(scenario: SyntheticScenario, material: Material = SIMULATED_STEEL,
                  grid: Optional[Grid] = None, jobs: int = 1, progress: bool = False) -> SyntheticData:
    """
    For every triplet: solve on the reference grid with the given material (exact formulas by
    default), observe at L/2 on the measurement stamps and add seeded uniform noise.
    Passing `grid` overrides the reference grid (e.g. to reproduce a fitting grid on purpose).
    """
    grid = grid or scenario.reference_grid(material)
    logger.info("Generating %d experiments on reference grid m=%d, l=%d (dt=%.4g s)",
                scenario.M, grid.m, grid.l, grid.dt)

    def one(index: int) -> Tuple[Experiment, np.ndarray]:
        exp = build_experiment(scenario.triplets[index], scenario, index)
        resampled = resample_experiment(exp, grid)
        field_ = solve_forward(material, resampled, grid)
        clean = observe(field_, grid, ObservationSpec.core(grid.L, exp.times))
        noisy = clean + uniform_noise(scenario.seed, index, clean.size, scenario.noise)
        return exp.with_core(noisy), clean

    indices = range(scenario.M)
    with tqdm(total=scenario.M, desc="Generating experiments", unit="exp", disable=not progress) as bar:
        def tracked(index: int) -> Tuple[Experiment, np.ndarray]:
            result = one(index)
            bar.update(1)
            return result

        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as executor:
                results = ordered_map(tracked, indices, executor)
        else:
            results = ordered_map(tracked, indices)

    experiments = [exp for exp, _ in results]
    clean = [core for _, core in results]
    return SyntheticData(experiments, clean, grid, scenario)

