from .material import k_sim, C_sim, SimulatedSteel, SIMULATED_STEEL
from .triplets import TripletSpec, make_triplet, boundary_curve
from .synthetic import (
    DEFAULT_TRIPLETS,
    SyntheticScenario,
    SyntheticData,
    generate_data,
    check_reference_resolution,
    uniform_noise,
    build_experiment,
)

__all__ = [
    "k_sim",
    "C_sim",
    "SimulatedSteel",
    "SIMULATED_STEEL",
    "TripletSpec",
    "make_triplet",
    "boundary_curve",
    "DEFAULT_TRIPLETS",
    "SyntheticScenario",
    "SyntheticData",
    "generate_data",
    "check_reference_resolution",
    "uniform_noise",
    "build_experiment",
]
