"""
The three batch workflows behind the command line: simulate, forward, fit.
"""

import logging
from dataclasses import replace
from enum import IntEnum
from json import dump, load
from os import makedirs, path
from typing import Dict, List, Optional, Tuple

import numpy as np

from heat_inverse.cli_io.csv_io import (
    load_experiment_csv,
    load_params_csv,
    write_curves_csv,
    write_experiment_csv,
    write_field_csv,
    write_lambda_csv,
    write_params_csv,
    write_series_csv,
    write_trace_csv,
)
from heat_inverse.cli_io.run_config import RunConfig
from heat_inverse.inverse import FitOptions, FitProblem, FitResult, GridPolicy, diffusivity, fit, lambda_error
from heat_inverse.observation import ObservationSpec, observe
from heat_inverse.pchip import Partition
from heat_inverse.shared.errors import ConfigError
from heat_inverse.shared.utils import format_float
from heat_inverse.solver import Experiment, Grid, Material, ParamVector, max_stable_dt, resample_experiment, solve_forward
from heat_inverse.synthetic import (
    DEFAULT_TRIPLETS,
    SIMULATED_STEEL,
    SyntheticScenario,
    check_reference_resolution,
    generate_data,
)

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


class ExitCode(IntEnum):
    SUCCESS = 0
    CONFIG_ERROR = 2
    DATA_ERROR = 3
    SOLVER_ERROR = 4
    NOT_CONVERGED = 5

# ---------------------------------------------------------
#   Shared helpers
# ---------------------------------------------------------

def scenario_from_config(config: RunConfig) -> SyntheticScenario:
    """Synthetic scenario: the default triplet family, cycled to experiment_count runs."""
    triplets = tuple(replace(DEFAULT_TRIPLETS[i % len(DEFAULT_TRIPLETS)], style=config.triplet_style)
                     for i in range(config.experiment_count))
    reference_l = config.reference_l or 2 * (config.l - 1) + 1
    return SyntheticScenario(
        triplets=triplets,
        L=config.L,
        T=config.T,
        stamp_interval=config.stamp_interval,
        reference_l=reference_l,
        dt_safety=config.dt_safety,
        noise=config.noise,
        seed=config.seed,
    )


def read_manifest(manifest_path: str) -> Dict:
    with open(manifest_path, "r", encoding="utf-8") as manifest_file:
        return load(manifest_file)


def _manifest_paths(manifest_path: str, manifest: Dict, key: str) -> List[str]:
    base = path.dirname(manifest_path)
    return [path.join(base, name) for name in manifest.get(key, [])]


def load_experiments(config: RunConfig) -> List[Experiment]:
    """Experiments named in the config, or those listed in the manifest."""
    experiment_paths = list(config.experiments)
    profile_paths: List[Optional[str]] = list(config.profiles)
    if not experiment_paths and config.manifest is not None:
        manifest = read_manifest(config.manifest)
        experiment_paths = _manifest_paths(config.manifest, manifest, "experiments")
        profile_paths = _manifest_paths(config.manifest, manifest, "profiles")
    if not experiment_paths:
        raise ConfigError("no experiment files to load", "experiments")
    if not profile_paths:
        profile_paths = [None] * len(experiment_paths)

    experiments = []
    for exp_path, profile_path in zip(experiment_paths, profile_paths):
        exp = load_experiment_csv(exp_path, profile_path, L=config.L)
        exp.check_corners(config.corner_tolerance)
        experiments.append(exp)
    return experiments


def reference_material(config: RunConfig) -> Optional[Material]:
    """Known generating material when the config points at a scenario manifest."""
    if config.manifest is None:
        return None
    manifest = read_manifest(config.manifest)
    if manifest.get("material") == SIMULATED_STEEL.name:
        return SIMULATED_STEEL
    return None


def initial_params(config: RunConfig) -> ParamVector:
    """Initial guess from a parameter file, or constants k0/C0 on the configured partition."""
    if config.initial_params is not None:
        return load_params_csv(config.initial_params)
    return ParamVector.constant(Partition.uniform(config.u_min, config.u_max, config.n), config.k0, config.C0)


def grid_policy(config: RunConfig) -> GridPolicy:
    return GridPolicy(L=config.L, l=config.l, auto_dt=config.auto_dt,
                      dt=None if config.auto_dt else config.dt, dt_safety=config.dt_safety)

# ---------------------------------------------------------
#   simulate
# ---------------------------------------------------------

def run_simulate(config: RunConfig) -> ExitCode:
    """Write experiment/profile/clean-core CSVs and a manifest for a seeded synthetic scenario."""
    scenario = scenario_from_config(config)
    check_reference_resolution(scenario, config.l)
    data = generate_data(scenario, SIMULATED_STEEL, jobs=config.jobs, progress=config.progress)

    makedirs(config.out_dir, exist_ok=True)
    names: Dict[str, List[str]] = {"experiments": [], "profiles": [], "clean": []}
    for index, (exp, clean) in enumerate(zip(data.experiments, data.clean_cores)):
        exp_name, profile_name, clean_name = f"experiment_{index}.csv", f"profile_{index}.csv", f"clean_{index}.csv"
        write_experiment_csv(exp, path.join(config.out_dir, exp_name), path.join(config.out_dir, profile_name))
        write_series_csv(path.join(config.out_dir, clean_name), exp.times, clean)
        names["experiments"].append(exp_name)
        names["profiles"].append(profile_name)
        names["clean"].append(clean_name)

    manifest = {
        "material": SIMULATED_STEEL.name,
        "scenario": scenario.to_dict(),
        "reference_grid": {"T": data.grid.T, "L": data.grid.L, "m": data.grid.m, "l": data.grid.l},
        **names,
    }
    with open(path.join(config.out_dir, MANIFEST_NAME), "w", encoding="utf-8", newline="\n") as manifest_file:
        dump(manifest, manifest_file, indent=2, sort_keys=True)
        manifest_file.write("\n")
    logger.info("Wrote %d synthetic experiments to %s", scenario.M, config.out_dir)
    return ExitCode.SUCCESS

# ---------------------------------------------------------
#   forward
# ---------------------------------------------------------

def forward_grid(config: RunConfig, exp: Experiment, material: Material) -> Tuple[Grid, float]:
    """Grid for a forward run and the stability bound it was checked against."""
    dz = config.L / (config.l - 1)
    bound = max_stable_dt(material, dz)
    dt = config.dt_safety * bound if config.auto_dt else config.dt
    return Grid.from_dt(exp.duration, config.L, config.l, dt), bound


def run_forward(config: RunConfig) -> ExitCode:
    """Solve every experiment for the configured material; write fields and observed cores."""
    material: Material = SIMULATED_STEEL if config.material == "simulated" else initial_params(config)
    experiments = load_experiments(config)
    makedirs(config.out_dir, exist_ok=True)

    for index, exp in enumerate(experiments):
        grid, bound = forward_grid(config, exp, material)
        print(f"[Forward] {exp.name}: stability bound {format_float(bound)} s, dt {format_float(grid.dt)} s "
              f"(m={grid.m}, l={grid.l})")
        field = solve_forward(material, resample_experiment(exp, grid), grid)
        core = observe(field, grid, ObservationSpec.core(grid.L, exp.times))
        write_field_csv(path.join(config.out_dir, f"field_{index}.csv"), field.values, grid)
        write_series_csv(path.join(config.out_dir, f"core_{index}.csv"), exp.times, core)
    return ExitCode.SUCCESS

# ---------------------------------------------------------
#   fit
# ---------------------------------------------------------

def build_problem(config: RunConfig, experiments: List[Experiment], partition: Partition) -> FitProblem:
    n = partition.n
    lower = np.concatenate([np.full(n, config.k_lower), np.full(n, config.C_lower)])
    upper = np.concatenate([np.full(n, config.k_upper), np.full(n, config.C_upper)])
    options = FitOptions(ftol=config.ftol, xtol=config.xtol, gtol=config.gtol,
                         max_iterations=config.max_iterations, pin_scale=config.pin_scale,
                         jobs=config.jobs, progress=config.progress)
    return FitProblem(tuple(experiments), partition, grid_policy(config), lower, upper, options,
                      weights=config.weights or None)


def write_report(file_path: str, result: FitResult, reference: Optional[Material]) -> str:
    """Plain-text summary of the fit."""
    lines = [
        f"termination: {result.termination.value}",
        f"converged: {'yes' if result.converged else 'no'}",
        f"iterations: {result.iterations}",
        f"objective_initial: {format_float(result.initial_objective)}",
        f"objective_final: {format_float(result.objective)}",
        f"observed_range_C: {format_float(result.observed_range[0])} {format_float(result.observed_range[1])}",
        f"unconstrained_nodes: {' '.join(str(i) for i in result.unconstrained_nodes) or 'none'}",
        f"nodes_outside_observed_range: {' '.join(str(i) for i in result.outside_nodes) or 'none'}",
        f"flat_direction_cosine: {format_float(result.flat_direction_cosine)}",
    ]
    for index, rms in enumerate(result.experiment_rms):
        lines.append(f"rms_residual_{index}_C: {format_float(rms)}")
    if reference is not None:
        max_rel, mean_rel = lambda_error(result.p_opt, reference, result.observed_range)
        lines.append(f"lambda_max_relative_error: {format_float(max_rel)}")
        lines.append(f"lambda_mean_relative_error: {format_float(mean_rel)}")
    with open(file_path, "w", encoding="utf-8", newline="\n") as report_file:
        report_file.write("\n".join(lines) + "\n")
    return file_path


def write_fit_artifacts(out_dir: str, result: FitResult, reference: Optional[Material]) -> List[str]:
    makedirs(out_dir, exist_ok=True)
    u = result.u_samples
    lambda_true = diffusivity(reference, u) if reference is not None else None
    return [
        write_params_csv(path.join(out_dir, "params_opt.csv"), result.p_opt),
        write_lambda_csv(path.join(out_dir, "lambda.csv"), u, result.lambda_opt, lambda_true),
        write_trace_csv(path.join(out_dir, "trace.csv"), result.trace),
        write_curves_csv(path.join(out_dir, "curves.csv"), u, result, reference),
        write_report(path.join(out_dir, "report.txt"), result, reference),
    ]


def run_fit(config: RunConfig) -> ExitCode:
    """Fit all experiments and write params_opt/lambda/trace/curves/report artifacts."""
    experiments = load_experiments(config)
    p0 = initial_params(config)
    problem = build_problem(config, experiments, p0.partition)
    result = fit(p0, problem)
    reference = reference_material(config)
    write_fit_artifacts(config.out_dir, result, reference)

    if not result.converged:
        logger.warning("Fit did not converge (%s) after %d iterations", result.termination.value, result.iterations)
        return ExitCode.NOT_CONVERGED
    logger.info("Fit converged (%s); artifacts in %s", result.termination.value, config.out_dir)
    return ExitCode.SUCCESS


WORKFLOWS = {"simulate": run_simulate, "forward": run_forward, "fit": run_fit}
