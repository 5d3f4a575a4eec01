"""
Residual assembly and forward-difference Jacobian.
Per-experiment solves and Jacobian column batches are independent and may run on an
executor; results are always assembled in experiment / column order.
"""

from concurrent.futures import Executor
from typing import List, Optional, Sequence, Tuple

import numpy as np

from heat_inverse.inverse.problem import FitProblem
from heat_inverse.observation import ObservationSpec, observe
from heat_inverse.shared.errors import NonFiniteTemperature, SolverError
from heat_inverse.shared.utils import ordered_map, split_evenly
from heat_inverse.solver import Grid, ParamVector, resample_experiment, solve_forward_batch

SQRT_EPS: float = float(np.sqrt(np.finfo(float).eps))


def experiment_grids(p: ParamVector, problem: FitProblem) -> List[Grid]:
    """Solver grid of every experiment for the candidate p."""
    grids = []
    for index, exp in enumerate(problem.experiments):
        try:
            grids.append(problem.policy.grid_for(exp, p))
        except SolverError as err:
            raise err.tag(experiment=index)
    return grids


def _simulated_core(params: Sequence[ParamVector], problem: FitProblem, index: int, grid: Grid) -> np.ndarray:
    """Weighted residual rows of one experiment for a batch of parameter vectors, shape (B, m_i)."""
    exp = problem.experiments[index]
    resampled = resample_experiment(exp, grid)
    fields = solve_forward_batch(params, resampled, grid)
    simulated = observe(fields, grid, ObservationSpec(problem.depth, exp.core_times))
    return (simulated - exp.u_core) * np.sqrt(problem.weight(index))


def residuals(p: ParamVector, problem: FitProblem, grids: Optional[Sequence[Grid]] = None,
              executor: Optional[Executor] = None) -> np.ndarray:
    """
    Concatenated residuals Q F_i(p) - u_core_i over all experiments.
    J_M(p) is the squared Euclidean norm of the result.
    """
    grids = list(grids) if grids is not None else experiment_grids(p, problem)

    def block(index: int) -> np.ndarray:
        try:
            return _simulated_core([p], problem, index, grids[index])[0]
        except SolverError as err:
            raise err.tag(experiment=index)

    return np.concatenate(ordered_map(block, range(problem.M), executor))


def objective(p: ParamVector, problem: FitProblem, grids: Optional[Sequence[Grid]] = None) -> float:
    """J_M(p) = ||residuals(p)||^2."""
    r = residuals(p, problem, grids)
    return float(r @ r)


def fd_steps(p: np.ndarray, scale: Optional[np.ndarray] = None) -> np.ndarray:
    """Relative forward-difference steps h_j = sqrt(eps) * max(|p_j|, scale_j)."""
    scale = np.abs(p) if scale is None else np.abs(np.asarray(scale, dtype=float))
    return SQRT_EPS * np.maximum(np.abs(p), scale)


def jacobian_fd(p: ParamVector, problem: FitProblem, grids: Optional[Sequence[Grid]] = None,
                r0: Optional[np.ndarray] = None, scale: Optional[np.ndarray] = None,
                columns: Optional[Sequence[int]] = None, executor: Optional[Executor] = None,
                jobs: int = 1) -> np.ndarray:
    """
    Forward-difference Jacobian of the residuals, one column per requested parameter
    (all 2n by default). The grids of p are reused for every perturbed column so that
    columns carry no discretization jumps.
    """
    grids = list(grids) if grids is not None else experiment_grids(p, problem)
    base = p.as_array()
    columns = list(range(base.size)) if columns is None else [int(c) for c in columns]
    if r0 is None:
        r0 = residuals(p, problem, grids, executor)

    steps = fd_steps(base, scale)
    perturbed = {}
    actual_steps = {}
    for col in columns:
        shifted = base.copy()
        shifted[col] = base[col] + steps[col]
        actual_steps[col] = shifted[col] - base[col]
        perturbed[col] = ParamVector.from_array(p.partition, shifted)

    offsets = np.concatenate([[0], np.cumsum(problem.sizes)])
    chunks = split_evenly(columns, jobs)
    tasks: List[Tuple[int, List[int]]] = [(index, chunk) for index in range(problem.M) for chunk in chunks]

    def run(task: Tuple[int, List[int]]) -> np.ndarray:
        index, chunk = task
        try:
            return _simulated_core([perturbed[c] for c in chunk], problem, index, grids[index])
        except SolverError as err:
            member = err.member if isinstance(err, NonFiniteTemperature) else err.column
            if member is None and len(chunk) == 1:
                member = 0
            raise err.tag(experiment=index, column=chunk[member] if member is not None else None)

    jac = np.empty((problem.total_size, len(columns)))
    position = {col: k for k, col in enumerate(columns)}
    for (index, chunk), rows in zip(tasks, ordered_map(run, tasks, executor)):
        lo, hi = offsets[index], offsets[index + 1]
        for b, col in enumerate(chunk):
            jac[lo:hi, position[col]] = (rows[b] - r0[lo:hi]) / actual_steps[col]
    return jac
