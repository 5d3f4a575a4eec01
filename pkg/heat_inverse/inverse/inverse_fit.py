"""
Recover (k, C) node values from core measurements; only k/C is identifiable.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from heat_inverse.inverse.jacobian import experiment_grids, jacobian_fd, residuals
from heat_inverse.inverse.optimizer import (
    IterationRecord,
    TerminationReason,
    projected_levenberg_marquardt,
)
from heat_inverse.inverse.problem import FitProblem
from heat_inverse.observation import observed_range
from heat_inverse.shared.config import LAMBDA_SAMPLES, UNCONSTRAINED_THRESHOLD
from heat_inverse.shared.errors import InitialPointInfeasible
from heat_inverse.solver import Material, ParamVector

logger = logging.getLogger(__name__)


@dataclass
class FitResult:
    """Optimized parameters with diagnostics and the identifiable diffusivity."""
    p_opt: ParamVector
    p0: ParamVector
    objective: float
    initial_objective: float
    residuals: np.ndarray
    experiment_rms: List[float]
    trace: List[IterationRecord]
    termination: TerminationReason
    iterations: int
    u_samples: np.ndarray
    lambda_opt: np.ndarray
    observed_range: Tuple[float, float]
    unconstrained_nodes: List[int]
    outside_nodes: List[int]
    singular_values: np.ndarray
    flat_direction_cosine: float

    @property
    def converged(self) -> bool:
        return self.termination.converged


def diffusivity(p: Material, u: np.ndarray) -> np.ndarray:
    """Pointwise lambda(u) = k(u)/C(u)."""
    u = np.asarray(u, dtype=float)
    return np.asarray(p.conductivity(u), dtype=float) / np.asarray(p.capacity(u), dtype=float)


def lambda_error(p: Material, reference: Material, interval: Tuple[float, float],
                 samples: int = LAMBDA_SAMPLES) -> Tuple[float, float]:
    """Max and mean relative diffusivity error of p against reference on a dense grid of interval."""
    u = np.linspace(interval[0], interval[1], samples)
    ref = diffusivity(reference, u)
    rel = np.abs(diffusivity(p, u) - ref) / ref
    return float(rel.max()), float(rel.mean())


def scaling_diagnostics(jacobian: np.ndarray, p: ParamVector,
                        threshold: float = UNCONSTRAINED_THRESHOLD) -> Dict:
    """
    Work in relative coordinates J diag(p), where the scaling ray alpha*p is the all-ones direction.
    - singular values and |cos| between the flattest right singular vector and that ray
    - nodes whose k and C columns are both negligible
    """
    rel = jacobian * p.as_array()
    _, singular, vt = np.linalg.svd(rel, full_matrices=False)
    ray = np.ones(rel.shape[1]) / np.sqrt(rel.shape[1])
    cosine = float(abs(vt[-1] @ ray))

    n = p.partition.n
    norms = np.linalg.norm(rel, axis=0)
    total = float(np.linalg.norm(rel))
    flat = norms <= threshold * total
    unconstrained = [i for i in range(n) if flat[i] and flat[n + i]]
    return {"singular_values": singular, "cosine": cosine, "unconstrained": unconstrained}


def fit(p0: ParamVector, problem: FitProblem) -> FitResult:
    """
    Bound-constrained least-squares fit starting from p0.
    The optimizer sees x = p / p0 so k (~1e1) and C (~1e6) are comparably scaled;
    with pin_scale one coordinate stays at its initial value.
    """
    if p0.partition != problem.partition:
        raise InitialPointInfeasible("initial guess uses a different partition than the problem")
    start = p0.as_array()
    if np.any(start < problem.lower) or np.any(start > problem.upper):
        bad = int(np.argmax((start < problem.lower) | (start > problem.upper)))
        raise InitialPointInfeasible(f"initial parameter {bad} = {start[bad]!r} outside "
                                     f"[{problem.lower[bad]!r}, {problem.upper[bad]!r}]")

    options = problem.options
    free = problem.free_indices()
    scale = start.copy()
    partition = problem.partition

    def to_params(x: np.ndarray) -> ParamVector:
        full = start.copy()
        full[free] = x * scale[free]
        return ParamVector.from_array(partition, full)

    executor = ThreadPoolExecutor(max_workers=options.jobs) if options.jobs > 1 else None
    grid_memo: Dict[bytes, list] = {}
    try:
        def fun(x: np.ndarray) -> np.ndarray:
            p = to_params(x)
            grids = experiment_grids(p, problem)
            r = residuals(p, problem, grids, executor)
            grid_memo.clear()
            grid_memo[x.tobytes()] = grids
            return r

        def jac(x: np.ndarray, r: np.ndarray) -> np.ndarray:
            p = to_params(x)
            grids = grid_memo.get(x.tobytes()) or experiment_grids(p, problem)
            columns = jacobian_fd(p, problem, grids, r0=r, scale=scale, columns=free,
                                  executor=executor, jobs=options.jobs)
            return columns * scale[free]

        outcome = projected_levenberg_marquardt(
            fun, jac, np.ones(free.size),
            problem.lower[free] / scale[free], problem.upper[free] / scale[free],
            options.ftol, options.xtol, options.gtol, options.max_iterations, options.progress,
        )

        p_opt = to_params(outcome.x)
        final_grids = grid_memo.get(outcome.x.tobytes()) or experiment_grids(p_opt, problem)
        full_jac = jacobian_fd(p_opt, problem, final_grids, r0=outcome.residual, scale=scale,
                               executor=executor, jobs=options.jobs)
    finally:
        if executor is not None:
            executor.shutdown()

    diagnostics = scaling_diagnostics(full_jac, p_opt)
    u_range = observed_range([exp.u_core for exp in problem.experiments])
    outside = [i for i, u in enumerate(partition.nodes) if u < u_range[0] or u > u_range[1]]
    if diagnostics["unconstrained"]:
        logger.info("Unconstrained nodes (negligible Jacobian columns): %s", diagnostics["unconstrained"])

    offsets = np.concatenate([[0], np.cumsum(problem.sizes)])
    rms = [float(np.sqrt(np.mean(outcome.residual[offsets[i]:offsets[i + 1]] ** 2))) for i in range(problem.M)]

    u_samples = np.linspace(partition.u_min, partition.u_max, LAMBDA_SAMPLES)
    return FitResult(
        p_opt=p_opt,
        p0=p0,
        objective=outcome.objective,
        initial_objective=outcome.initial_objective,
        residuals=outcome.residual,
        experiment_rms=rms,
        trace=outcome.trace,
        termination=outcome.reason,
        iterations=outcome.iterations,
        u_samples=u_samples,
        lambda_opt=diffusivity(p_opt, u_samples),
        observed_range=u_range,
        unconstrained_nodes=diagnostics["unconstrained"],
        outside_nodes=outside,
        singular_values=diagnostics["singular_values"],
        flat_direction_cosine=diagnostics["cosine"],
    )
