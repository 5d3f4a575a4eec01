"""
Box-constrained Levenberg-Marquardt with trust-region radius control.
The LM step moves only the variables not held at a bound, then is projected
onto the box; when the projection bites, a projected gradient (Cauchy) step
competes with it.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List

import numpy as np
from tqdm import tqdm

from heat_inverse.shared.errors import AllStepsRejected, SolverError

logger = logging.getLogger(__name__)

# Minimum ratio of actual to predicted reduction for a step to be accepted
ACCEPT_RATIO: float = 1e-4
# Reductions below this fraction of the objective are rounding noise
ROUNDING_FLOOR: float = float(np.finfo(float).eps)


class TerminationReason(str, Enum):
    GRADIENT = "gradient_tolerance"
    STEP = "step_tolerance"
    FUNCTION = "function_tolerance"
    MAX_ITERATIONS = "max_iterations"

    @property
    def converged(self) -> bool:
        return self is not TerminationReason.MAX_ITERATIONS


@dataclass
class IterationRecord:
    iteration: int
    objective: float
    step_norm: float
    gradient_norm: float
    trust_radius: float
    accepted: bool


@dataclass
class LeastSquaresResult:
    x: np.ndarray
    residual: np.ndarray
    jacobian: np.ndarray
    objective: float
    initial_objective: float
    reason: TerminationReason
    iterations: int
    trace: List[IterationRecord] = field(default_factory=list)


def projected_gradient_norm(x: np.ndarray, gradient: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> float:
    """inf-norm of P(x - g) - x, zero exactly at box-constrained stationary points."""
    return float(np.max(np.abs(np.clip(x - gradient, lower, upper) - x))) if x.size else 0.0


def _lm_step(jac: np.ndarray, r: np.ndarray, mu: float) -> np.ndarray:
    """Solve min ||J s + r||^2 + mu ||s||^2 through the augmented least-squares system."""
    n = jac.shape[1]
    a = np.vstack([jac, np.sqrt(mu) * np.eye(n)])
    b = np.concatenate([-r, np.zeros(n)])
    return np.linalg.lstsq(a, b, rcond=None)[0]


def _free_variables(x: np.ndarray, gradient: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    """Mask of variables not held at a bound by a gradient pointing out of the box."""
    held = ((x <= lower) & (gradient > 0.0)) | ((x >= upper) & (gradient < 0.0))
    return ~held


def _cauchy_step(jac: np.ndarray, gradient: np.ndarray, radius: float) -> np.ndarray:
    g_norm = np.linalg.norm(gradient)
    if g_norm == 0.0:
        return np.zeros_like(gradient)
    jg = jac @ gradient
    curvature = float(jg @ jg)
    length = (g_norm * g_norm) / curvature if curvature > 0.0 else radius / g_norm
    return -min(length, radius / g_norm) * gradient


def projected_levenberg_marquardt(
    fun: Callable[[np.ndarray], np.ndarray],
    jac: Callable[[np.ndarray, np.ndarray], np.ndarray],
    x0: np.ndarray,
    lower: np.ndarray,
    upper: np.ndarray,
    ftol: float,
    xtol: float,
    gtol: float,
    max_iterations: int,
    progress: bool = False,
) -> LeastSquaresResult:
    """
    Minimize ||fun(x)||^2 subject to lower <= x <= upper.
    - fun may raise SolverError on a trial point; that trial counts as a rejected step
    - every iterate is feasible; the accepted objective never increases
    - gtol is relative to the projected gradient at x0 (floored at 1)
    """
    x = np.clip(np.asarray(x0, dtype=float), lower, upper)
    r = fun(x)
    f = float(r @ r)
    f0 = f
    J = jac(x, r)

    radius = max(float(np.linalg.norm(x)), 1.0)
    diag = np.sum(J * J, axis=0)
    mu = 1e-3 * float(diag.max()) if diag.size and diag.max() > 0.0 else 1e-3
    nu = 2.0
    accepted_any = False

    gradient = J.T @ r
    g0 = projected_gradient_norm(x, gradient, lower, upper)
    trace = [IterationRecord(0, f, 0.0, g0, radius, True)]
    iteration = 0
    reason = TerminationReason.MAX_ITERATIONS

    with tqdm(total=max_iterations, desc="Fitting", unit="iter", disable=not progress) as bar:
        while True:
            gradient = J.T @ r
            g_norm = projected_gradient_norm(x, gradient, lower, upper)
            if f == 0.0 or g_norm <= gtol * max(1.0, g0):
                reason = TerminationReason.GRADIENT
                break
            if iteration >= max_iterations:
                reason = TerminationReason.MAX_ITERATIONS
                break
            iteration += 1
            bar.update(1)

            # Levenberg-Marquardt step on the free variables, truncated to the trust region and projected
            free = _free_variables(x, gradient, lower, upper)
            step = np.zeros_like(x)
            step[free] = _lm_step(J[:, free], r, mu)
            step_len = float(np.linalg.norm(step))
            if step_len > radius:
                step *= radius / step_len
            trial = np.clip(x + step, lower, upper)
            if not np.array_equal(trial, x + step):
                cauchy = np.clip(x + _cauchy_step(J, gradient, radius), lower, upper)
                lm_model = np.linalg.norm(r + J @ (trial - x))
                cauchy_model = np.linalg.norm(r + J @ (cauchy - x))
                if cauchy_model < lm_model:
                    trial = cauchy
            step = trial - x
            step_norm = float(np.linalg.norm(step))
            # reductions from differences, not from subtracting two nearly equal squared norms
            js = J @ step
            predicted = -float(js @ (2.0 * r + js))

            if step_norm <= xtol * (xtol + float(np.linalg.norm(x))):
                trace.append(IterationRecord(iteration, f, step_norm, g_norm, radius, False))
                reason = TerminationReason.STEP
                break

            try:
                r_trial = fun(trial)
                f_trial = float(r_trial @ r_trial)
                if not np.isfinite(f_trial):
                    raise SolverError("non-finite objective")
            except SolverError as err:
                logger.debug("Iteration %d: trial point failed (%s)", iteration, err)
                r_trial, f_trial = None, np.inf

            if r_trial is None:
                actual = -np.inf
            else:
                actual = float((r - r_trial) @ (r + r_trial))
                floor = ROUNDING_FLOOR * f
                if predicted <= floor and abs(actual) <= floor:
                    trace.append(IterationRecord(iteration, f, step_norm, g_norm, radius, False))
                    reason = TerminationReason.FUNCTION
                    break
            rho = actual / predicted if predicted > 0.0 else -1.0

            if r_trial is not None and rho > ACCEPT_RATIO and f_trial > f:
                # reduction exists only below the resolution of the objective
                trace.append(IterationRecord(iteration, f, step_norm, g_norm, radius, False))
                reason = TerminationReason.FUNCTION
                break
            if r_trial is not None and rho > ACCEPT_RATIO:
                x, r, f_prev, f = trial, r_trial, f, f_trial
                J = jac(x, r)
                accepted_any = True
                mu *= max(1.0 / 3.0, 1.0 - (2.0 * rho - 1.0) ** 3)
                nu = 2.0
                if rho > 0.75:
                    radius = max(radius, 3.0 * step_norm)
                elif rho < 0.25:
                    radius = 0.5 * step_norm
                trace.append(IterationRecord(iteration, f, step_norm, g_norm, radius, True))
                logger.debug("Iteration %d: accepted, objective %.6g, rho %.3f", iteration, f, rho)
                if actual <= ftol * f_prev:
                    reason = TerminationReason.FUNCTION
                    break
            else:
                mu *= nu
                nu *= 2.0
                radius = 0.25 * step_norm
                trace.append(IterationRecord(iteration, f, step_norm, g_norm, radius, False))
                logger.debug("Iteration %d: rejected (rho %.3g), radius -> %.3g", iteration, rho, radius)
                if radius <= xtol * (xtol + float(np.linalg.norm(x))):
                    if not accepted_any:
                        raise AllStepsRejected(f"trust region collapsed after {iteration} rejected steps", trace)
                    reason = TerminationReason.STEP
                    break

    logger.info("Optimizer stopped after %d iterations: %s (objective %.6g -> %.6g)",
                iteration, reason.value, f0, f)
    return LeastSquaresResult(x, r, J, f, f0, reason, iteration, trace)
