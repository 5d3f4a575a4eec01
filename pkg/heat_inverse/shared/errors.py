"""
Exception hierarchy shared by all stages.
"""

from typing import List, Optional, Tuple


class HeatInverseError(Exception):
    """Root of all errors raised by heat_inverse."""


class ConfigError(HeatInverseError):
    """Invalid run configuration (bad key, value or missing file)."""

    def __init__(self, message: str, key: Optional[str] = None):
        self.key = key
        super().__init__(f"{key}: {message}" if key else message)


class DataError(HeatInverseError, ValueError):
    """Invalid input data; names the file and line when known."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)


class SolverError(HeatInverseError):
    """Numerical failure in the forward solve or the optimizer."""

    def __init__(self, message: str):
        self.message = message
        self.experiment: Optional[int] = None
        self.column: Optional[int] = None
        super().__init__(message)

    def tag(self, experiment: Optional[int] = None, column: Optional[int] = None) -> "SolverError":
        """Attach the experiment / Jacobian column the failure came from."""
        if experiment is not None:
            self.experiment = experiment
        if column is not None:
            self.column = column
        return self

    def __str__(self) -> str:
        tags = []
        if self.experiment is not None:
            tags.append(f"experiment {self.experiment}")
        if self.column is not None:
            tags.append(f"column {self.column}")
        return f"{self.message} [{', '.join(tags)}]" if tags else self.message


class StabilityViolation(SolverError):
    """Time step exceeds the explicit-scheme stability bound."""

    def __init__(self, dt: float, bound: float):
        self.dt = dt
        self.bound = bound
        super().__init__(f"time step {dt!r} s exceeds stability bound {bound!r} s")


class NonFiniteTemperature(SolverError):
    """The marching scheme produced inf/nan."""

    def __init__(self, position: Tuple[int, int], member: int = 0):
        self.position = position
        self.member = member
        i, j = position
        super().__init__(f"non-finite temperature at time index {i}, space index {j} (batch member {member})")


class InitialPointInfeasible(SolverError):
    """Initial parameter vector violates the box bounds."""


class AllStepsRejected(SolverError):
    """Trust region collapsed before any step was accepted."""

    def __init__(self, message: str, trace: Optional[List] = None):
        self.trace = trace or []
        super().__init__(message)
