"""
CSV ingestion and emission.
- experiments: t_s,u_bottom_C,u_top_C,u_core_C (u_core_C optional / may be empty)
- initial profiles: z_m,u_C
- every float is written in its shortest round-trip form, UTF-8, LF line endings
"""

from os import makedirs, path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from heat_inverse.inverse import FitResult, IterationRecord
from heat_inverse.pchip import Partition
from heat_inverse.shared.errors import DataError
from heat_inverse.shared.utils import format_float
from heat_inverse.solver import Experiment, Grid, ParamVector, linear_profile

EXPERIMENT_COLUMNS = ("t_s", "u_bottom_C", "u_top_C")
CORE_COLUMN = "u_core_C"
PROFILE_COLUMNS = ("z_m", "u_C")
PARAM_COLUMNS = ("u_C", "k", "C")

# ---------------------------------------------------------
#   Reading
# ---------------------------------------------------------

def _read_frame(file_path: str, required: Sequence[str]) -> pd.DataFrame:
    """Read a CSV as strings and check the header. Data row r sits on file line r + 2."""
    if not path.isfile(file_path):
        raise DataError("file not found", file_path)
    try:
        frame = pd.read_csv(file_path, dtype=str, keep_default_na=False, skip_blank_lines=False, encoding="utf-8")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as err:
        raise DataError(f"unreadable CSV ({err})", file_path)
    frame.columns = [str(c).strip() for c in frame.columns]
    for column in required:
        if column not in frame.columns:
            raise DataError(f"missing column {column!r}", file_path, 1)
    if frame.empty:
        raise DataError("no data rows", file_path)
    return frame


def _numeric_column(frame: pd.DataFrame, column: str, file_path: str, allow_empty: bool = False) -> Optional[np.ndarray]:
    """Convert one column to floats; the first bad cell is reported with its line number."""
    cells = frame[column].str.strip()
    empty = cells == ""
    if allow_empty and empty.all():
        return None
    bad = ~np.isfinite(pd.to_numeric(cells, errors="coerce").to_numpy(dtype=float))
    if bad.any():
        row = int(np.argmax(bad))
        raise DataError(f"non-numeric value {frame[column].iloc[row]!r} in column {column!r}", file_path, row + 2)
    # to_numeric may be 1 ulp off; float() reads shortest-repr output back exactly
    return np.array(cells.to_list(), dtype=float)


def _check_increasing(values: np.ndarray, column: str, file_path: str) -> None:
    steps = np.diff(values)
    if np.any(steps <= 0.0):
        row = int(np.argmax(steps <= 0.0)) + 1
        raise DataError(f"column {column!r} is not strictly increasing", file_path, row + 2)


def load_profile_csv(file_path: str):
    """Initial profile (depths, temperatures)."""
    frame = _read_frame(file_path, PROFILE_COLUMNS)
    depths = _numeric_column(frame, "z_m", file_path)
    values = _numeric_column(frame, "u_C", file_path)
    _check_increasing(depths, "z_m", file_path)
    return depths, values


def load_experiment_csv(file_path: str, profile_path: Optional[str] = None, L: Optional[float] = None,
                        name: Optional[str] = None) -> Experiment:
    """
    Parse one experiment file (and optionally its initial profile file).
    Without a profile, the initial profile joins the two boundary values at t = 0 linearly over [0, L].
    """
    frame = _read_frame(file_path, EXPERIMENT_COLUMNS)
    times = _numeric_column(frame, "t_s", file_path)
    _check_increasing(times, "t_s", file_path)
    u_bottom = _numeric_column(frame, "u_bottom_C", file_path)
    u_top = _numeric_column(frame, "u_top_C", file_path)
    u_core = _numeric_column(frame, CORE_COLUMN, file_path, allow_empty=True) if CORE_COLUMN in frame.columns else None

    if profile_path is not None:
        depths, u_init = load_profile_csv(profile_path)
    elif L is not None:
        depths, u_init = linear_profile(u_bottom[0], u_top[0], L)
    else:
        raise DataError("no initial profile file and no thickness L to build one", file_path)

    label = name or path.splitext(path.basename(file_path))[0]
    return Experiment(times, u_bottom, u_top, depths, u_init, u_core=u_core, name=label)


def load_params_csv(file_path: str) -> ParamVector:
    """Parameter vector from u_C,k,C rows (u_C becomes the partition)."""
    frame = _read_frame(file_path, PARAM_COLUMNS)
    nodes = _numeric_column(frame, "u_C", file_path)
    _check_increasing(nodes, "u_C", file_path)
    return ParamVector(Partition(nodes), _numeric_column(frame, "k", file_path), _numeric_column(frame, "C", file_path))

# ---------------------------------------------------------
#   Writing
# ---------------------------------------------------------

def write_table(file_path: str, columns: Dict[str, Sequence], formatter: Callable = format_float) -> str:
    """Write equally long columns; the header is the dict order."""
    directory = path.dirname(file_path)
    if directory:
        makedirs(directory, exist_ok=True)
    frame = pd.DataFrame({name: [formatter(v) for v in values] for name, values in columns.items()})
    frame.to_csv(file_path, index=False, lineterminator="\n", encoding="utf-8")
    return file_path


def write_experiment_csv(exp: Experiment, file_path: str, profile_path: Optional[str] = None) -> str:
    columns = {"t_s": exp.times, "u_bottom_C": exp.u_bottom, "u_top_C": exp.u_top}
    if exp.u_core is not None:
        if not np.array_equal(exp.core_times, exp.times):
            raise DataError(f"{exp.name}: core stamps differ from boundary stamps; cannot share the t_s column")
        columns[CORE_COLUMN] = exp.u_core
    write_table(file_path, columns)
    if profile_path is not None:
        write_table(profile_path, {"z_m": exp.depths, "u_C": exp.u_init})
    return file_path


def write_series_csv(file_path: str, times: np.ndarray, values: np.ndarray, column: str = CORE_COLUMN) -> str:
    return write_table(file_path, {"t_s": times, column: values})


def write_field_csv(file_path: str, values: np.ndarray, grid: Grid) -> str:
    """Temperature matrix: one row per time node, one column per depth z_<m>."""
    columns = {"t_s": grid.times}
    for j, z in enumerate(grid.depths):
        columns[f"z_{format_float(z)}"] = values[:, j]
    return write_table(file_path, columns)


def write_params_csv(file_path: str, p: ParamVector) -> str:
    return write_table(file_path, {"u_C": p.partition.nodes, "k": p.k_values, "C": p.c_values})


def write_lambda_csv(file_path: str, u: np.ndarray, lambda_opt: np.ndarray,
                     lambda_true: Optional[np.ndarray] = None) -> str:
    columns = {"u_C": u, "lambda_opt": lambda_opt}
    if lambda_true is not None:
        columns["lambda_true"] = lambda_true
    return write_table(file_path, columns)


def write_curves_csv(file_path: str, u: np.ndarray, result: FitResult, reference=None) -> str:
    """Initial, optimized and (when known) exact k and C on a dense temperature grid."""
    columns = {
        "u_C": u,
        "k0": result.p0.conductivity(u),
        "C0": result.p0.capacity(u),
        "k_opt": result.p_opt.conductivity(u),
        "C_opt": result.p_opt.capacity(u),
    }
    if reference is not None:
        columns["k_true"] = reference.conductivity(u)
        columns["C_true"] = reference.capacity(u)
    return write_table(file_path, columns)


def _format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format_float(value)


def write_trace_csv(file_path: str, trace: List[IterationRecord]) -> str:
    columns = {
        "iteration": [rec.iteration for rec in trace],
        "objective": [rec.objective for rec in trace],
        "step_norm": [rec.step_norm for rec in trace],
        "gradient_norm": [rec.gradient_norm for rec in trace],
        "trust_radius": [rec.trust_radius for rec in trace],
        "accepted": [rec.accepted for rec in trace],
    }
    return write_table(file_path, columns, formatter=_format_cell)


def load_trace_csv(file_path: str) -> pd.DataFrame:
    frame = _read_frame(file_path, ("iteration", "objective", "gradient_norm", "trust_radius"))
    for column in frame.columns:
        frame[column] = _numeric_column(frame, column, file_path)
    return frame


def load_table_csv(file_path: str, required: Sequence[str]) -> Dict[str, np.ndarray]:
    """Generic numeric reader used for emitted artifacts (lambda, curves, series, fields)."""
    frame = _read_frame(file_path, required)
    return {column: _numeric_column(frame, column, file_path) for column in frame.columns}
