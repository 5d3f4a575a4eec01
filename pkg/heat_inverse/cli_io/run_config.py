"""
Flat `key = value` run configuration.
- one key per line, `#` at the start of a line or after whitespace starts a comment, blank lines ignored
- lists are comma separated, booleans are true/false, an empty value means "unset"
- dump_config writes every key in a fixed order, so parse -> dump -> parse is the identity
"""

import re
from dataclasses import dataclass, fields, replace
from os import path
from typing import Dict, Optional, Tuple, Union, get_args, get_origin

from heat_inverse.shared.config import (
    C_INITIAL,
    C_LOWER,
    C_UPPER,
    CORNER_TOLERANCE,
    DT_SAFETY,
    DURATION,
    EXPERIMENT_COUNT,
    FTOL,
    GTOL,
    JOBS,
    K_INITIAL,
    K_LOWER,
    K_UPPER,
    MAX_ITERATIONS,
    NOISE_HALF_WIDTH,
    OUTPUT_DIR,
    PARTITION_SIZE,
    SEED,
    SPACE_NODES,
    STAMP_INTERVAL,
    THICKNESS,
    U_MAX,
    U_MIN,
    XTOL,
)
from heat_inverse.shared.errors import ConfigError
from heat_inverse.shared.utils import format_float

MODES = ("simulate", "forward", "fit")
MATERIALS = ("params", "simulated")
STYLES = ("default", "symmetric", "equilibrium")


@dataclass(frozen=True)
class RunConfig:
    mode: str = "fit"
    # temperature partition
    u_min: float = U_MIN
    u_max: float = U_MAX
    n: int = PARTITION_SIZE
    # grid
    L: float = THICKNESS
    T: float = DURATION
    l: int = SPACE_NODES
    auto_dt: bool = True
    dt: Optional[float] = None
    dt_safety: float = DT_SAFETY
    corner_tolerance: float = CORNER_TOLERANCE
    # data
    experiments: Tuple[str, ...] = ()
    profiles: Tuple[str, ...] = ()
    manifest: Optional[str] = None
    weights: Tuple[float, ...] = ()
    # parameters
    material: str = "params"
    initial_params: Optional[str] = None
    k0: float = K_INITIAL
    C0: float = C_INITIAL
    k_lower: float = K_LOWER
    k_upper: float = K_UPPER
    C_lower: float = C_LOWER
    C_upper: float = C_UPPER
    # optimizer
    ftol: float = FTOL
    xtol: float = XTOL
    gtol: float = GTOL
    max_iterations: int = MAX_ITERATIONS
    pin_scale: bool = False
    # synthetic scenario
    experiment_count: int = EXPERIMENT_COUNT
    triplet_style: str = "default"
    noise: float = NOISE_HALF_WIDTH
    stamp_interval: float = STAMP_INTERVAL
    reference_l: Optional[int] = None
    seed: int = SEED
    # execution
    jobs: int = JOBS
    out_dir: str = OUTPUT_DIR
    progress: bool = False

    def validate(self, check_files: bool = True) -> "RunConfig":
        """Range and consistency checks; raises ConfigError naming the key."""
        if self.mode not in MODES:
            raise ConfigError(f"must be one of {MODES}, got {self.mode!r}", "mode")
        if self.material not in MATERIALS:
            raise ConfigError(f"must be one of {MATERIALS}, got {self.material!r}", "material")
        if self.triplet_style not in STYLES:
            raise ConfigError(f"must be one of {STYLES}, got {self.triplet_style!r}", "triplet_style")
        if not self.u_min < self.u_max:
            raise ConfigError("u_min must be below u_max", "u_min")
        if self.n < 2:
            raise ConfigError("needs at least 2 nodes", "n")
        if self.l < 3:
            raise ConfigError("needs at least 3 space nodes", "l")
        for key in ("L", "T", "k0", "C0", "k_lower", "C_lower", "stamp_interval", "dt_safety"):
            if not getattr(self, key) > 0.0:
                raise ConfigError("must be positive", key)
        if self.dt_safety > 1.0:
            raise ConfigError("must not exceed 1", "dt_safety")
        if not self.auto_dt and (self.dt is None or not self.dt > 0.0):
            raise ConfigError("a positive dt is required when auto_dt is false", "dt")
        if not self.k_lower < self.k_upper:
            raise ConfigError("must be below k_upper", "k_lower")
        if not self.C_lower < self.C_upper:
            raise ConfigError("must be below C_upper", "C_lower")
        for key in ("ftol", "xtol", "gtol", "noise", "corner_tolerance"):
            if getattr(self, key) < 0.0:
                raise ConfigError("must be non-negative", key)
        if self.max_iterations < 0:
            raise ConfigError("must be non-negative", "max_iterations")
        if self.jobs < 1:
            raise ConfigError("must be at least 1", "jobs")
        if self.experiment_count < 1:
            raise ConfigError("must be at least 1", "experiment_count")
        if self.reference_l is not None and self.reference_l < 3:
            raise ConfigError("needs at least 3 space nodes", "reference_l")
        if self.profiles and len(self.profiles) != len(self.experiments):
            raise ConfigError("needs one profile per experiment", "profiles")
        if self.weights and any(w <= 0.0 for w in self.weights):
            raise ConfigError("must be positive", "weights")
        if self.mode in ("forward", "fit") and not self.experiments and self.manifest is None:
            raise ConfigError("no experiment files and no manifest given", "experiments")
        if check_files:
            for key in ("experiments", "profiles"):
                for file_path in getattr(self, key):
                    if not path.isfile(file_path):
                        raise ConfigError(f"file not found: {file_path}", key)
            for key in ("manifest", "initial_params"):
                file_path = getattr(self, key)
                if file_path is not None and not path.isfile(file_path):
                    raise ConfigError(f"file not found: {file_path}", key)
        return self

    def override(self, **changes) -> "RunConfig":
        """Apply non-None overrides (CLI flags)."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

# ---------------------------------------------------------
#   Parsing and serialization
# ---------------------------------------------------------

_FIELDS = {f.name: f for f in fields(RunConfig)}
_TRUE = {"true", "yes", "1", "on"}
_FALSE = {"false", "no", "0", "off"}
_COMMENT = re.compile(r"(?:^|\s)#.*$")


def _field_type(key: str) -> Tuple[type, bool, bool]:
    """(scalar type, is_list, is_optional) of a config key."""
    annotation = _FIELDS[key].type
    args = [arg for arg in get_args(annotation) if arg is not type(None)]
    if get_origin(annotation) is tuple:
        return args[0], True, False
    if get_origin(annotation) is Union:
        return args[0], False, True
    return annotation, False, False


def _parse_bool(key: str, raw: str) -> bool:
    lowered = raw.lower()
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    raise ConfigError(f"expected true/false, got {raw!r}", key)


def _convert(key: str, raw: str):
    scalar, is_list, optional = _field_type(key)
    try:
        if is_list:
            return tuple(scalar(item.strip()) for item in raw.split(",") if item.strip())
        if raw == "":
            if optional:
                return None
            raise ConfigError("missing value", key)
        if scalar is bool:
            return _parse_bool(key, raw)
        return scalar(raw)
    except ValueError:
        raise ConfigError(f"cannot parse {raw!r} as {scalar.__name__}", key)


def parse_config(text: str) -> RunConfig:
    """Parse config text into a RunConfig (no file checks)."""
    values: Dict[str, object] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = _COMMENT.sub("", line).strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {number}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in _FIELDS:
            raise ConfigError(f"line {number}: unknown key", key)
        if key in values:
            raise ConfigError(f"line {number}: duplicate key", key)
        values[key] = _convert(key, raw)
    return RunConfig(**values)


def load_config(file_path: str, check_files: bool = True) -> RunConfig:
    """Read and validate a config file."""
    if not path.isfile(file_path):
        raise ConfigError(f"config file not found: {file_path}")
    with open(file_path, "r", encoding="utf-8") as config_file:
        config = parse_config(config_file.read())
    return config.validate(check_files)


def _render(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, tuple):
        return ",".join(_render(item) for item in value)
    return str(value)


def dump_config(config: RunConfig) -> str:
    """Every key in declaration order, `key = value` per line."""
    return "".join(f"{name} = {_render(getattr(config, name))}\n" for name in _FIELDS)


def save_config(config: RunConfig, file_path: str) -> str:
    with open(file_path, "w", encoding="utf-8", newline="\n") as config_file:
        config_file.write(dump_config(config))
    return file_path
