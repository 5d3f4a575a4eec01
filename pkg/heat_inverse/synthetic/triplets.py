"""
Parametric boundary/initial triplets shaped like plant cooling curves:
an even plateau, a steep drop over the cooling window, then recovery.
"""

from dataclasses import asdict, dataclass
from typing import Dict, Tuple

import numpy as np

from heat_inverse.shared.errors import DataError

STYLES = ("default", "symmetric", "equilibrium")


@dataclass(frozen=True)
class TripletSpec:
    """Shape parameters of one synthetic cooling run (temperatures in degC, times in s)."""
    style: str = "default"
    plateau: float = 780.0
    cooling_time: float = 25.0
    minimum: float = 350.0
    recovery: float = 450.0
    asymmetry: float = 0.0   # top surface minimum lies this much below the bottom one
    bulge: float = 0.0       # core excess of the parabolic initial profile

    def __post_init__(self) -> None:
        if self.style not in STYLES:
            raise DataError(f"unknown triplet style {self.style!r}, expected one of {STYLES}")
        if self.style == "equilibrium":
            return
        if not self.cooling_time > 0.0:
            raise DataError(f"cooling_time must be positive, got {self.cooling_time}")
        if not self.minimum < self.plateau:
            raise DataError(f"minimum {self.minimum} must lie below plateau {self.plateau}")
        if self.recovery < self.minimum:
            raise DataError(f"recovery {self.recovery} must not lie below minimum {self.minimum}")
        if self.bulge < 0.0:
            raise DataError(f"bulge must be non-negative, got {self.bulge}")

    def to_dict(self) -> Dict:
        return asdict(self)


def boundary_curve(t: np.ndarray, plateau: float, cooling_time: float, minimum: float,
                   recovery: float, duration: float) -> np.ndarray:
    """Smooth drop plateau -> minimum on [0, cooling_time], exponential recovery afterwards."""
    t = np.asarray(t, dtype=float)
    drop = plateau - (plateau - minimum) * np.sin(0.5 * np.pi * np.minimum(t, cooling_time) / cooling_time) ** 2
    tau = max(duration - cooling_time, 1e-12) / 3.0
    curve = drop.copy()
    after = t > cooling_time
    curve[after] = minimum + (recovery - minimum) * (1.0 - np.exp(-(t[after] - cooling_time) / tau))
    return curve


def make_triplet(spec: TripletSpec, times: np.ndarray, depths: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Build (u_bottom, u_top, u_init) on the given stamps and depths.
    Corner compatible: u_init at both ends equals the boundary values at t = 0.
    """
    times = np.asarray(times, dtype=float)
    depths = np.asarray(depths, dtype=float)
    L = float(depths[-1])

    if spec.style == "equilibrium":
        flat = np.full(times.size, spec.plateau)
        return flat, flat.copy(), np.full(depths.size, spec.plateau)

    duration = float(times[-1])
    u_bottom = boundary_curve(times, spec.plateau, spec.cooling_time, spec.minimum, spec.recovery, duration)
    if spec.style == "symmetric":
        u_top = u_bottom.copy()
    else:
        u_top = boundary_curve(times, spec.plateau, spec.cooling_time, spec.minimum - spec.asymmetry,
                               spec.recovery - spec.asymmetry, duration)

    # bulge term vanishes at both ends, so the corners match the plateau exactly
    u_init = spec.plateau + spec.bulge * 4.0 * depths * (L - depths) / (L * L)
    return u_bottom, u_top, u_init
