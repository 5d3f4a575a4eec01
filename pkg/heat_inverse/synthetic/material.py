"""
Closed-form steel coefficients used to fabricate twin-experiment data.
"""

import numpy as np

from heat_inverse.shared.config import U_MAX, U_MIN


def k_sim(u):
    """Conductivity [W/(m K)], linear from 60 at 0 degC to 30 at 900 degC."""
    u = np.clip(np.asarray(u, dtype=float), U_MIN, U_MAX)
    out = 60.0 - u / 30.0
    return out if out.ndim else float(out)


def C_sim(u):
    """
    Volumetric heat capacity [J/(m^3 K)] = density 7650 kg/m^3 times a specific heat
    with a sigmoid phase-transition bump centred at 700 degC.
    """
    u = np.clip(np.asarray(u, dtype=float), U_MIN, U_MAX)
    sigmoid = 1.0 / (1.0 + np.exp(-0.1 * (u - 700.0)))
    specific = 475.0 + 0.0265 * u + 0.000855 * u**2 - (0.000855 * u**2 - 0.1735 * u + 140.0) * sigmoid
    out = 7650.0 * specific
    return out if out.ndim else float(out)


class SimulatedSteel:
    """Material view of k_sim / C_sim on U = [0, 900] degC."""
    name = "simulated_steel"
    u_min: float = U_MIN
    u_max: float = U_MAX

    def conductivity(self, u) -> np.ndarray:
        return k_sim(u)

    def capacity(self, u) -> np.ndarray:
        return C_sim(u)

    def diffusivity(self, u) -> np.ndarray:
        return k_sim(u) / C_sim(u)


SIMULATED_STEEL = SimulatedSteel()
