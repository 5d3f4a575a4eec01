from .pchip import (
    Partition,
    Interpolant,
    build_interpolant,
    evaluate,
    perturb_node,
    locality_window,
    pchip_slopes,
    hermite_eval,
)

__all__ = [
    "Partition",
    "Interpolant",
    "build_interpolant",
    "evaluate",
    "perturb_node",
    "locality_window",
    "pchip_slopes",
    "hermite_eval",
]
