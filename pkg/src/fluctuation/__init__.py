"""
Fluctuation Package
===================

Monte Carlo estimation of the supremum density m, the meander density p~
and the conditioned-to-stay-positive density p^up from random-walk
skeletons with exact stable increments.
"""
from .config import MEANDER, SUPREMUM, MCConfig, MCRun
from .simulate import (
    acceptance_decay,
    simulate_meander,
    simulate_meander_levels,
    simulate_supremum,
    simulate_supremum_levels,
)
from .kde import estimate_density, log_bandwidth
from .extrapolate import extrapolate_levels, extrapolate_tables, fit_bias_exponent
from .conditioned import estimate_p_up

__all__ = [
    "MCConfig",
    "MCRun",
    "SUPREMUM",
    "MEANDER",
    "simulate_supremum",
    "simulate_supremum_levels",
    "simulate_meander",
    "simulate_meander_levels",
    "acceptance_decay",
    "estimate_density",
    "log_bandwidth",
    "extrapolate_levels",
    "extrapolate_tables",
    "fit_bias_exponent",
    "estimate_p_up",
]
