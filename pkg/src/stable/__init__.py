"""
Stable Package
==============

The strictly stable process itself: parameters, characteristic exponent,
the marginal density by inversion, exact variates and density tables.
"""
from .params import StableParams, validate_params
from .characteristic import char_exponent, levy_khintchine_exponent
from .density import (
    density_f,
    density_f_derivative,
    density_table,
    derivative_values,
    inversion_cutoff,
    survival_X1,
    tail_onset,
)
from .sampling import sample_X1, stable_variates
from .tables import ANALYTIC, MONTE_CARLO, QUADRATURE, DensityTable, make_grid, scale_density

__all__ = [
    "StableParams",
    "validate_params",
    "char_exponent",
    "levy_khintchine_exponent",
    "density_f",
    "density_f_derivative",
    "density_table",
    "derivative_values",
    "inversion_cutoff",
    "survival_X1",
    "tail_onset",
    "sample_X1",
    "stable_variates",
    "DensityTable",
    "make_grid",
    "scale_density",
    "ANALYTIC",
    "QUADRATURE",
    "MONTE_CARLO",
]
