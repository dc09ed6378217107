"""
Identities Package
==================

Deterministic evaluation of exact identities: supremum density from the
meander density, first-passage density and survival, and the exact
spectrally negative supremum density.
"""
from .density_fn import DensityFn, fit_edge_exponent
from .quadrature import gauss_jacobi, jacobi_panel_integral
from .convolution import m_from_ptilde_beta, m_from_ptilde_z, m_table_from_ptilde
from .passage import passage_density, passage_survival, passage_table
from .oracle import spectrally_negative_m, spectrally_negative_table

__all__ = [
    "DensityFn",
    "fit_edge_exponent",
    "gauss_jacobi",
    "jacobi_panel_integral",
    "m_from_ptilde_beta",
    "m_from_ptilde_z",
    "m_table_from_ptilde",
    "passage_density",
    "passage_survival",
    "passage_table",
    "spectrally_negative_m",
    "spectrally_negative_table",
]
