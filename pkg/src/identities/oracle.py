"""
Exact supremum density without positive jumps.

When c_plus = 0 and alpha in (1, 2) the process creeps upward, the first
passage time satisfies Kendall's identity h_x(t) = (x / t) f_t(x), and
comparing with h_x(t) = eta x t^{-eta-1} m(x t^{-eta}) gives m = alpha f on
(0, inf). Its mass is alpha rho = 1.
"""
import numpy as np

from ..core.errors import WrongRegime
from ..stable.density import density_f_with_error
from ..stable.params import StableParams
from ..stable.tables import ANALYTIC, DensityTable


def _require_spectrally_negative(params: StableParams) -> None:
    if not params.is_spectrally_negative:
        raise WrongRegime(f"the exact supremum density needs c_plus = 0, got c_plus = {params.c_plus:g}")


def spectrally_negative_m(params: StableParams, x: float) -> float:
    """
    m(x) = alpha f(x) for a spectrally negative process.

    Raises:
        WrongRegime: c_plus > 0
    """
    _require_spectrally_negative(params)
    if not x > 0.0:
        raise ValueError(f"x must be > 0, got {x!r}")
    value, _ = density_f_with_error(params, x)
    return params.alpha * value


def spectrally_negative_table(params: StableParams, grid) -> DensityTable:
    _require_spectrally_negative(params)
    grid = np.asarray(grid, dtype=float)
    pairs = [density_f_with_error(params, x) for x in grid]
    values = params.alpha * np.array([p[0] for p in pairs])
    errbars = params.alpha * np.array([p[1] for p in pairs])
    meta = {"provenance": ANALYTIC, "quantity": "m", "source": "spectrally-negative", "eta": params.eta}
    return DensityTable(grid, values, errbars, meta)
