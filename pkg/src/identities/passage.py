"""
First-passage time above a level x.

    h_x(t)        = eta x t^{-eta-1} m(x t^{-eta})
    P(tau_x > t)  = P(S_t <= x) = int_0^{x t^{-eta}} m(y) dy
"""
import logging
from typing import Union

import numpy as np
import pandas as pd

from ..stable.params import StableParams
from ..stable.tables import DensityTable
from .density_fn import DensityFn

logger = logging.getLogger(__name__)


def _check_positive(x: float, t: float) -> None:
    if not (x > 0.0 and t > 0.0):
        raise ValueError(f"x and t must be > 0, got x={x!r}, t={t!r}")


def passage_density(m: DensityFn, params: StableParams, x: float, t: float) -> float:
    """h_x(t), the density of the first time the process exceeds x."""
    _check_positive(x, t)
    eta = params.eta
    return eta * x * t ** (-eta - 1.0) * float(m(x * t ** (-eta)))


def passage_survival(m_table: Union[DensityTable, DensityFn], params: StableParams, x: float, t: float) -> float:
    """
    P(tau_x > t) as the supremum CDF at x t^{-eta}.

    A bare table is extended with the supremum edge exponents first.
    """
    _check_positive(x, t)
    m = m_table if isinstance(m_table, DensityFn) else DensityFn.for_m(m_table, params)
    return float(m.cdf(x * t ** (-params.eta)))


def passage_table(m: DensityFn, params: StableParams, x: float, times) -> pd.DataFrame:
    """h_x and P(tau_x > t) over a time grid."""
    times = np.asarray(times, dtype=float)
    frame = pd.DataFrame({
        "t": times,
        "density": [passage_density(m, params, x, t) for t in times],
        "survival": [passage_survival(m, params, x, t) for t in times],
    })
    logger.debug("passage table x=%g over %d times", x, times.size)
    return frame
