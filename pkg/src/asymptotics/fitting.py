"""
Power-Law Fits
==============

Every asymptotic law is checked through a TailFit: a fitted exponent and
prefactor over an explicit window, with standard errors.

METHODS:
--------

- ols-loglog: least squares of log y on log x over the window, for
  tables (densities, CDFs, evaluator samples on a grid)
- hill: Hill estimator on raw samples at the infinity side; the fit is
  reported for the survival function, P(X > x) ~ constant x^exponent

WINDOW POLICY:
--------------

"auto" picks the window from the data:

- infinity side, tables: the last decade of grid points whose relative
  error bar is below 25%
- zero side, tables: the first decade of such points, starting 3
  bandwidths (on the log scale) above the smallest sample when the table
  is a kernel estimate
- infinity side, samples: [q_0.99, q_0.9999], the Hill threshold being the
  lower edge

An explicit (x_lo, x_hi) tuple is used as given.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from scipy import stats

from ..core.errors import WindowTooNarrow
from ..fluctuation.config import MCRun
from ..stable.tables import DensityTable

logger = logging.getLogger(__name__)

ZERO = "zero"
INFINITY = "infinity"

OLS = "ols-loglog"
HILL = "hill"

MAX_RELATIVE_ERRBAR = 0.25
BOUNDARY_BANDWIDTHS = 3.0
HILL_QUANTILES = (0.99, 0.9999)
MIN_POINTS = 3
MIN_HILL_K = 10

# One decade, with rounding slack
MIN_DECADES = 1.0 - 1e-9


@dataclass(frozen=True)
class TailFit:
    """
    y ~ constant * x^exponent over window.

    Attributes:
        exponent: fitted slope in log-log coordinates
        constant: fitted prefactor
        window: (x_lo, x_hi)
        stderr_exponent: standard error of the exponent
        stderr_constant: standard error of the constant
        method: OLS or HILL
        n_points: points (or order statistics) used
    """

    exponent: float
    constant: float
    window: Tuple[float, float]
    stderr_exponent: float
    stderr_constant: float
    method: str
    n_points: int = 0

    def __post_init__(self):
        lo, hi = self.window
        if not lo < hi:
            raise ValueError(f"window must satisfy x_lo < x_hi, got {self.window}")
        if self.stderr_exponent < 0.0 or self.stderr_constant < 0.0:
            raise ValueError("standard errors must be >= 0")

    @property
    def tail_index(self) -> float:
        """-exponent, the Pareto index of a survival fit."""
        return -self.exponent

    def as_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "stderr_exponent": self.stderr_exponent,
            "constant": self.constant,
            "stderr_constant": self.stderr_constant,
            "x_lo": self.window[0],
            "x_hi": self.window[1],
            "method": self.method,
            "n_points": self.n_points,
        }


def _check_decade(lo: float, hi: float) -> None:
    if not (lo > 0.0 and hi > lo and math.log10(hi / lo) >= MIN_DECADES):
        raise WindowTooNarrow(f"window [{lo:.4g}, {hi:.4g}] spans less than one decade")


# =============================================================================
# TABLES
# =============================================================================

def _usable(table: DensityTable) -> np.ndarray:
    values = np.abs(table.values)
    ok = values > 0.0
    if table.errbars is not None:
        relative = np.full(values.shape, np.inf)
        relative[ok] = table.errbars[ok] / values[ok]
        ok &= relative < MAX_RELATIVE_ERRBAR
    return ok


def auto_window(table: DensityTable, side: str) -> Tuple[float, float]:
    grid = table.grid
    usable = grid[_usable(table)]
    if usable.size < MIN_POINTS:
        raise WindowTooNarrow(f"only {usable.size} usable points in the table")
    if side == INFINITY:
        hi = float(usable[-1])
        lo = hi / 10.0
    elif side == ZERO:
        lo = float(usable[0])
        bandwidth = table.meta.get("bandwidth")
        sample_min = table.meta.get("sample_min")
        if bandwidth is not None and sample_min is not None:
            lo = max(lo, float(sample_min) * math.exp(BOUNDARY_BANDWIDTHS * float(bandwidth)))
            above = usable[usable >= lo]
            if above.size:
                lo = float(above[0])
        hi = lo * 10.0
    else:
        raise ValueError(f"side must be {ZERO!r} or {INFINITY!r}, got {side!r}")
    _check_decade(lo, hi)
    return lo, hi


def _fit_table(
    table: DensityTable,
    window: Tuple[float, float],
    fixed_exponent: Optional[float],
) -> TailFit:
    lo, hi = window
    _check_decade(lo, hi)
    grid = table.grid
    # Relative slack keeps the endpoints of a geometric grid inside
    inside = (grid >= lo * (1.0 - 1e-9)) & (grid <= hi * (1.0 + 1e-9)) & (table.values > 0.0)
    if inside.sum() < MIN_POINTS:
        raise WindowTooNarrow(f"{int(inside.sum())} points in window [{lo:.4g}, {hi:.4g}]")
    if grid[inside][0] > lo * (1.0 + 1e-6) or grid[inside][-1] < hi * (1.0 - 1e-6):
        if math.log10(grid[inside][-1] / grid[inside][0]) < MIN_DECADES:
            raise WindowTooNarrow(f"data inside [{lo:.4g}, {hi:.4g}] spans less than one decade")

    values = table.values[inside]
    lx, ly = np.log(grid[inside]), np.log(values)

    if fixed_exponent is not None:
        offsets = ly - fixed_exponent * lx
        log_c = float(offsets.mean())
        se_log_c = float(offsets.std(ddof=1) / math.sqrt(offsets.size))
        exponent, se_exponent = float(fixed_exponent), 0.0
    else:
        result = stats.linregress(lx, ly)
        exponent, se_exponent = float(result.slope), float(result.stderr)
        log_c, se_log_c = float(result.intercept), float(result.intercept_stderr)

    constant = math.exp(log_c)
    return TailFit(
        exponent=exponent,
        constant=constant,
        window=(float(lo), float(hi)),
        stderr_exponent=abs(se_exponent),
        stderr_constant=abs(constant) * abs(se_log_c),
        method=OLS,
        n_points=int(inside.sum()),
    )


# =============================================================================
# SAMPLES
# =============================================================================

def hill_fit(samples: np.ndarray, window_policy="auto") -> TailFit:
    """
    Hill estimator of the survival tail P(X > x) ~ constant x^{-a}.

    With k order statistics above the threshold u = X_(k+1):

        1/a      = mean(log X_(i) / u),  i <= k
        constant = (k / n) u^a,          stderr(a) = a / sqrt(k)
    """
    x = np.sort(np.asarray(samples, dtype=float))
    x = x[np.isfinite(x)]
    n = x.size
    if window_policy == "auto":
        lo, hi = (float(v) for v in np.quantile(x, HILL_QUANTILES))
    else:
        lo, hi = (float(v) for v in window_policy)
    if not lo > 0.0:
        raise WindowTooNarrow(f"Hill threshold {lo:.4g} is not positive")
    _check_decade(lo, hi)

    top = x[x > lo]
    k = top.size
    if k < MIN_HILL_K:
        raise WindowTooNarrow(f"only {k} samples above the Hill threshold {lo:.4g}")
    u = float(x[n - k - 1]) if n > k else lo
    gamma = float(np.mean(np.log(top / u)))
    if not gamma > 0.0:
        raise WindowTooNarrow("degenerate samples above the Hill threshold")
    index = 1.0 / gamma
    se_index = index / math.sqrt(k)
    constant = (k / n) * u ** index
    se_constant = constant * math.sqrt(1.0 / k + (math.log(u) * se_index) ** 2)
    return TailFit(
        exponent=-index,
        constant=constant,
        window=(lo, hi),
        stderr_exponent=se_index,
        stderr_constant=se_constant,
        method=HILL,
        n_points=k,
    )


# =============================================================================
# ENTRY POINT
# =============================================================================

def fit_power_law(
    data: Union[DensityTable, MCRun, np.ndarray],
    side: str,
    window_policy: Union[str, Tuple[float, float]] = "auto",
    fixed_exponent: Optional[float] = None,
) -> TailFit:
    """
    Fit y ~ constant x^exponent near zero or infinity.

    Tables are fitted by OLS in log-log coordinates; raw samples (an MCRun
    or an array) by the Hill estimator, infinity side only.

    Args:
        data: table or sample set
        side: ZERO or INFINITY
        window_policy: "auto" or an explicit (x_lo, x_hi)
        fixed_exponent: fit only the constant with this exponent (tables)

    Raises:
        WindowTooNarrow: fewer than 3 points or less than a decade in the window
    """
    if side not in (ZERO, INFINITY):
        raise ValueError(f"side must be {ZERO!r} or {INFINITY!r}, got {side!r}")

    if isinstance(data, DensityTable):
        window = auto_window(data, side) if window_policy == "auto" else tuple(window_policy)
        fit = _fit_table(data, window, fixed_exponent)
    else:
        samples = data.samples if isinstance(data, MCRun) else np.asarray(data, dtype=float)
        if side != INFINITY:
            raise ValueError("sample fits use the Hill estimator, infinity side only")
        if samples.size == 0:
            raise WindowTooNarrow("no samples")
        fit = hill_fit(samples, window_policy)

    logger.debug(
        "%s fit (%s) exponent %.4f +- %.4f constant %.4g +- %.3g on [%.4g, %.4g]",
        side, fit.method, fit.exponent, fit.stderr_exponent,
        fit.constant, fit.stderr_constant, *fit.window,
    )
    return fit


def window_shift(data: DensityTable, fit: TailFit, factor: float = 2.0) -> Optional[float]:
    """
    Exponent change when the window is moved by `factor`.

    Returns None when the moved window leaves the data.
    """
    lo, hi = fit.window
    try:
        moved = _fit_table(data, (lo * factor, hi * factor), None)
    except WindowTooNarrow:
        return None
    return moved.exponent - fit.exponent
