"""
Off-grid density evaluation.

DensityFn turns a DensityTable into a function on (0, inf):

- between grid points: piecewise power law (linear in log-log); segments
  with a zero endpoint fall back to linear interpolation
- below and above the grid: power laws with the given edge exponents, or
  zero when an exponent is None

The CDF is the exact integral of this piecewise power law, so quantities
built from the density and from its CDF agree to rounding.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

from ..core.errors import NonNormalizable
from ..stable.params import StableParams
from ..stable.tables import DensityTable

logger = logging.getLogger(__name__)

EDGE_POINTS = 5

# Fitted edge exponents with a larger standard error are replaced by the default
NOISY_STDERR = 0.1


def fit_edge_exponent(grid: np.ndarray, values: np.ndarray, side: str, points: int = EDGE_POINTS) -> Tuple[float, float]:
    """OLS log-log slope and its standard error over the edge points."""
    positive = values > 0.0
    x, y = np.log(grid[positive]), np.log(values[positive])
    x, y = (x[:points], y[:points]) if side == "left" else (x[-points:], y[-points:])
    if x.size < 3:
        return float("nan"), float("inf")
    coef, cov = np.polyfit(x, y, 1, cov=True)
    return float(coef[0]), float(math.sqrt(max(cov[0, 0], 0.0)))


def _segment_integral(p0: float, x0: float, slope: float, ratio: float) -> float:
    """int_x0^{x0 ratio} p0 (y/x0)^slope dy."""
    if abs(slope + 1.0) < 1e-12:
        return p0 * x0 * math.log(ratio)
    return p0 * x0 * (ratio ** (slope + 1.0) - 1.0) / (slope + 1.0)


@dataclass(frozen=True)
class DensityFn:
    """
    A density on (0, inf) backed by a table.

    Attributes:
        table: the tabulated values
        left_exponent: p(x) = p(x_0) (x/x_0)^left for x < x_0, or None for 0
        right_exponent: p(x) = p(x_n) (x/x_n)^right for x > x_n, or None for 0
        flags: which exponents were fitted and which fell back to a default
    """

    table: DensityTable
    left_exponent: Optional[float] = None
    right_exponent: Optional[float] = None
    flags: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        grid, values = self.table.grid, self.table.values
        logs = np.full(grid.size - 1, np.nan)
        both = (values[:-1] > 0.0) & (values[1:] > 0.0)
        logs[both] = np.log(values[1:][both] / values[:-1][both]) / np.log(grid[1:] / grid[:-1])[both]

        pieces = np.empty(grid.size - 1)
        for i in range(grid.size - 1):
            if both[i]:
                pieces[i] = _segment_integral(values[i], grid[i], logs[i], grid[i + 1] / grid[i])
            else:
                pieces[i] = 0.5 * (values[i] + values[i + 1]) * (grid[i + 1] - grid[i])

        object.__setattr__(self, "_slopes", logs)
        object.__setattr__(self, "_cumulative", np.concatenate([[0.0], np.cumsum(pieces)]))

    # =========================================================================
    # CONSTRUCTION
    # =========================================================================

    @classmethod
    def from_table(
        cls,
        table: DensityTable,
        left_default: Optional[float],
        right_default: Optional[float],
        fit_edges: bool = True,
    ) -> "DensityFn":
        """
        Extend a table with fitted edge exponents.

        A fitted exponent is kept when its standard error is at most
        NOISY_STDERR and it keeps the tail integrable; otherwise the
        default (usually the theoretical exponent) is used and flagged.
        """
        flags: Dict[str, Any] = {}
        exponents = []
        for side, default, ok in (
            ("left", left_default, lambda s: s > -1.0),
            ("right", right_default, lambda s: s < -1.0),
        ):
            if not fit_edges or default is None:
                exponents.append(default)
                flags[f"{side}_source"] = "given"
                continue
            slope, stderr = fit_edge_exponent(table.grid, table.values, side)
            flags[f"{side}_fit"] = slope
            flags[f"{side}_fit_stderr"] = stderr
            if math.isfinite(slope) and stderr <= NOISY_STDERR and ok(slope):
                exponents.append(slope)
                flags[f"{side}_source"] = "fit"
            else:
                exponents.append(default)
                flags[f"{side}_source"] = "default"
                logger.info(
                    "%s edge exponent fit %.3g +- %.3g rejected, using default %.3g",
                    side, slope, stderr, default,
                )
        return cls(table, exponents[0], exponents[1], flags)

    @classmethod
    def for_ptilde(cls, table: DensityTable, params: StableParams, fit_edges: bool = True) -> "DensityFn":
        """Meander density: x^{alpha rho} at 0, x^{-(alpha+1)} at infinity."""
        return cls.from_table(table, params.alpha_rho, -(params.alpha + 1.0), fit_edges)

    @classmethod
    def for_m(cls, table: DensityTable, params: StableParams, fit_edges: bool = True) -> "DensityFn":
        """Supremum density: x^{alpha rho - 1} at 0, x^{-(alpha+1)} at infinity."""
        return cls.from_table(table, params.alpha_rho - 1.0, -(params.alpha + 1.0), fit_edges)

    # =========================================================================
    # EVALUATION
    # =========================================================================

    @property
    def grid(self) -> np.ndarray:
        return self.table.grid

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        grid, values = self.table.grid, self.table.values
        out = np.zeros_like(x)

        below = x < grid[0]
        above = x > grid[-1]
        inside = ~(below | above)

        if self.left_exponent is not None and np.any(below):
            out[below] = values[0] * (x[below] / grid[0]) ** self.left_exponent
        if self.right_exponent is not None and np.any(above):
            out[above] = values[-1] * (x[above] / grid[-1]) ** self.right_exponent

        xi = x[inside]
        idx = np.clip(np.searchsorted(grid, xi, side="right") - 1, 0, grid.size - 2)
        slope = self._slopes[idx]
        power = ~np.isnan(slope)
        res = np.empty_like(xi)
        res[power] = values[idx[power]] * (xi[power] / grid[idx[power]]) ** slope[power]
        lin = ~power
        if np.any(lin):
            res[lin] = np.interp(xi[lin], grid, values)
        out[inside] = res
        return float(out[0]) if scalar else out

    def tail_masses(self) -> Tuple[float, float]:
        """Mass below the first and above the last grid point."""
        grid, values = self.table.grid, self.table.values
        left = right = 0.0
        if self.left_exponent is not None and values[0] > 0.0:
            if self.left_exponent <= -1.0:
                raise NonNormalizable(f"left exponent {self.left_exponent:.3g} <= -1")
            left = values[0] * grid[0] / (self.left_exponent + 1.0)
        if self.right_exponent is not None and values[-1] > 0.0:
            if self.right_exponent >= -1.0:
                raise NonNormalizable(f"right exponent {self.right_exponent:.3g} >= -1")
            right = values[-1] * grid[-1] / (-self.right_exponent - 1.0)
        return left, right

    @property
    def mass(self) -> float:
        """Total mass including both extensions."""
        left, right = self.tail_masses()
        return left + float(self._cumulative[-1]) + right

    def cdf(self, x):
        """Exact integral from 0 to x of the piecewise power law."""
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        grid, values = self.table.grid, self.table.values
        left, right = self.tail_masses()
        total = left + self._cumulative[-1] + right
        out = np.empty_like(x)

        for j, xj in enumerate(x):
            if xj <= 0.0:
                out[j] = 0.0
            elif xj < grid[0]:
                out[j] = 0.0 if left == 0.0 else left * (xj / grid[0]) ** (self.left_exponent + 1.0)
            elif xj >= grid[-1]:
                if right == 0.0:
                    out[j] = total
                else:
                    out[j] = total - right * (xj / grid[-1]) ** (self.right_exponent + 1.0)
            else:
                i = min(int(np.searchsorted(grid, xj, side="right")) - 1, grid.size - 2)
                slope = self._slopes[i]
                if np.isnan(slope):
                    partial = 0.5 * (values[i] + float(np.interp(xj, grid, values))) * (xj - grid[i])
                else:
                    partial = _segment_integral(values[i], grid[i], slope, xj / grid[i])
                out[j] = left + self._cumulative[i] + partial
        return float(out[0]) if scalar else out
