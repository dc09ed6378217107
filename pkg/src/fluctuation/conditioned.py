"""
Density of the process conditioned to stay positive.

p_1^up(x) is proportional to x^{alpha (1 - rho)} p~(x), so it is obtained
from a meander table by weighting and renormalizing. The normalizing mass
is the trapezoid mass on the grid plus analytic power-law tails beyond
both grid edges, with the edge exponents fitted on the last few points.
"""
import logging

import numpy as np
from scipy.integrate import trapezoid

from ..core.errors import NonNormalizable
from ..stable.params import StableParams
from ..stable.tables import DensityTable

logger = logging.getLogger(__name__)

EDGE_POINTS = 5

# A right edge below this share of the grid mass is treated as the end of support
NEGLIGIBLE_EDGE = 1e-6


def edge_slope(grid: np.ndarray, values: np.ndarray, side: str, points: int = EDGE_POINTS) -> float:
    """Log-log slope over the positive values nearest one grid edge."""
    positive = values > 0.0
    x, y = grid[positive], values[positive]
    if x.size < 2:
        return float("nan")
    sel = slice(0, points) if side == "left" else slice(-points, None)
    slope, _ = np.polyfit(np.log(x[sel]), np.log(y[sel]), 1)
    return float(slope)


def estimate_p_up(params: StableParams, ptilde: DensityTable, extend_tails: bool = True) -> DensityTable:
    """
    Normalized table of x -> x^{alpha (1 - rho)} p~(x).

    Args:
        params: the process p~ belongs to
        ptilde: meander density table
        extend_tails: add power-law tail masses beyond the grid; without it
            the table is taken to carry all of the mass

    Raises:
        NonNormalizable: an edge exponent makes the weighted tail mass
            diverge while the edge value is not negligible
    """
    grid = ptilde.grid
    weight = grid ** (params.alpha * (1.0 - params.rho))
    weighted = ptilde.values * weight
    grid_mass = float(trapezoid(weighted, grid))
    if not grid_mass > 0.0:
        raise NonNormalizable("weighted table has zero mass")

    left_mass = right_mass = 0.0
    left_slope = right_slope = float("nan")
    if extend_tails:
        left_slope = edge_slope(grid, weighted, "left")
        if weighted[0] > 0.0:
            if not left_slope > -1.0:
                raise NonNormalizable(f"left edge exponent {left_slope:.3g} <= -1")
            left_mass = weighted[0] * grid[0] / (left_slope + 1.0)

        right_slope = edge_slope(grid, weighted, "right")
        edge_value = weighted[-1] * grid[-1]
        if edge_value > NEGLIGIBLE_EDGE * grid_mass:
            if not right_slope < -1.0:
                raise NonNormalizable(
                    f"right edge exponent {right_slope:.3g} >= -1 with non-negligible edge mass"
                )
            right_mass = edge_value / (-right_slope - 1.0)

    total = grid_mass + left_mass + right_mass
    errbars = None if ptilde.errbars is None else ptilde.errbars * weight / total
    meta = dict(ptilde.meta)
    if meta.get("level_bias") is not None:
        meta["level_bias"] = np.asarray(meta["level_bias"]) * weight / total
    meta.update(
        quantity="p_up",
        normalizing_constant=1.0 / total,
        grid_mass=grid_mass / total,
        left_tail_mass=left_mass / total,
        right_tail_mass=right_mass / total,
        left_slope=left_slope,
        right_slope=right_slope,
    )
    logger.info(
        "p_up normalized: grid %.4f, tails %.4f / %.4f",
        grid_mass / total, left_mass / total, right_mass / total,
    )
    return DensityTable(grid, weighted / total, errbars, meta)
