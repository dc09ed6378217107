"""
Skeleton-bias extrapolation across levels.

A level-n density estimate is modelled as

    v(n) = v_inf + c n^{-delta}

with one delta for the whole grid, fitted from the level differences
d_i = v(n_{i+1}) - v(n_i): their grid-summed magnitudes decay like
n_i^{-delta}. The extrapolated value adds the geometric remainder of the
last difference,

    v_inf = v(n_last) + d_last / (r^delta - 1),   r = n_last / n_prev

and the error bar is propagated linearly from the last two levels. A fit
with delta <= 0, or one whose remainder weight exceeds MAX_BIAS_WEIGHT,
counts as non-convergence: the finest level is returned, flagged
bias_fallback.
"""
import logging
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.integrate import trapezoid

from ..core.errors import NonMonotoneBias
from ..stable.tables import MASS_TOL, DensityTable
from .config import MCRun
from .kde import estimate_density, log_bandwidth

logger = logging.getLogger(__name__)

# Largest accepted remainder weight 1 / (r^delta - 1), delta ~ 0.32 at r = 2
MAX_BIAS_WEIGHT = 4.0


def fit_bias_exponent(levels: Sequence[int], tables: Sequence[DensityTable]) -> float:
    """
    delta from the decay of sum |d_i| over the level sequence.

    Returns nan when the differences vanish somewhere.
    """
    levels = np.asarray(levels, dtype=float)
    values = np.stack([t.values for t in tables])
    sizes = np.abs(np.diff(values, axis=0)).sum(axis=1)
    if np.any(sizes <= 0.0):
        return float("nan")
    if sizes.size == 2:
        ratio = levels[1] / levels[0]
        return float(-np.log(sizes[1] / sizes[0]) / np.log(ratio))
    slope, _ = np.polyfit(np.log(levels[:-1]), np.log(sizes), 1)
    return float(-slope)


def extrapolate_tables(
    levels: Sequence[int],
    tables: Sequence[DensityTable],
    strict: bool = False,
) -> DensityTable:
    """
    Extrapolate level tables on a common grid to n = inf.

    With fewer than three levels, or with identical level tables, the finest
    table is returned unchanged.

    Raises:
        NonMonotoneBias: strict mode and the level differences do not shrink
            fast enough to extrapolate
    """
    levels = [int(n) for n in levels]
    if len(levels) != len(tables) or not tables:
        raise ValueError("one table per level is required")
    if any(b <= a for a, b in zip(levels[:-1], levels[1:])):
        raise ValueError("levels must be strictly increasing")
    grid = tables[-1].grid
    for table in tables[:-1]:
        if table.grid.shape != grid.shape or not np.allclose(table.grid, grid, rtol=1e-12, atol=0.0):
            raise ValueError("level tables must share one grid")

    finest = tables[-1]
    if len(tables) < 3:
        logger.info("extrapolation needs three levels, using level %d as is", levels[-1])
        return finest

    values = np.stack([t.values for t in tables])
    diffs = np.diff(values, axis=0)
    if not np.any(diffs):
        return finest

    delta = fit_bias_exponent(levels, tables)
    ratio = levels[-1] / levels[-2]
    weight = 1.0 / (ratio ** delta - 1.0) if np.isfinite(delta) and delta > 0.0 else float("inf")
    if weight > MAX_BIAS_WEIGHT:
        message = (
            f"level estimates do not converge (fitted delta = {delta:.3g}, "
            f"remainder weight {weight:.3g} > {MAX_BIAS_WEIGHT:g}) over levels {levels}"
        )
        if strict:
            raise NonMonotoneBias(message)
        logger.warning("%s; falling back to level %d", message, levels[-1])
        return finest.with_meta(bias_fallback=True, bias_delta=delta, bias_weight=weight, levels=levels)

    last, previous = diffs[-1], diffs[-2]
    # Extrapolate only where the last two differences agree in sign
    monotone = np.sign(last) == np.sign(previous)
    extrapolated = np.where(monotone, values[-1] + weight * last, values[-1])
    extrapolated = np.maximum(extrapolated, 0.0)

    def err(table):
        return np.zeros_like(grid) if table.errbars is None else table.errbars

    errbars = np.where(
        monotone,
        (1.0 + weight) * err(tables[-1]) + weight * err(tables[-2]),
        err(tables[-1]),
    )

    meta = dict(finest.meta)
    meta.update(
        bias_delta=delta,
        bias_weight=weight,
        bias_fallback=False,
        levels=levels,
        level_bias=values[-1] - extrapolated,
        monotone_fraction=float(monotone.mean()),
    )
    logger.info(
        "extrapolated over levels %s: delta = %.3f, weight = %.3f, monotone at %.0f%% of grid",
        levels, delta, weight, 100.0 * monotone.mean(),
    )
    normalized = trapezoid(extrapolated, grid) <= 1.0 + MASS_TOL
    return DensityTable(grid, extrapolated, errbars, meta, normalized=bool(normalized))


def level_tables(runs: Dict[int, MCRun], grid, bandwidth: Optional[float] = None) -> List[DensityTable]:
    """KDE tables for every level, all with the finest level's bandwidth."""
    levels = sorted(runs)
    if bandwidth is None:
        bandwidth = log_bandwidth(runs[levels[-1]])
    return [estimate_density(runs[n], grid, bandwidth) for n in levels]


def extrapolate_levels(
    runs,
    grid,
    bandwidth: Optional[float] = None,
    strict: bool = False,
) -> DensityTable:
    """
    Level-extrapolated density from coupled runs.

    Args:
        runs: {level: MCRun} or a list of MCRun over increasing levels
        grid: common evaluation grid
        bandwidth: shared log-scale bandwidth, by default the finest level's
        strict: raise NonMonotoneBias instead of falling back
    """
    if not isinstance(runs, dict):
        runs = {run.level: run for run in runs}
    levels = sorted(runs)
    tables = level_tables(runs, grid, bandwidth)
    return extrapolate_tables(levels, tables, strict=strict)
