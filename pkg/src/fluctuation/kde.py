"""
Log-Domain Kernel Density Estimation
====================================

Samples live on (0, inf) and the densities of interest are power laws at
both ends, so the kernel runs on z = log x:

    g(z) = 1/(n h) sum_j K((z - z_j) / h),    p(x) = g(log x) / x

with a Gaussian K. The transform removes the boundary at 0 and keeps
power-law edges straight in log-log coordinates.

For large samples the log-samples are binned on a mesh much finer than h
before the kernel sum; the binning error is far below the Monte Carlo error.

Supremum runs carry an atom at 0 (paths that never climb above 0 on the
skeleton). The atom is excluded and the estimate is scaled by the fraction
of positive draws.
"""
import logging
import math
from typing import Optional

from scipy.integrate import trapezoid

import numpy as np

from ..core.errors import InsufficientSamples
from ..stable.tables import MONTE_CARLO, DensityTable
from .config import MCRun

logger = logging.getLogger(__name__)

# Roughness of the Gaussian kernel, int K^2
KERNEL_ROUGHNESS = 1.0 / (2.0 * math.sqrt(math.pi))

# Bins per bandwidth and the sample size above which binning kicks in
BINS_PER_BANDWIDTH = 25
BINNING_THRESHOLD = 20_000
MAX_BINS = 1 << 16

MAX_RELATIVE_ERROR = 0.5
# Allowed gap between the estimate's mass on the grid and the sample fraction there
KDE_MASS_TOL = 0.02


def bw_silverman_log(z: np.ndarray) -> float:
    """Silverman's rule on log-samples."""
    std = np.std(z)
    q75, q25 = np.percentile(z, [75, 25])
    spread = min(std, (q75 - q25) / 1.34) if q75 > q25 else std
    return 0.9 * spread * z.size ** (-0.2)


def bw_scott_log(z: np.ndarray) -> float:
    """Scott's rule on log-samples."""
    return 1.06 * np.std(z) * z.size ** (-0.2)


BANDWIDTH_FUNCTIONS = {
    "silverman-log": bw_silverman_log,
    "scott-log": bw_scott_log,
}


def _positive_log_samples(run: MCRun) -> np.ndarray:
    positive = run.samples[run.samples > 0.0]
    if positive.size < 2:
        raise InsufficientSamples(f"{positive.size} positive samples, need at least 2")
    return np.log(positive)


def log_bandwidth(run: MCRun, rule: Optional[str] = None) -> float:
    """
    Bandwidth on the log scale for a run.

    Raises:
        InsufficientSamples: fewer than 2 positive samples or zero spread
    """
    rule = rule or run.config.kde_bandwidth_rule
    z = _positive_log_samples(run)
    bandwidth = BANDWIDTH_FUNCTIONS[rule](z)
    if not bandwidth > 0.0:
        raise InsufficientSamples("degenerate samples: zero spread on the log scale")
    return float(bandwidth)


def _kernel_sum(z: np.ndarray, at: np.ndarray, h: float) -> np.ndarray:
    """sum_j phi((at - z_j) / h) / (n h), binned for large samples."""
    n = z.size
    if n > BINNING_THRESHOLD:
        lo, hi = z.min(), z.max()
        bins = int(min(MAX_BINS, max(64, math.ceil((hi - lo) / h * BINS_PER_BANDWIDTH))))
        counts, edges = np.histogram(z, bins=bins, range=(lo, hi + 1e-12))
        keep = counts > 0
        centres = 0.5 * (edges[:-1] + edges[1:])[keep]
        weights = counts[keep].astype(float)
    else:
        centres, weights = z, np.ones_like(z)

    out = np.empty(at.size)
    for start in range(0, at.size, 64):
        chunk = at[start:start + 64, None]
        u = (chunk - centres[None, :]) / h
        out[start:start + 64] = np.exp(-0.5 * u * u) @ weights
    return out / (n * h * math.sqrt(2.0 * math.pi))


def estimate_density(run: MCRun, grid, bandwidth: Optional[float] = None) -> DensityTable:
    """
    Density table of the positive part of a run with standard errors.

    Args:
        run: supremum or meander run
        grid: strictly increasing positive abscissae
        bandwidth: log-scale bandwidth; by default from the run's rule.
            Pass one bandwidth to every level of an extrapolation.

    The estimate's mass over the grid, integrated on the log scale, is logged
    as a warning when it differs from the fraction of samples inside the grid
    by more than KDE_MASS_TOL.

    Raises:
        InsufficientSamples: degenerate samples, or relative error above
            50% at every grid point
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2 or grid[0] <= 0.0 or np.any(np.diff(grid) <= 0.0):
        raise ValueError("grid must be strictly increasing and positive")

    z = _positive_log_samples(run)
    h = log_bandwidth(run) if bandwidth is None else float(bandwidth)
    positive_fraction = z.size / run.samples.size

    log_grid = np.log(grid)
    g = _kernel_sum(z, log_grid, h)
    se_g = np.sqrt(g * KERNEL_ROUGHNESS / (z.size * h))

    with np.errstate(divide="ignore", invalid="ignore"):
        relative = np.where(g > 0.0, se_g / g, np.inf)
    if np.all(relative > MAX_RELATIVE_ERROR):
        raise InsufficientSamples(
            f"relative error above {MAX_RELATIVE_ERROR:.0%} at every grid point "
            f"({z.size} positive samples)"
        )

    inside = np.mean((z >= log_grid[0]) & (z <= log_grid[-1]))
    mass = positive_fraction * float(trapezoid(g, log_grid))
    expected = positive_fraction * float(inside)
    if abs(mass - expected) > KDE_MASS_TOL:
        logger.warning(
            "kde level=%d: mass %.4f on the grid, %.4f of the samples fall there; "
            "grid too coarse or bandwidth too wide",
            run.level, mass, expected,
        )

    scale = positive_fraction / grid
    meta = {
        "provenance": MONTE_CARLO,
        "quantity": run.kind,
        "level": run.level,
        "bandwidth": h,
        "grid_mass": mass,
        "sample_mass": expected,
        "positive_fraction": positive_fraction,
        "sample_min": float(np.exp(z.min())),
        "n_samples": int(run.samples.size),
        "eta": None if run.params is None else run.params.eta,
        "horizon": run.config.horizon,
        **run.config.as_dict(),
    }
    if run.acceptance_rate is not None:
        meta["acceptance_rate"] = run.acceptance_rate
    logger.debug("kde level=%d h=%.4g positive=%.4g", run.level, h, positive_fraction)
    return DensityTable(grid, g * scale, se_g * scale, meta)
