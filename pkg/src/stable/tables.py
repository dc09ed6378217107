"""
Density Tables
==============

DensityTable is the interchange format between the inversion code, the
quadratures of the identities module and the Monte Carlo estimators: a
density tabulated on a strictly increasing positive grid, optional
per-point standard errors, and a provenance tag.

Tables are immutable once built: the arrays are copied and marked
read-only.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd
from scipy.integrate import trapezoid

logger = logging.getLogger(__name__)

# Provenance tags
ANALYTIC = "analytic"
QUADRATURE = "quadrature"
MONTE_CARLO = "monte-carlo"
PROVENANCES = (ANALYTIC, QUADRATURE, MONTE_CARLO)

# Slack on the trapezoid mass of a normalized table
MASS_TOL = 1e-2


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class DensityTable:
    """
    A density restricted to a grid.

    Attributes:
        grid: strictly increasing positive abscissae
        values: density values, >= 0
        errbars: per-point standard errors or None
        meta: provenance ("provenance" key) and generating configuration
        normalized: whether the table claims to be (part of) a probability
            density; unnormalized tables skip the mass check
    """

    grid: np.ndarray
    values: np.ndarray
    errbars: Optional[np.ndarray] = None
    meta: Dict[str, Any] = field(default_factory=dict)
    normalized: bool = True

    def __post_init__(self):
        grid = _frozen(self.grid)
        values = _frozen(self.values)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        if self.errbars is not None:
            object.__setattr__(self, "errbars", _frozen(self.errbars))
        object.__setattr__(self, "meta", dict(self.meta))

        if grid.ndim != 1 or grid.size < 2:
            raise ValueError("grid must be one-dimensional with at least 2 points")
        if values.shape != grid.shape:
            raise ValueError("values must have the same length as grid")
        if self.errbars is not None and self.errbars.shape != grid.shape:
            raise ValueError("errbars must have the same length as grid")
        if not np.all(np.isfinite(grid)) or grid[0] <= 0.0:
            raise ValueError("grid must be finite and strictly positive")
        if np.any(np.diff(grid) <= 0.0):
            raise ValueError("grid must be strictly increasing")
        if not np.all(np.isfinite(values)) or np.any(values < 0.0):
            raise ValueError("values must be finite and >= 0")
        provenance = self.meta.get("provenance")
        if provenance is not None and provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {provenance!r}")
        if self.normalized and self.mass > 1.0 + MASS_TOL:
            raise ValueError(
                f"trapezoid mass {self.mass:.6g} exceeds 1 + {MASS_TOL:g}"
            )

    # =========================================================================
    # ACCESSORS
    # =========================================================================

    def __len__(self) -> int:
        return self.grid.size

    @property
    def mass(self) -> float:
        """Trapezoid integral over the grid."""
        return float(trapezoid(self.values, self.grid))

    @property
    def provenance(self) -> Optional[str]:
        return self.meta.get("provenance")

    def interpolate(self, x) -> np.ndarray:
        """Linear interpolation on the grid, 0 outside it."""
        return np.interp(x, self.grid, self.values, left=0.0, right=0.0)

    def with_meta(self, **updates) -> "DensityTable":
        meta = dict(self.meta)
        meta.update(updates)
        return DensityTable(self.grid, self.values, self.errbars, meta, self.normalized)

    def to_frame(self, value_column: str = "value", err_column: str = "stderr") -> pd.DataFrame:
        frame = pd.DataFrame({"x": self.grid, value_column: self.values})
        if self.errbars is not None:
            frame[err_column] = self.errbars
        return frame


def scale_density(table: DensityTable, t: float, eta: Optional[float] = None) -> DensityTable:
    """
    Carry a time-1 self-similar density to time t.

    Returns the table of x -> t^{-eta} table(x t^{-eta}) on the grid
    grid * t^eta, so no interpolation is involved. eta defaults to
    table.meta["eta"].
    """
    if not t > 0.0:
        raise ValueError(f"t must be > 0, got {t!r}")
    if eta is None:
        eta = table.meta.get("eta")
    if eta is None:
        raise ValueError("scale_density needs eta, pass it or set meta['eta']")
    if t == 1.0:
        return table

    factor = t ** eta
    errbars = None if table.errbars is None else table.errbars / factor
    meta = dict(table.meta)
    meta["horizon"] = meta.get("horizon", 1.0) * t
    return DensityTable(
        table.grid * factor, table.values / factor, errbars, meta, table.normalized
    )


def make_grid(x_min: float, x_max: float, points: int, spacing: str = "log") -> np.ndarray:
    """Strictly increasing positive grid, log or linear spaced."""
    if not (0.0 < x_min < x_max):
        raise ValueError("grid needs 0 < x_min < x_max")
    if points < 2:
        raise ValueError("grid needs at least 2 points")
    if spacing == "log":
        return np.geomspace(x_min, x_max, points)
    if spacing == "linear":
        return np.linspace(x_min, x_max, points)
    raise ValueError(f"unknown grid spacing {spacing!r}, use 'log' or 'linear'")
