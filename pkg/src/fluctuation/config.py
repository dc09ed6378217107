"""
Monte Carlo configuration and results.

MCConfig is the full reproducibility key of a simulation together with the
seed: identical (params, MCConfig) give bit-identical MCRun samples for any
worker count. block_paths belongs to the key, workers does not.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from config.settings import SETTINGS

from ..core.errors import ConfigError
from ..stable.params import StableParams

logger = logging.getLogger(__name__)

SUPREMUM = "supremum"
MEANDER = "meander"

BANDWIDTH_RULES = ("silverman-log", "scott-log")


@dataclass(frozen=True)
class MCConfig:
    """
    Monte Carlo specification.

    Attributes:
        n_paths: simulated paths (supremum) or accepted paths at the finest
            level (meander)
        n_steps: finest skeleton resolution, steps per unit horizon
        seed: 64-bit reproducibility seed
        levels: skeleton resolutions for extrapolation, each dividing n_steps;
            defaults to (n_steps,)
        kde_bandwidth_rule: bandwidth policy on the log scale
        horizon: time horizon t of the simulated paths
        block_paths: paths per substream block
        workers: threads running blocks (never changes results)
    """

    n_paths: int
    n_steps: int
    seed: int
    levels: Tuple[int, ...] = ()
    kde_bandwidth_rule: str = "silverman-log"
    horizon: float = 1.0
    block_paths: int = field(default_factory=lambda: SETTINGS.BLOCK_PATHS)
    workers: int = field(default_factory=lambda: SETTINGS.WORKERS)

    def __post_init__(self):
        levels = tuple(int(n) for n in self.levels) or (int(self.n_steps),)
        object.__setattr__(self, "levels", levels)

        if self.n_paths < 1:
            raise ConfigError(f"n_paths must be >= 1, got {self.n_paths}")
        if self.n_steps < 2:
            raise ConfigError(f"n_steps must be >= 2, got {self.n_steps}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if levels[0] < 1:
            raise ConfigError("levels must be positive")
        for coarse, fine in zip(levels[:-1], levels[1:]):
            if fine <= coarse or fine % coarse:
                raise ConfigError(
                    f"levels must be strictly increasing, each a multiple of the previous: {levels}"
                )
        if self.n_steps % levels[-1]:
            raise ConfigError(
                f"n_steps={self.n_steps} must be a multiple of the finest level {levels[-1]}"
            )
        if self.kde_bandwidth_rule not in BANDWIDTH_RULES:
            raise ConfigError(
                f"unknown kde_bandwidth_rule {self.kde_bandwidth_rule!r}, use one of {BANDWIDTH_RULES}"
            )
        if not self.horizon > 0.0:
            raise ConfigError(f"horizon must be > 0, got {self.horizon}")
        if self.block_paths < 1 or self.workers < 1:
            raise ConfigError("block_paths and workers must be >= 1")

    def as_dict(self) -> dict:
        return {
            "n_paths": self.n_paths,
            "n_steps": self.n_steps,
            "seed": self.seed,
            "levels": ",".join(str(n) for n in self.levels),
            "kde_bandwidth_rule": self.kde_bandwidth_rule,
            "horizon": self.horizon,
            "block_paths": self.block_paths,
        }


@dataclass(frozen=True)
class MCRun:
    """
    Samples observed on one skeleton level.

    Supremum runs also carry the coupled endpoint X_t of each path, so the
    supremum dominates its own endpoint sample by sample.

    Attributes:
        samples: supremum draws (>= 0) or accepted meander endpoints (> 0)
        config: the generating MCConfig
        level: skeleton resolution the samples were observed on
        kind: SUPREMUM or MEANDER
        acceptance_rate: fraction of attempted paths accepted (meander only)
        n_attempted: paths simulated to produce the samples
        endpoints: coupled X_t draws (supremum only)
        params: the simulated process
    """

    samples: np.ndarray
    config: MCConfig
    level: int
    kind: str = SUPREMUM
    acceptance_rate: Optional[float] = None
    n_attempted: int = 0
    endpoints: Optional[np.ndarray] = None
    params: Optional[StableParams] = None

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        if samples.size == 0:
            raise ValueError("an MCRun needs at least one sample")
        if self.kind == MEANDER:
            if np.any(samples <= 0.0):
                raise ValueError("meander samples must be > 0")
            if self.acceptance_rate is None or not 0.0 < self.acceptance_rate <= 1.0:
                raise ValueError("meander runs record an acceptance_rate in (0, 1]")
        elif self.kind == SUPREMUM:
            if np.any(samples < 0.0):
                raise ValueError("supremum samples must be >= 0")
        else:
            raise ValueError(f"unknown run kind {self.kind!r}")

    def __len__(self) -> int:
        return self.samples.size

    @property
    def seed(self) -> int:
        return self.config.seed

    def to_frame(self) -> pd.DataFrame:
        """Audit snapshot: one sample per row, columns value,level,seed."""
        return pd.DataFrame({
            "value": self.samples,
            "level": np.full(self.samples.size, self.level, dtype=np.int64),
            "seed": np.full(self.samples.size, self.seed, dtype=np.uint64),
        })
