"""
Random-walk skeletons of the stable process.

Increments are exact stable draws: over a mesh of length dt each one is
dt^eta X_1 in law, so the only error left is that the supremum (or the
positivity constraint) is observed on the mesh instead of in continuous
time.

All levels of a run are observed on the SAME paths: the walk is simulated
at the finest resolution and coarser skeletons read its partial sums at
every (n_steps / level)-th step. Coarser maxima are then below finer ones
path by path.
"""
import logging
from typing import Dict, List, Tuple

import numpy as np

from config.settings import SETTINGS

from ..core.errors import RejectionStarvation
from ..stable.params import StableParams
from ..stable.sampling import stable_variates
from .config import MEANDER, SUPREMUM, MCConfig, MCRun
from .streams import batched_blocks, block_sizes, block_stream, run_blocks

logger = logging.getLogger(__name__)


def observed_levels(cfg: MCConfig) -> Tuple[int, ...]:
    return tuple(sorted(set(cfg.levels) | {cfg.n_steps}))


def _partial_sums(params: StableParams, cfg: MCConfig, n_paths: int, rng: np.random.Generator) -> np.ndarray:
    dt = cfg.horizon / cfg.n_steps
    increments = stable_variates(params, (n_paths, cfg.n_steps), rng)
    increments *= dt ** params.eta
    return np.cumsum(increments, axis=1)


def _on_level(sums: np.ndarray, n_steps: int, level: int) -> np.ndarray:
    stride = n_steps // level
    return sums[:, stride - 1::stride]


# =============================================================================
# SUPREMUM
# =============================================================================

def simulate_supremum_levels(params: StableParams, cfg: MCConfig) -> Dict[int, MCRun]:
    """
    Coupled supremum runs, one per observed level.

    Each sample is max(0, max_k X_{k t / level}) of one simulated path.
    """
    levels = observed_levels(cfg)
    sizes = block_sizes(cfg.n_paths, cfg.block_paths)

    def work(block: int):
        rng = block_stream(cfg.seed, block, SUPREMUM)
        sums = _partial_sums(params, cfg, sizes[block], rng)
        maxima = [np.maximum(_on_level(sums, cfg.n_steps, n).max(axis=1), 0.0) for n in levels]
        return np.stack(maxima), sums[:, -1].copy()

    results = run_blocks(work, range(len(sizes)), cfg.workers)
    maxima = np.concatenate([r[0] for r in results], axis=1)
    endpoints = np.concatenate([r[1] for r in results])

    logger.info(
        "supremum: %d paths, levels %s, P(S=0) on finest level = %.4g",
        cfg.n_paths, levels, float(np.mean(maxima[-1] == 0.0)),
    )
    return {
        n: MCRun(
            samples=maxima[i],
            config=cfg,
            level=n,
            kind=SUPREMUM,
            n_attempted=cfg.n_paths,
            endpoints=endpoints,
            params=params,
        )
        for i, n in enumerate(levels)
    }


def simulate_supremum(params: StableParams, cfg: MCConfig) -> MCRun:
    """n_paths draws of the supremum of the n_steps skeleton over [0, horizon]."""
    return simulate_supremum_levels(params, cfg)[cfg.n_steps]


# =============================================================================
# MEANDER
# =============================================================================

def _starvation_check_after() -> int:
    return int(np.ceil(10.0 / SETTINGS.MIN_ACCEPTANCE_RATE))


def simulate_meander_levels(params: StableParams, cfg: MCConfig) -> Dict[int, MCRun]:
    """
    Coupled meander runs by rejection, one per observed level.

    A path is accepted on a level when every partial sum on that level's
    mesh is strictly positive; the sample is its endpoint at the horizon.
    Blocks are drawn until the finest level has n_paths acceptances. Blocks
    are consumed in index order, so the stopping point does not depend on
    the worker count.

    Raises:
        RejectionStarvation: finest-level acceptance below
            SETTINGS.MIN_ACCEPTANCE_RATE
    """
    levels = observed_levels(cfg)
    block = cfg.block_paths
    check_after = _starvation_check_after()
    min_rate = SETTINGS.MIN_ACCEPTANCE_RATE

    def work(index: int):
        rng = block_stream(cfg.seed, index, MEANDER)
        sums = _partial_sums(params, cfg, block, rng)
        end = sums[:, -1]
        return [end[np.all(_on_level(sums, cfg.n_steps, n) > 0.0, axis=1)] for n in levels]

    accepted: List[List[np.ndarray]] = [[] for _ in levels]
    counts = np.zeros(len(levels), dtype=np.int64)
    attempted = 0
    done = False
    for batch in batched_blocks(cfg.workers):
        for per_level in run_blocks(work, batch, cfg.workers):
            attempted += block
            for i, values in enumerate(per_level):
                accepted[i].append(values)
                counts[i] += values.size
            rate = counts[-1] / attempted
            if counts[-1] >= cfg.n_paths:
                done = True
                break
            if attempted >= check_after and rate < min_rate:
                raise RejectionStarvation(
                    f"meander acceptance {rate:.3g} < {min_rate:g} after {attempted} paths "
                    f"at n_steps={cfg.n_steps}"
                )
        if done:
            break

    runs = {}
    for i, n in enumerate(levels):
        rate = counts[i] / attempted
        runs[n] = MCRun(
            samples=np.concatenate(accepted[i]),
            config=cfg,
            level=n,
            kind=MEANDER,
            acceptance_rate=float(rate),
            n_attempted=attempted,
            params=params,
        )
        logger.info("meander level %d: accepted %d of %d (rate %.4g)", n, counts[i], attempted, rate)
    return runs


def simulate_meander(params: StableParams, cfg: MCConfig) -> MCRun:
    """Accepted meander endpoints on the n_steps skeleton."""
    return simulate_meander_levels(params, cfg)[cfg.n_steps]


def acceptance_decay(runs: Dict[int, MCRun]) -> float:
    """
    Log-log slope of acceptance rate against level.

    The stay-positive probability of an n-step walk with P(S_k > 0) = rho
    decays like n^{rho - 1}; the slope estimates rho - 1.
    """
    levels = np.array(sorted(runs), dtype=float)
    rates = np.array([runs[int(n)].acceptance_rate for n in levels])
    if levels.size < 2:
        raise ValueError("acceptance decay needs at least two levels")
    slope, _ = np.polyfit(np.log(levels), np.log(rates), 1)
    return float(slope)
