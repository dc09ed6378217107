"""
Random substreams and block execution.

Every block of paths gets its own generator, derived from (seed, purpose,
block index) through numpy's SeedSequence spawn keys. Blocks are therefore
independent work units and the samples do not depend on how many threads
run them or in which order they finish.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterator, List, TypeVar

import numpy as np

logger = logging.getLogger(__name__)

T = TypeVar("T")

# Spawn-key prefixes keep supremum and meander streams disjoint for one seed
PURPOSES = {
    "supremum": 0,
    "meander": 1,
    "sampler": 2,
}


def block_stream(seed: int, block: int, purpose: str = "supremum") -> np.random.Generator:
    """Generator for one block: a pure function of (seed, purpose, block)."""
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=(PURPOSES[purpose], int(block)))
    return np.random.default_rng(sequence)


def block_sizes(n_paths: int, block_paths: int) -> List[int]:
    full, rest = divmod(n_paths, block_paths)
    return [block_paths] * full + ([rest] if rest else [])


def run_blocks(work: Callable[[int], T], blocks, workers: int = 1) -> List[T]:
    """
    Run work(block) for every block index, results in block order.

    The result list is ordered by block index whatever the scheduling, so
    any reduction over it is order-fixed.
    """
    blocks = list(blocks)
    if workers <= 1 or len(blocks) <= 1:
        return [work(b) for b in blocks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(work, blocks))


def batched_blocks(workers: int, start: int = 0) -> Iterator[range]:
    """Endless consecutive block-index batches of size `workers`."""
    size = max(1, workers)
    while True:
        yield range(start, start + size)
        start += size
