"""
Deterministic worker pool helpers.

Date: 2026-10-18

Work is cut into blocks whose boundaries depend only on the problem size
(never on the worker count). Blocks run on a ThreadPoolExecutor and their
results come back in block order, so any reduction done by the caller is
identical for 1, 4 or 16 threads.

Monte Carlo blocks draw from substreams spawned off one SeedSequence:
block i always receives the i-th child, whatever thread executes it.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Sequence, Tuple, TypeVar

import numpy as np

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

DEFAULT_MC_BLOCK = 50_000
MC_BATCHES = 32


def ordered_map(fn: Callable[[T], R], items: Sequence[T], threads: int = 1) -> List[R]:
    """Apply fn to every item; results in input order."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(fn, items))


def split_range(n: int, block: int) -> List[Tuple[int, int]]:
    """Half-open [start, stop) blocks of at most `block` items covering range(n)."""
    return [(start, min(start + block, n)) for start in range(0, n, block)]


def chunk(items: Sequence[T], parts: int) -> List[Sequence[T]]:
    """Split a sequence into `parts` contiguous slices (fewer if it is short)."""
    if not items:
        return []
    size = math.ceil(len(items) / max(parts, 1))
    return [items[i:i + size] for i in range(0, len(items), size)]


def mc_blocks(
    n_samples: int, seed: int, block: int = DEFAULT_MC_BLOCK
) -> List[Tuple[int, np.random.SeedSequence]]:
    """
    Block sizes and substreams for a Monte Carlo run of n_samples draws.

    Returns:
        [(block_size, seed_sequence), ...] in fixed order.
    """
    sizes = [stop - start for start, stop in split_range(n_samples, block)]
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    return list(zip(sizes, children))


def run_mc(
    sampler: Callable[[int, np.random.SeedSequence], np.ndarray],
    n_samples: int,
    seed: int,
    threads: int = 1,
    block: int = DEFAULT_MC_BLOCK,
) -> np.ndarray:
    """
    Run `sampler(size, seed_sequence)` per block and concatenate in block
    order. The sampler returns an array whose first axis has length size.
    """
    blocks = mc_blocks(n_samples, seed, block)
    logger.debug("monte carlo: %d samples in %d blocks on %d threads", n_samples, len(blocks), threads)
    parts = ordered_map(lambda b: sampler(*b), blocks, threads)
    return np.concatenate(parts, axis=0)


def exact_sum(values: Iterable[float]) -> float:
    """Compensated (correctly rounded) sum."""
    return math.fsum(values)


def exact_mean(values: np.ndarray) -> float:
    return math.fsum(values) / values.size


def batch_stderr(values: np.ndarray, batches: int = MC_BATCHES) -> float:
    """Standard error of the mean from `batches` contiguous batch means."""
    means = np.array([exact_mean(b) for b in np.array_split(values, batches)])
    return float(np.std(means, ddof=1) / math.sqrt(batches))
