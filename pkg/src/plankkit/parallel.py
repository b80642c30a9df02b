"""Order-preserving map over trials, optionally in worker processes."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np


def default_workers() -> int:
    return os.cpu_count() or 1


def trial_rng(master_seed: int, index: int) -> np.random.Generator:
    """Independent stream for one trial; depends only on (seed, index)."""
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), int(index)]))


def pmap(fn, items, workers: int = 1):
    items = list(items)
    if workers is None:
        workers = default_workers()
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))
