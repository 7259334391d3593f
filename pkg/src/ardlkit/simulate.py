"""Seeded Monte Carlo harness.

Each replication owns a generator derived from (master_seed, index), so
results do not depend on execution order or the number of workers.
"""

from __future__ import annotations

from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

import numpy as np

__all__ = ["replication_rng", "run_replications", "rejection_rate"]

R = TypeVar("R")


def replication_rng(master_seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), int(index)]))


def run_replications(
    fn: Callable[[np.random.Generator], R],
    n: int,
    master_seed: int,
    workers: int | None = None,
) -> list[R]:
    """Evaluate ``fn(rng_i)`` for i in 0..n-1, returned in index order."""
    tasks = range(n)

    def one(i: int) -> R:
        return fn(replication_rng(master_seed, i))

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, tasks))
    return [one(i) for i in tasks]


def rejection_rate(flags) -> float:
    flags = np.asarray(list(flags), dtype=bool)
    return float(flags.mean()) if flags.size else float("nan")
