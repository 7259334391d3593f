"""Regenerate the CUSUM-of-squares band half-widths embedded in ``ardlkit._tables``.

Under parameter constancy with Gaussian errors the m recursive residuals are
iid normal, so ``max_r |S_r - r/m|`` depends on m alone.  This script draws
the statistic directly and records its 95% quantile for each m on the grid.

    python tools/cusumsq_table.py > table.txt
"""

from __future__ import annotations

import numpy as np

GRID = list(range(2, 61)) + [70, 80, 90, 100, 120, 150, 200, 300, 400]
REPS = 200_000
SEED = 19690101


def quantile_for(m: int, rng: np.random.Generator, level: float = 0.95) -> float:
    stats = np.empty(REPS)
    line = np.arange(1, m + 1) / m
    chunk = max(1, 4_000_000 // m)
    for start in range(0, REPS, chunk):
        stop = min(REPS, start + chunk)
        sq = rng.standard_normal((stop - start, m)) ** 2
        path = np.cumsum(sq, axis=1)
        path /= path[:, -1:]
        stats[start:stop] = np.abs(path - line).max(axis=1)
    return float(np.quantile(stats, level))


def main() -> None:
    rng = np.random.default_rng(SEED)
    for m in GRID:
        print(f"    {m}: {quantile_for(m, rng):.4f},")


if __name__ == "__main__":
    main()
