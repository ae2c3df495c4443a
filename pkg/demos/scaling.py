"""Time and memory on random 4-regular graphs of doubling size.

With the degree fixed, work and auxiliary storage should both grow linearly
in the number of vertices. The P2-row pass also reports how many times it
touched its sparse accumulator, next to the 2 * dmax * m bound.
"""

import time

import numpy as np

from fastgraphlet import SparseAdjacency, TransformStats, graphlet_transform


def random_regular(n, d, rng):
    # configuration model, resampled until simple
    while True:
        stubs = rng.permutation(np.repeat(np.arange(n), d)).reshape(-1, 2)
        u, v = stubs.min(1), stubs.max(1)
        if (u != v).all() and len(np.unique(u * n + v)) == len(u):
            return SparseAdjacency.from_edges(n, stubs)


rng = np.random.default_rng(0)
graphlet_transform(random_regular(100, 4, rng))  # compile kernels

prev = None
for n in [10_000, 20_000, 40_000, 80_000]:
    g = random_regular(n, 4, rng)
    best = float("inf")
    for _ in range(5):
        t0 = time.perf_counter()
        graphlet_transform(g)
        best = min(best, time.perf_counter() - t0)
    stats = TransformStats()
    graphlet_transform(g, stats=stats)
    ratio = f"x{best / prev:.2f}" if prev else ""
    print(
        f"n={n:>6d}  {best * 1e3:7.1f} ms {ratio:>6s}  "
        f"touches {stats.p2_touches} <= {stats.p2_touch_bound}  "
        f"aux {stats.peak_aux_words} words = {stats.mem_c1:.1f} m + {stats.mem_c2:.1f} n"
    )
    prev = best
