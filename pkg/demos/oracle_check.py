"""Cross-check the fast transform against brute-force enumeration.

The oracle enumerates every connected vertex subset of size at most four,
so it is only practical for small graphs. Three legs are compared: fast raw
against enumerated raw, fast net against enumerated induced counts, and the
conversion matrix applied to the induced counts against the raw counts.
"""

import numpy as np

from fastgraphlet import SparseAdjacency, full_u16, graphlet_transform
from fastgraphlet.oracle import cross_check

rng = np.random.default_rng(42)
n = 30
upper = np.triu(rng.random((n, n)) < 0.2, 1)
g = SparseAdjacency.from_edges(n, np.argwhere(upper))
print(f"random graph: {g.n} vertices, {g.m} edges")

raw, net = graphlet_transform(g)
print(cross_check(g, raw, net))

# a deliberately wrong coefficient is caught by the third leg
print("\nwith U16[5, 15] changed from 6 to 5:")
print(cross_check(g, raw, net, U=full_u16().with_entry(5, 15, 5)))
