# Sampling small-world graphs
#
# Vertices sit on a circle. Neighbours on the circle are always joined, and
# every other pair at circle distance k is joined independently with
# probability c * k**(-a). The constant c is picked so that a vertex expects
# about 2b long-range edges.

import numpy as np

from swgraph import ModelParams, mean_degree_exact, sample_sw

params = ModelParams(2001, 0.5, 10.0)
print("c =", params.c)
print("p(2), p(n/2) =", params.probabilities()[2], params.probabilities()[-1])

# One draw. Seeds are fully reproducible.
g = sample_sw(params, seed=7)
deg = g.degrees()
print(g.num_edges, "edges, mean degree", deg.mean(), "max", deg.max())

# Averaging over a handful of seeds lands close to the exact mean degree,
# which is 2 (the ring) plus the sum of long-range probabilities.
means = [sample_sw(params, s).degrees().mean() for s in range(20)]
print("empirical", np.mean(means), "exact", mean_degree_exact(params), "2b + 2 =", 2 * params.b + 2)

# Long-range edges get rarer with distance. Count them per circle distance.
d = np.abs(g.edges[:, 1] - g.edges[:, 0])
d = np.minimum(d, g.n - d)
hist = np.bincount(d, minlength=params.n // 2 + 1)
for lo, hi in [(2, 10), (10, 100), (100, 1000)]:
    print(f"distance {lo}-{hi}: {hist[lo:hi].sum()} edges")
