# How many nats does a small-world graph carry?
#
# Edges are independent, so the labelled-graph entropy is a sum of binary
# entropies over pairs. Compare it with the closed-form growth law and with
# the Monte Carlo average of the negative log-likelihood.

import math

import numpy as np

from swgraph import ModelParams, log_likelihood_sw, sample_sw, sw_entropy_asymptotic, sw_entropy_exact
from swgraph.entropy import compressibility_ratio, sw_entropy_constant, sw_expected_edges

for n in (10**3, 10**4, 10**5, 10**6):
    p = ModelParams(n, 0.5, math.log(n) ** 2)
    h = sw_entropy_exact(p)
    quoted = sw_entropy_asymptotic(p)
    derived = sw_entropy_asymptotic(p, corrected=True)
    print(f"n={n:>8}  H={h:.4e}  rel gap quoted {abs(h - quoted) / h:.4f}  derived {abs(h - derived) / h:.5f}")

# The two constants differ by a^2 log 2 / (1 - a).
for a in (0.3, 0.5, 0.7):
    print(a, sw_entropy_constant(a), sw_entropy_constant(a, corrected=True))

# Entropy is the expected negative log-likelihood.
small = ModelParams(101, 0.5, 5)
nll = np.array([-log_likelihood_sw(small, sample_sw(small, s)) for s in range(2000)])
print("mean -log L", nll.mean(), "+-", nll.std() / math.sqrt(len(nll)), "H", sw_entropy_exact(small))

# Nats per edge keep growing like log n, so the model is not compressible
# to a bounded cost per edge.
for n in (10**3, 10**5):
    p = ModelParams(n, 0.5, math.log(n) ** 2)
    r = compressibility_ratio(sw_entropy_exact(p), sw_expected_edges(p))
    print(n, r, r / math.log(n))
