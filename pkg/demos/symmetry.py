# Symmetries of sampled graphs
#
# A bare cycle has the dihedral group, 2n automorphisms. A few random chords
# usually destroy every symmetry. Individualization-refinement finds the
# group order fast; for tiny graphs we can also just try every permutation.

from swgraph import LabelledGraph, ModelParams, Permutation, aut_size, canonical_form, sample_sw
from swgraph.model import make_rng
from swgraph.symmetry import graph_defect, tau_count, total_defect, z_statistic

for n in (6, 10, 40):
    print("cycle", n, "aut", aut_size(LabelledGraph.cycle(n)))

g = LabelledGraph(7, [(i, i % 7 + 1) for i in range(1, 8)] + [(1, 3), (2, 6)])
print("refine", aut_size(g, method="refine"), "enumerate", aut_size(g, method="enumerate"))
print("min worst-vertex defect", total_defect(g), "isomorphic admissible copies", tau_count(g))

# Samples at n = 300 are asymmetric.
params = ModelParams(300, 0.5, 30)
sizes = [aut_size(sample_sw(params, s)) for s in range(10)]
print(sizes)

# A transposition moves many edges: the Z statistic counts how many.
g = sample_sw(params, 1)
pi = Permutation.transposition(300, 5, 150)
print("defect", graph_defect(g, pi), "Z", z_statistic(g, pi), "~4b =", 4 * params.b)

# Canonical forms ignore labels.
h = g.relabel(Permutation.random(300, make_rng(3)).images)
print("same structure:", canonical_form(g) == canonical_form(h))
