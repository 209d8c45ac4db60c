"""Defects, automorphism groups, canonical forms and admissible-isomorph counts.

Two independent engines are provided. Small graphs (n <= ENUMERATION_CAP) can
be handled by brute force over all n! relabellings; this is the oracle. Any n
goes through an individualization-refinement search: colour refinement to an
equitable partition, branching on the first non-singleton cell, pruning
children that lie in one orbit of the automorphisms found so far. The
smallest leaf certificate is the canonical form and |Aut| is the product of
first-path orbit sizes.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import NotAdmissible, ResourceLimit, TooLarge
from .model import LabelledGraph, contains_cycle

ENUMERATION_CAP = 9
SEARCH_NODE_BUDGET = 200_000
_CHUNK = 40_320


# ---------------------------------------------------------------------------
# permutations
# ---------------------------------------------------------------------------


class Permutation:
    """Bijection of {1..n}; ``images[u-1] = pi(u)``."""

    __slots__ = ("images",)

    def __init__(self, images):
        arr = np.asarray(images, dtype=np.int64).ravel()
        n = len(arr)
        if n and not np.array_equal(np.sort(arr), np.arange(1, n + 1)):
            raise ValueError("images must be a permutation of 1..n")
        arr.setflags(write=False)
        self.images = arr

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(1, n + 1))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Permutation":
        img = np.arange(1, n + 1)
        img[i - 1], img[j - 1] = j, i
        return cls(img)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "Permutation":
        return cls(rng.permutation(n) + 1)

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, u: int) -> int:
        return int(self.images[u - 1])

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and np.array_equal(self.images, other.images)

    def __hash__(self) -> int:
        return hash(self.images.tobytes())

    def __repr__(self) -> str:
        return f"Permutation({self.images.tolist()})"

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self.images)
        inv[self.images - 1] = np.arange(1, self.n + 1)
        return Permutation(inv)

    def compose(self, other: "Permutation") -> "Permutation":
        """self o other: u -> self(other(u))."""
        if other.n != self.n:
            raise ValueError("permutations act on different sets")
        return Permutation(self.images[other.images - 1])

    __matmul__ = compose

    def moved(self) -> np.ndarray:
        return np.flatnonzero(self.images != np.arange(1, self.n + 1)) + 1

    @property
    def degree(self) -> int:
        """Number of points not fixed."""
        return len(self.moved())

    def is_identity(self) -> bool:
        return self.degree == 0


def _check_same_n(g: LabelledGraph, pi: Permutation) -> None:
    if g.n != pi.n:
        raise ValueError(f"permutation on {pi.n} points applied to a graph on {g.n}")


# ---------------------------------------------------------------------------
# defects
# ---------------------------------------------------------------------------


def vertex_defect(g: LabelledGraph, pi: Permutation, u: int) -> int:
    """|N(pi(u)) symmetric-difference pi(N(u))|."""
    _check_same_n(g, pi)
    if not 1 <= u <= g.n:
        raise ValueError("vertex outside 1..n")
    image = {pi(w) for w in g.neighbors(u)}
    return len(g.neighbors(pi(u)) ^ image)


def _vertex_defects(g: LabelledGraph, pi: Permutation) -> np.ndarray:
    return np.array([vertex_defect(g, pi, u) for u in range(1, g.n + 1)], dtype=np.int64)


def graph_defect(g: LabelledGraph, pi: Permutation) -> int:
    _check_same_n(g, pi)
    return int(_vertex_defects(g, pi).max()) if g.n else 0


def z_statistic(g: LabelledGraph, pi: Permutation) -> int:
    """Sum of vertex defects over the points pi moves."""
    _check_same_n(g, pi)
    return sum(vertex_defect(g, pi, int(u)) for u in pi.moved())


# ---------------------------------------------------------------------------
# brute-force oracles
# ---------------------------------------------------------------------------


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise TooLarge(f"n = {n} exceeds the enumeration cap {cap}")


@lru_cache(maxsize=None)
def _all_permutations(n: int) -> np.ndarray:
    """Every permutation of 0..n-1 as rows, identity first."""
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int8).reshape(-1, n)
    perms.setflags(write=False)
    return perms


def _perm_chunks(n: int):
    perms = _all_permutations(n)
    for start in range(0, len(perms), _CHUNK):
        yield perms[start:start + _CHUNK].astype(np.intp)


def aut_size_enumerate(g: LabelledGraph, cap: int = ENUMERATION_CAP) -> int:
    _check_cap(g.n, cap)
    if g.num_edges == 0:
        return math.factorial(g.n)
    adj = g.adjacency_matrix()
    eu, ev = (g.edges - 1).T
    count = 0
    for p in _perm_chunks(g.n):
        count += int(adj[p[:, eu], p[:, ev]].all(axis=1).sum())
    return count


def total_defect(g: LabelledGraph, cap: int = ENUMERATION_CAP) -> int:
    """min over non-identity pi of the graph defect, by enumeration."""
    _check_cap(g.n, cap)
    if g.n < 2:
        raise ValueError("total defect needs at least two vertices")
    adj = g.adjacency_matrix()
    best = None
    for p in _perm_chunks(g.n):
        conj = adj[p[:, :, None], p[:, None, :]]
        worst = (conj ^ adj).sum(axis=2).max(axis=1)
        identity = (p == np.arange(g.n)).all(axis=1)
        worst = worst[~identity]
        if len(worst):
            m = int(worst.min())
            best = m if best is None else min(best, m)
    return best


def tau_count(g: LabelledGraph, cap: int = ENUMERATION_CAP) -> int:
    """Number of distinct labelled graphs isomorphic to g that contain the base cycle."""
    if not is_admissible(g):
        raise NotAdmissible("graph does not contain the base cycle")
    n = g.n
    _check_cap(n, cap)
    pair_bit = np.zeros((n, n), dtype=np.int64)
    iu, iv = np.triu_indices(n, 1)
    bits = np.int64(1) << np.arange(len(iu), dtype=np.int64)
    pair_bit[iu, iv] = bits
    pair_bit[iv, iu] = bits
    ring = np.arange(n)
    cycle_mask = np.bitwise_or.reduce(pair_bit[ring, (ring + 1) % n])
    eu, ev = (g.edges - 1).T
    seen = []
    for p in _perm_chunks(n):
        masks = np.bitwise_or.reduce(pair_bit[p[:, eu], p[:, ev]], axis=1)
        seen.append(np.unique(masks))
    masks = np.unique(np.concatenate(seen))
    return int(np.count_nonzero((masks & cycle_mask) == cycle_mask))


def tau_upper_bound(n: int, b: float) -> float:
    """n (5b)^(n-1), valid when the maximum degree is at most 9b/2."""
    return n * (5.0 * b) ** (n - 1)


def tau_degree_bound(n: int, max_degree: int) -> int:
    return n * max_degree ** (n - 1)


def is_admissible(g: LabelledGraph) -> bool:
    """Whether g contains every nearest-neighbour edge of the base cycle."""
    return contains_cycle(g)


# ---------------------------------------------------------------------------
# individualization-refinement
# ---------------------------------------------------------------------------


class _Refiner:
    """Colour refinement on a fixed graph.

    Colours are canonical ranks: each round a vertex is described by its
    current colour followed by the sorted colours of its neighbours, and the
    new colour is the rank of that row among the distinct rows. Ranking keeps
    the old colour order, so partitions stay ordered.
    """

    def __init__(self, g: LabelledGraph):
        self.n = g.n
        indptr, indices = g.csr
        deg = np.diff(indptr)
        self.width = int(deg.max()) if self.n else 0
        rows = np.repeat(np.arange(self.n), deg)
        cols = np.arange(len(indices)) - np.repeat(indptr[:-1], deg)
        self.rows, self.cols, self.indices = rows, cols, indices

    def refine(self, colour: np.ndarray) -> np.ndarray:
        cells = len(np.unique(colour))
        while True:
            table = np.full((self.n, self.width + 1), -1, dtype=np.int64)
            table[self.rows, self.cols + 1] = colour[self.indices]
            table[:, 1:].sort(axis=1)
            table[:, 0] = colour
            _, colour = np.unique(table, axis=0, return_inverse=True)
            colour = colour.ravel().astype(np.int64)
            new_cells = int(colour.max()) + 1 if self.n else 0
            if new_cells == cells:
                return colour
            cells = new_cells


def _individualize(colour: np.ndarray, w: int) -> np.ndarray:
    out = 2 * colour
    out[w] -= 1
    return out


def _target_cell(colour: np.ndarray):
    counts = np.bincount(colour)
    big = np.flatnonzero(counts > 1)
    if not len(big):
        return None
    return np.flatnonzero(colour == big[0])


def _certificate(g: LabelledGraph, label: np.ndarray) -> np.ndarray:
    e = label[g.edges - 1]
    lo, hi = e.min(axis=1), e.max(axis=1)
    return np.sort(lo * g.n + hi)


def _less(x: np.ndarray, y: np.ndarray) -> bool:
    diff = np.flatnonzero(x != y)
    return bool(len(diff)) and x[diff[0]] < y[diff[0]]


class _Orbits:
    """Orbit partition of the group generated by a subset of generators."""

    def __init__(self, n: int):
        self.n = n
        self.generators: list[np.ndarray] = []

    def add(self, gen: np.ndarray) -> None:
        self.generators.append(gen)

    def labels(self, prefix: list[int]) -> np.ndarray:
        fix = np.asarray(prefix, dtype=np.int64)
        gens = [g for g in self.generators if np.array_equal(g[fix], fix)]
        if not gens:
            return np.arange(self.n)
        src = np.tile(np.arange(self.n), len(gens))
        dst = np.concatenate(gens)
        m = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(self.n, self.n))
        return connected_components(m, directed=True, connection="weak")[1]


@dataclass
class _Frame:
    colour: np.ndarray
    prefix: list[int]
    on_first: bool
    cell: np.ndarray | None = None
    next_index: int = 0
    explored: list[int] = field(default_factory=list)
    orbit_key: int = -1
    orbit_labels: np.ndarray | None = None


@dataclass(frozen=True)
class SearchResult:
    labelling: np.ndarray  # vertex (0-indexed) -> canonical label (0-indexed)
    certificate: np.ndarray
    aut_size: int
    generators: tuple
    nodes: int


def canonical_search(g: LabelledGraph, node_budget: int = SEARCH_NODE_BUDGET) -> SearchResult:
    n = g.n
    refiner = _Refiner(g)
    orbits = _Orbits(n)
    root = refiner.refine(np.zeros(n, dtype=np.int64))
    stack = [_Frame(root, [], True)]
    first_path: list[tuple[list[int], int]] = []
    first_cert = best_cert = first_label = best_label = None
    nodes = 0
    jumping = False

    while stack:
        f = stack[-1]
        if f.cell is None:
            nodes += 1
            if nodes > node_budget:
                raise ResourceLimit(f"canonical search exceeded {node_budget} nodes")
            cell = _target_cell(f.colour)
            if cell is None:
                stack.pop()
                cert = _certificate(g, f.colour)
                if first_cert is None:
                    first_cert = best_cert = cert
                    first_label = best_label = f.colour
                elif np.array_equal(cert, first_cert):
                    orbits.add(_leaf_map(first_label, f.colour))
                    jumping = True
                elif np.array_equal(cert, best_cert):
                    orbits.add(_leaf_map(best_label, f.colour))
                elif _less(cert, best_cert):
                    best_cert, best_label = cert, f.colour
                continue
            f.cell = cell
        if jumping:
            if f.on_first:
                jumping = False
            else:
                stack.pop()
                continue
        child = _next_child(f, orbits)
        if child is None:
            stack.pop()
            continue
        first_child = f.on_first and not f.explored
        if first_child:
            first_path.append((list(f.prefix), child))
        f.explored.append(child)
        colour = refiner.refine(_individualize(f.colour, child))
        stack.append(_Frame(colour, f.prefix + [child], first_child))

    size = 1
    for prefix, w in first_path:
        labels = orbits.labels(prefix)
        size *= int(np.count_nonzero(labels == labels[w]))
    return SearchResult(best_label, best_cert, size, tuple(orbits.generators), nodes)


def _leaf_map(label_a: np.ndarray, label_b: np.ndarray) -> np.ndarray:
    """Automorphism sending each vertex v to the vertex that label_a gives label_b(v)."""
    inv_a = np.empty_like(label_a)
    inv_a[label_a] = np.arange(len(label_a))
    return inv_a[label_b]


def _next_child(f: _Frame, orbits: _Orbits):
    while f.next_index < len(f.cell):
        w = int(f.cell[f.next_index])
        f.next_index += 1
        if f.explored:
            if f.orbit_key != len(orbits.generators):
                f.orbit_labels = orbits.labels(f.prefix)
                f.orbit_key = len(orbits.generators)
            lab = f.orbit_labels
            if lab[w] in {lab[x] for x in f.explored}:
                continue
        return w
    return None


# ---------------------------------------------------------------------------
# public canonical form and |Aut|
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    n: int
    edges: np.ndarray  # canonical (u, v) pairs, 1-indexed, sorted
    aut_size: int
    labelling: np.ndarray  # labelling[v-1] = canonical label of v (1-indexed)

    @property
    def canonical_edge_list(self) -> list[tuple[int, int]]:
        return [(int(u), int(v)) for u, v in self.edges]

    @property
    def graph(self) -> LabelledGraph:
        return LabelledGraph._trusted(self.n, self.edges)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CanonicalForm):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __hash__(self) -> int:
        return hash((self.n, self.edges.tobytes()))


def canonical_form(g: LabelledGraph, node_budget: int = SEARCH_NODE_BUDGET) -> CanonicalForm:
    res = canonical_search(g, node_budget)
    codes = res.certificate
    edges = np.stack([codes // g.n, codes % g.n], axis=1) + 1 if len(codes) else np.empty((0, 2), np.int64)
    return CanonicalForm(g.n, edges.astype(np.int64), res.aut_size, res.labelling + 1)


def aut_size(g: LabelledGraph, method: str = "auto", cap: int = ENUMERATION_CAP,
             node_budget: int = SEARCH_NODE_BUDGET) -> int:
    """|Aut(g)|: enumeration up to the cap under "auto", refinement search above."""
    if method == "auto":
        method = "enumerate" if g.n <= cap else "refine"
    if method == "enumerate":
        return aut_size_enumerate(g, cap)
    if method == "refine":
        return canonical_search(g, node_budget).aut_size
    raise ValueError(f"unknown method {method!r}")


def is_asymmetric(g: LabelledGraph, **kwargs) -> bool:
    return aut_size(g, **kwargs) == 1
