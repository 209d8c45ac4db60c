"""The SW(a, b) small-world model, the ER comparison model, and labelled graphs.

Vertices are labelled 1..n around a circle. Every SW graph contains the
nearest-neighbour cycle; each pair at circle distance k >= 2 is joined
independently with probability p(k) = c k^-a, c = b (1-a) (2/n)^(1-a).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import InvalidParams

# ---------------------------------------------------------------------------
# random streams
# ---------------------------------------------------------------------------


def make_rng(seed: int) -> np.random.Generator:
    """Philox-4x64 stream keyed through NumPy's SeedSequence; platform independent."""
    if seed < 0 or seed >= 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return np.random.Generator(np.random.Philox(int(seed)))


def trial_seed(base: int, trial: int) -> int:
    """Per-trial seed: base XOR trial index."""
    return (int(base) ^ int(trial)) & (2**64 - 1)


# ---------------------------------------------------------------------------
# parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModelParams:
    n: int
    a: float
    b: float

    def __post_init__(self):
        n, a, b = self.n, self.a, self.b
        if int(n) != n or n < 5:
            raise InvalidParams(f"n must be an integer >= 5, got {n!r}")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "a", float(a))
        object.__setattr__(self, "b", float(b))
        if not 0.0 < self.a < 1.0:
            raise InvalidParams(f"a must lie in (0, 1), got {a!r}")
        if not (self.b > 0.0 and math.isfinite(self.b)):
            raise InvalidParams(f"b must be a positive real, got {b!r}")
        p2 = self.c * 2.0 ** (-self.a)
        if p2 > 1.0:
            raise InvalidParams(
                f"p(2) = {p2:.6g} > 1: n = {self.n} is too small for a = {self.a}, b = {self.b}"
            )

    @property
    def c(self) -> float:
        return self.b * (1.0 - self.a) * (2.0 / self.n) ** (1.0 - self.a)

    @property
    def max_distance(self) -> int:
        return self.n // 2

    def p(self, k: int) -> float:
        return edge_probability(self, k)

    def probabilities(self) -> np.ndarray:
        """p(k) indexed by distance; entry 0 is unused (nan), entry 1 is 1."""
        return _probability_table(self.n, self.a, self.b)

    def pair_counts(self) -> np.ndarray:
        """Number of unordered pairs at each circle distance (index 0 unused)."""
        return pair_counts(self.n)

    @property
    def a_str(self) -> str:
        return repr(self.a)

    @property
    def b_str(self) -> str:
        return repr(self.b)


def _probability_table(n: int, a: float, b: float) -> np.ndarray:
    m = n // 2
    k = np.arange(m + 1, dtype=float)
    k[0] = np.nan
    c = b * (1.0 - a) * (2.0 / n) ** (1.0 - a)
    p = c * k ** (-a)
    p[1] = 1.0
    return p


def pair_counts(n: int) -> np.ndarray:
    m = n // 2
    counts = np.full(m + 1, n, dtype=np.int64)
    counts[0] = 0
    if n % 2 == 0:
        counts[m] = n // 2
    return counts


def edge_probability(params: ModelParams, k: int) -> float:
    if int(k) != k or not 1 <= k <= params.max_distance:
        raise ValueError(f"distance {k} outside 1..{params.max_distance}")
    if k == 1:
        return 1.0
    return params.c * float(k) ** (-params.a)


def circle_distance(n: int, u: int, v: int) -> int:
    if u == v:
        raise ValueError("circle distance needs distinct vertices")
    if not (1 <= u <= n and 1 <= v <= n):
        raise ValueError("vertex outside 1..n")
    d = abs(u - v)
    return min(d, n - d)


def _distances(n: int, edges: np.ndarray) -> np.ndarray:
    d = np.abs(edges[:, 1] - edges[:, 0])
    return np.minimum(d, n - d)


# ---------------------------------------------------------------------------
# graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LabelledGraph:
    """Simple undirected graph on vertices 1..n.

    ``edges`` is an (m, 2) int64 array of 1-indexed pairs with u < v, sorted
    lexicographically. Instances are immutable.
    """

    n: int
    edges: np.ndarray = field(repr=False)

    def __init__(self, n: int, edges: Iterable = ()):
        n = int(n)
        if n < 1:
            raise ValueError("graph needs at least one vertex")
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        arr = arr.reshape(-1, 2)
        if arr.size:
            if arr.min() < 1 or arr.max() > n:
                raise ValueError("edge endpoint outside 1..n")
            if np.any(arr[:, 0] == arr[:, 1]):
                raise ValueError("self-loops are not allowed")
            arr = np.sort(arr, axis=1)
            codes = np.unique(arr[:, 0] * (n + 1) + arr[:, 1])
            if len(codes) != len(arr):
                raise ValueError("duplicate edges are not allowed")
            arr = np.stack([codes // (n + 1), codes % (n + 1)], axis=1)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", _freeze(arr))

    @classmethod
    def _trusted(cls, n: int, edges: np.ndarray) -> "LabelledGraph":
        """Build from an already sorted, deduplicated, u < v edge array."""
        g = object.__new__(cls)
        object.__setattr__(g, "n", int(n))
        object.__setattr__(g, "edges", _freeze(np.asarray(edges, dtype=np.int64).reshape(-1, 2)))
        return g

    @classmethod
    def cycle(cls, n: int) -> "LabelledGraph":
        u = np.arange(1, n + 1)
        v = np.roll(u, -1)
        return cls(n, np.stack([u, v], axis=1)) if n >= 3 else cls(n, [(1, 2)] if n == 2 else [])

    @classmethod
    def complete(cls, n: int) -> "LabelledGraph":
        iu = np.triu_indices(n, 1)
        return cls._trusted(n, np.stack(iu, axis=1) + 1)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def __len__(self) -> int:
        return self.num_edges

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabelledGraph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __hash__(self) -> int:
        return hash((self.n, self.edges.tobytes()))

    def __repr__(self) -> str:
        return f"LabelledGraph(n={self.n}, num_edges={self.num_edges})"

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(u), int(v)) for u, v in self.edges}

    def edge_codes(self) -> np.ndarray:
        """0-indexed codes u * n + v (u < v), ascending."""
        e = self.edges - 1
        return e[:, 0] * self.n + e[:, 1]

    def degrees(self) -> np.ndarray:
        """Degree of vertex u at index u - 1."""
        return np.bincount(self.edges.ravel() - 1, minlength=self.n)

    def degree(self, u: int) -> int:
        return len(self._adjacency[u - 1])

    @cached_property
    def _adjacency(self) -> tuple[frozenset, ...]:
        nbrs = [[] for _ in range(self.n)]
        for u, v in self.edges.tolist():
            nbrs[u - 1].append(v)
            nbrs[v - 1].append(u)
        return tuple(frozenset(x) for x in nbrs)

    def neighbors(self, u: int) -> frozenset:
        return self._adjacency[u - 1]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adjacency[u - 1]

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """0-indexed (indptr, indices) with neighbours listed in ascending order."""
        e = self.edges - 1
        src = np.concatenate([e[:, 0], e[:, 1]])
        dst = np.concatenate([e[:, 1], e[:, 0]])
        order = np.lexsort((dst, src))
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=self.n), out=indptr[1:])
        return _freeze(indptr), _freeze(dst[order])

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=bool)
        e = self.edges - 1
        a[e[:, 0], e[:, 1]] = True
        a[e[:, 1], e[:, 0]] = True
        return a

    def relabel(self, images) -> "LabelledGraph":
        """Graph with edge (pi(u), pi(v)) for every edge (u, v); images[u-1] = pi(u)."""
        img = np.asarray(images, dtype=np.int64)
        e = img[self.edges - 1]
        return LabelledGraph(self.n, e)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def _sample_subsets(rng: np.random.Generator, sizes: np.ndarray, counts: np.ndarray):
    """Uniform subsets of sizes[i] items with counts[i] elements per class.

    Returns (class index, position) arrays. Positions are drawn with
    replacement and deduplicated until each class holds its count; classes
    needing more than half their items are drawn as a complement.
    """
    sizes = np.asarray(sizes, dtype=np.int64)
    counts = np.asarray(counts, dtype=np.int64)
    flip = counts * 2 > sizes
    target = np.where(flip, sizes - counts, counts)
    stride = int(sizes.max()) + 1 if len(sizes) else 1
    chosen = np.empty(0, dtype=np.int64)
    need = target.copy()
    while need.any():
        cls = np.repeat(np.arange(len(sizes)), need)
        pos = (rng.random(len(cls)) * sizes[cls]).astype(np.int64)
        chosen = np.unique(np.concatenate([chosen, cls * stride + pos]))
        need = target - np.bincount(chosen // stride, minlength=len(sizes))
    cls, pos = chosen // stride, chosen % stride
    if flip.any():
        keep = ~flip[cls]
        parts_c, parts_p = [cls[keep]], [pos[keep]]
        for i in np.flatnonzero(flip):
            mask = np.ones(sizes[i], dtype=bool)
            mask[pos[cls == i]] = False
            idx = np.flatnonzero(mask)
            parts_c.append(np.full(len(idx), i, dtype=np.int64))
            parts_p.append(idx)
        cls, pos = np.concatenate(parts_c), np.concatenate(parts_p)
    return cls, pos


def sample_sw(params: ModelParams, seed: int) -> LabelledGraph:
    """Draw G ~ SW(a, b) at size n; a deterministic function of (params, seed).

    Distances are processed in increasing order: the edge count at each
    distance is Binomial(pairs, p(k)) and the edge positions are a uniform
    subset of that distance class.
    """
    n = params.n
    rng = make_rng(seed)
    p = params.probabilities()
    sizes = params.pair_counts()
    dist = np.arange(2, params.max_distance + 1)
    counts = rng.binomial(sizes[dist], p[dist])
    cls, start = _sample_subsets(rng, sizes[dist], counts)
    k = dist[cls]
    u = start
    v = (start + k) % n
    ring = np.arange(n)
    u = np.concatenate([u, ring])
    v = np.concatenate([v, (ring + 1) % n])
    lo, hi = np.minimum(u, v), np.maximum(u, v)
    codes = np.sort(lo * n + hi)
    edges = np.stack([codes // n, codes % n], axis=1) + 1
    return LabelledGraph._trusted(n, edges)


def sample_er(n: int, p: float, seed: int) -> LabelledGraph:
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = make_rng(seed)
    total = n * (n - 1) // 2
    m = int(rng.binomial(total, p)) if total else 0
    _, idx = _sample_subsets(rng, np.array([max(total, 1)]), np.array([m]))
    idx = np.sort(idx)
    rows = np.arange(n, dtype=np.int64)
    offsets = rows * n - rows * (rows + 1) // 2  # index of pair (u, u+1), 0-indexed
    u = np.searchsorted(offsets, idx, side="right") - 1
    v = idx - offsets[u] + u + 1
    return LabelledGraph._trusted(n, np.stack([u, v], axis=1) + 1)


# ---------------------------------------------------------------------------
# likelihood and admissibility
# ---------------------------------------------------------------------------


def distance_edge_counts(g: LabelledGraph) -> np.ndarray:
    """Number of edges of g at each circle distance 0..n//2."""
    return np.bincount(_distances(g.n, g.edges), minlength=g.n // 2 + 1)


def contains_cycle(g: LabelledGraph) -> bool:
    if g.n < 3:
        return g.n < 2 or g.num_edges == 1
    return int(distance_edge_counts(g)[1]) == g.n


def log_likelihood_sw(params: ModelParams, g: LabelledGraph) -> float:
    """log P(g) under SW(a, b); -inf when the base cycle is incomplete."""
    if g.n != params.n:
        raise ValueError(f"graph has {g.n} vertices, model has {params.n}")
    counts = distance_edge_counts(g)
    if counts[1] != params.n:
        return -math.inf
    p = params.probabilities()[2:]
    present = counts[2:].astype(float)
    absent = params.pair_counts()[2:] - present
    with np.errstate(divide="ignore"):
        terms = present * np.log(p) + absent * np.log1p(-p)
    # 0 * log(0) cannot arise from a positive count, but guard p = 1 with no misses
    terms = np.where(absent == 0, present * np.log(p), terms)
    return float(np.sum(terms))


# ---------------------------------------------------------------------------
# edge-list text format
# ---------------------------------------------------------------------------


def format_edge_list(g: LabelledGraph) -> str:
    lines = [f"n {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges.tolist())
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> LabelledGraph:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise ValueError(f"line {lineno}: expected 'n <count>' header")
            n = int(parts[1])
            continue
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v'")
        edges.append((int(parts[0]), int(parts[1])))
    if n is None:
        raise ValueError("missing 'n <count>' header")
    return LabelledGraph(n, edges)


def write_edge_list(g: LabelledGraph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_edge_list(g))


def read_edge_list(path) -> LabelledGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())
