"""Simple graphs, graph states, isomorphism canonicalization and local-complementation orbits."""
import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from cwsclique.errors import RefusedError, UsageError
from cwsclique.model.gf2 import GF2Matrix

logger = logging.getLogger(__name__)

MAX_EXHAUSTIVE_N = 8
MAX_CANONICAL_N = 10
MAX_STATE_QUBITS = 12
PERM_CHUNK = 8192


@lru_cache(maxsize=None)
def _pairs(n: int) -> Tuple[Tuple[int, int], ...]:
    return tuple(itertools.combinations(range(n), 2))


@lru_cache(maxsize=None)
def _pair_index_arrays(n: int):
    pairs = _pairs(n)
    i = np.array([p[0] for p in pairs], dtype=np.intp)
    j = np.array([p[1] for p in pairs], dtype=np.intp)
    # first pair is the most significant bit of the label
    weights = np.array([1 << (len(pairs) - 1 - k) for k in range(len(pairs))], dtype=np.int64)
    return i, j, weights


@dataclass(frozen=True)
class Graph:
    n: int
    adj: GF2Matrix

    def __post_init__(self):
        if self.adj.shape != (self.n, self.n):
            raise UsageError(f"adjacency must be {self.n}x{self.n}, got {self.adj.shape}")
        for i, row in enumerate(self.adj.rows):
            if (row >> i) & 1:
                raise UsageError(f"self-loop at vertex {i}")
            for j in range(self.n):
                if ((row >> j) & 1) != ((self.adj.rows[j] >> i) & 1):
                    raise UsageError(f"adjacency not symmetric at ({i}, {j})")

    @classmethod
    def from_rows(cls, rows: Sequence[int]) -> "Graph":
        return cls(len(rows), GF2Matrix(tuple(rows), len(rows)))

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        rows = [0] * n
        for i, j in edges:
            if i == j:
                raise UsageError(f"self-loop at vertex {i}")
            rows[i] |= 1 << j
            rows[j] |= 1 << i
        return cls.from_rows(rows)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls.from_rows([0] * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls.from_rows([full ^ (1 << i) for i in range(n)])

    @classmethod
    def ring(cls, n: int) -> "Graph":
        if n < 3:
            raise UsageError("a ring needs at least 3 vertices")
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def star(cls, n: int, center: int = 0) -> "Graph":
        return cls.from_edges(n, [(center, j) for j in range(n) if j != center])

    @classmethod
    def from_label(cls, n: int, label: int) -> "Graph":
        pairs = _pairs(n)
        edges = [pairs[k] for k in range(len(pairs)) if (label >> (len(pairs) - 1 - k)) & 1]
        return cls.from_edges(n, edges)

    @property
    def rows(self) -> Tuple[int, ...]:
        return self.adj.rows

    def neighbors(self, v: int) -> int:
        return self.adj.rows[v]

    def has_edge(self, i: int, j: int) -> bool:
        return bool((self.adj.rows[i] >> j) & 1)

    def edges(self) -> List[Tuple[int, int]]:
        return [(i, j) for i, j in _pairs(self.n) if self.has_edge(i, j)]

    def degrees(self) -> Tuple[int, ...]:
        return tuple(r.bit_count() for r in self.adj.rows)

    def label(self) -> int:
        """Adjacency encoding under the identity labeling."""
        pairs = _pairs(self.n)
        out = 0
        for k, (i, j) in enumerate(pairs):
            if self.has_edge(i, j):
                out |= 1 << (len(pairs) - 1 - k)
        return out

    def to_array(self) -> np.ndarray:
        return self.adj.to_array()


def label_hex(n: int, label: int) -> str:
    width = max(1, (len(_pairs(n)) + 3) // 4)
    return format(label, f"0{width}x")


def permute(g: Graph, perm: Sequence[int]) -> Graph:
    """Relabel so that new vertex ``i`` is old vertex ``perm[i]``."""
    if sorted(perm) != list(range(g.n)):
        raise UsageError(f"not a permutation of {g.n} vertices: {perm}")
    return Graph.from_edges(g.n, [(i, j) for i, j in _pairs(g.n) if g.has_edge(perm[i], perm[j])])


def enumerate_graphs(n: int, dedup: Optional[str] = None) -> Iterator[Graph]:
    """Every labeled graph on ``n`` vertices, or one per isomorphism class with ``dedup="iso"``."""
    if n < 1:
        raise UsageError("n must be positive")
    if n > MAX_EXHAUSTIVE_N:
        raise RefusedError(
            f"exhaustive enumeration is limited to n <= {MAX_EXHAUSTIVE_N}; "
            f"use sample_graphs(n, count, seed) for n={n}")
    if dedup == "iso":
        yield from iso_classes(n)
        return
    if dedup is not None:
        raise UsageError(f"unknown dedup mode {dedup!r}")
    for label in range(1 << len(_pairs(n))):
        yield Graph.from_label(n, label)


def sample_graphs(n: int, count: int, seed: int = 0) -> Iterator[Graph]:
    rng = np.random.default_rng(seed)
    npairs = len(_pairs(n))
    for _ in range(count):
        bits = rng.integers(0, 2, size=npairs)
        label = 0
        for b in bits:
            label = (label << 1) | int(b)
        yield Graph.from_label(n, label)


@dataclass(frozen=True)
class CanonicalForm:
    label: int
    perm: Tuple[int, ...]

    def graph(self, n: int) -> Graph:
        return Graph.from_label(n, self.label)


def _refined_cells(g: Graph) -> List[List[int]]:
    """Equitable-partition cells, ordered by an isomorphism-invariant color rank."""
    colors = list(g.degrees())
    ranks = sorted(set(colors))
    colors = [ranks.index(c) for c in colors]
    while True:
        sigs = []
        for v in range(g.n):
            row = g.neighbors(v)
            sigs.append((colors[v], tuple(sorted(colors[w] for w in range(g.n) if (row >> w) & 1))))
        uniq = sorted(set(sigs))
        refined = [uniq.index(s) for s in sigs]
        if len(uniq) == len(set(colors)):
            break
        colors = refined
    cells = [[] for _ in range(len(set(colors)))]
    for v in range(g.n):
        cells[colors[v]].append(v)
    return cells


def _cell_permutations(cells: List[List[int]]) -> Iterator[Tuple[int, ...]]:
    for parts in itertools.product(*(itertools.permutations(c) for c in cells)):
        yield tuple(itertools.chain.from_iterable(parts))


def canonical_form(g: Graph) -> CanonicalForm:
    """Minimum adjacency encoding over all labelings that respect the refined color order."""
    if g.n > MAX_CANONICAL_N:
        raise RefusedError(f"canonical labeling is limited to n <= {MAX_CANONICAL_N}")
    if g.n <= 1:
        return CanonicalForm(0, tuple(range(g.n)))
    ne = len(g.edges())
    if ne == 0 or ne == len(_pairs(g.n)):
        return CanonicalForm(g.label(), tuple(range(g.n)))
    cells = _refined_cells(g)
    adj = g.to_array()
    pi, pj, weights = _pair_index_arrays(g.n)
    best_label, best_perm = None, None
    perms = _cell_permutations(cells)
    while True:
        chunk = list(itertools.islice(perms, PERM_CHUNK))
        if not chunk:
            break
        arr = np.array(chunk, dtype=np.intp)
        codes = adj[arr[:, pi], arr[:, pj]].astype(np.int64) @ weights
        k = int(np.argmin(codes))
        if best_label is None or codes[k] < best_label:
            best_label, best_perm = int(codes[k]), tuple(int(x) for x in arr[k])
    return CanonicalForm(best_label, best_perm)


@lru_cache(maxsize=None)
def _iso_labels(n: int) -> Tuple[int, ...]:
    if n == 1:
        return (0,)
    seen = set()
    for label in _iso_labels(n - 1):
        base = Graph.from_label(n - 1, label)
        for subset in range(1 << (n - 1)):
            rows = [r | (((subset >> i) & 1) << (n - 1)) for i, r in enumerate(base.rows)]
            rows.append(subset)
            seen.add(canonical_form(Graph.from_rows(rows)).label)
    logger.debug("n=%d: %d isomorphism classes", n, len(seen))
    return tuple(sorted(seen))


def iso_classes(n: int) -> List[Graph]:
    if n > MAX_EXHAUSTIVE_N:
        raise RefusedError(f"isomorphism classes are enumerated for n <= {MAX_EXHAUSTIVE_N}")
    return [Graph.from_label(n, label) for label in _iso_labels(n)]


def local_complement(g: Graph, v: int) -> Graph:
    if not 0 <= v < g.n:
        raise UsageError(f"vertex {v} out of range for n={g.n}")
    nbrs = g.neighbors(v)
    rows = list(g.rows)
    for w in range(g.n):
        if (nbrs >> w) & 1:
            rows[w] ^= nbrs & ~(1 << w)
    return Graph.from_rows(rows)


def lc_orbit(g: Graph) -> frozenset:
    """Canonical labels reachable from ``g`` by local complementations and relabelings."""
    start = canonical_form(g).label
    seen = {start}
    queue = [start]
    while queue:
        h = Graph.from_label(g.n, queue.pop())
        for v in range(g.n):
            label = canonical_form(local_complement(h, v)).label
            if label not in seen:
                seen.add(label)
                queue.append(label)
    return frozenset(seen)


@lru_cache(maxsize=None)
def _lc_orbit_labels(n: int) -> Tuple[int, ...]:
    labels = _iso_labels(n)
    parent = {label: label for label in labels}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for label in labels:
        g = Graph.from_label(n, label)
        for v in range(n):
            other = canonical_form(local_complement(g, v)).label
            ra, rb = find(label), find(other)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    reps = sorted({find(label) for label in labels})
    logger.debug("n=%d: %d local-complementation orbits over %d classes", n, len(reps), len(labels))
    return tuple(reps)


def lc_orbit_representatives(n: int) -> Iterator[Graph]:
    """One graph (the smallest canonical label) per orbit of local complementation plus relabeling."""
    if n > MAX_EXHAUSTIVE_N:
        raise RefusedError(f"orbit enumeration is limited to n <= {MAX_EXHAUSTIVE_N}")
    for label in _lc_orbit_labels(n):
        yield Graph.from_label(n, label)


def _basis_bits(n: int) -> np.ndarray:
    x = np.arange(1 << n, dtype=np.int64)
    return ((x[:, None] >> np.arange(n)) & 1).astype(np.int64)


def graph_state_signs(g: Graph, max_qubits: int = MAX_STATE_QUBITS) -> np.ndarray:
    """(-1)**q(x) with q(x) = sum_{i<j} adj[i][j] x_i x_j, one entry per basis string x."""
    if g.n > max_qubits:
        raise RefusedError(f"dense graph states are limited to n <= {max_qubits}")
    xb = _basis_bits(g.n)
    upper = np.triu(g.to_array().astype(np.int64), 1)
    q = ((xb @ upper) * xb).sum(axis=1) & 1
    return 1 - 2 * q


def graph_state_amplitudes(g: Graph, max_qubits: int = MAX_STATE_QUBITS) -> np.ndarray:
    return graph_state_signs(g, max_qubits) / np.sqrt(2.0 ** g.n)
