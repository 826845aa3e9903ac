"""The CWS clique graph and its clique solvers.

Vertices are admissible codewords in ascending order, vertex 0 being the all-zeros
word. Adjacency rows are Python ints used as bitsets over vertex indices. Vertex 0
is adjacent to every other vertex, so both exact solvers work inside its
neighborhood and add it back.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from cwsclique.errors import RefusedError, UsageError
from cwsclique.model.errormap import ClArrays, ErrorSet, setup
from cwsclique.model.gf2 import ClassicalCode
from cwsclique.model.graphs import Graph
from cwsclique.model.kernels import admissible_vertices

logger = logging.getLogger(__name__)

MAX_CLIQUE_VERTICES = 16384
ROW_CHUNK = 1024
DENSE_ORDER_LIMIT = 4096

EXACT = "exact"
BOUND = "bound"


def _bits(x: int) -> List[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def _pack_rows(mask: np.ndarray) -> List[int]:
    return [int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little") for row in mask]


@dataclass(frozen=True)
class CliqueGraph:
    n: int
    vertices: Tuple[int, ...]
    adjacency: Tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.vertices)

    def has_edge(self, i: int, j: int) -> bool:
        return bool((self.adjacency[i] >> j) & 1)

    def is_clique(self, members: Sequence[int]) -> bool:
        return all(self.has_edge(a, b) for k, a in enumerate(members) for b in members[k + 1:])

    def dense(self) -> np.ndarray:
        out = np.zeros((self.size, self.size), dtype=bool)
        for i, row in enumerate(self.adjacency):
            out[i, _bits(row)] = True
        return out

    def to_dump(self) -> str:
        width = max(1, (self.size + 3) // 4)
        lines = [f"vertices={self.size}"]
        lines += [format(row, f"0{width}x") for row in self.adjacency]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Clique:
    n: int
    members: Tuple[int, ...]
    codewords: Tuple[int, ...]
    status: str = EXACT

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def exact(self) -> bool:
        return self.status == EXACT

    def code(self) -> ClassicalCode:
        return ClassicalCode(self.n, self.codewords)


def _clique(cg: CliqueGraph, members, status: str) -> Clique:
    members = tuple(sorted(members))
    return Clique(cg.n, members, tuple(cg.vertices[i] for i in members), status)


def make_cws_clique_graph(cl: ClArrays, max_vertices: int = MAX_CLIQUE_VERTICES) -> CliqueGraph:
    cl_marks = cl.cl_marks()
    verts = admissible_vertices(cl_marks, cl.d_marks())
    if verts.size > max_vertices:
        raise RefusedError(
            f"clique graph has {verts.size} vertices, above the cap of {max_vertices}")
    rows = []
    for start in range(0, verts.size, ROW_CHUNK):
        block = verts[start:start + ROW_CHUNK]
        mask = cl_marks[block[:, None] ^ verts[None, :]] == 0
        mask[np.arange(block.size), np.arange(start, start + block.size)] = False
        rows.extend(_pack_rows(mask))
    logger.debug("clique graph n=%d vertices=%d", cl.n, verts.size)
    return CliqueGraph(cl.n, tuple(int(v) for v in verts), tuple(rows))


def _vertex_order(cg: CliqueGraph, candidates: List[int]) -> List[int]:
    """Degeneracy order, highest core first; plain degree order on large instances."""
    if len(candidates) > DENSE_ORDER_LIMIT:
        return sorted(candidates, key=lambda v: -cg.adjacency[v].bit_count())
    idx = np.array(candidates, dtype=np.intp)
    sub = cg.dense()[np.ix_(idx, idx)] if len(candidates) else np.zeros((0, 0), dtype=bool)
    deg = sub.sum(axis=1).astype(np.int64)
    removed = np.zeros(len(candidates), dtype=bool)
    peel = []
    for _ in range(len(candidates)):
        v = int(np.argmin(np.where(removed, np.iinfo(np.int64).max, deg)))
        peel.append(v)
        removed[v] = True
        deg -= sub[v]
    return [candidates[v] for v in reversed(peel)]


def _relabel(cg: CliqueGraph, order: List[int]) -> List[int]:
    pos = {v: i for i, v in enumerate(order)}
    rows = []
    for v in order:
        row = 0
        for w in _bits(cg.adjacency[v]):
            p = pos.get(w)
            if p is not None:
                row |= 1 << p
        rows.append(row)
    return rows


def _color_sort(p: int, adj: List[int]) -> Tuple[List[int], List[int]]:
    """Greedy sequential coloring of ``p``; vertices returned by nondecreasing color."""
    order, colors = [], []
    uncolored = p
    color = 0
    while uncolored:
        color += 1
        q = uncolored
        while q:
            low = q & -q
            v = low.bit_length() - 1
            uncolored ^= low
            q &= ~low & ~adj[v]
            order.append(v)
            colors.append(color)
    return order, colors


def _greedy(p: int, adj: List[int]) -> List[int]:
    members = []
    while p:
        v = max(_bits(p), key=lambda w: (adj[w] & p).bit_count())
        members.append(v)
        p &= adj[v]
    return members


def _branch_and_bound(adj: List[int], budget: Optional[int]) -> Tuple[List[int], bool]:
    """Maximum clique over all vertices of ``adj``; second value is False when the budget ran out."""
    full = (1 << len(adj)) - 1
    best = _greedy(full, adj)
    nodes = 0
    order, colors = _color_sort(full, adj)
    stack = [[(), full, order, colors, len(order) - 1]]
    while stack:
        frame = stack[-1]
        r, p, order, colors, i = frame
        if i < 0 or len(r) + colors[i] <= len(best):
            stack.pop()
            continue
        v = order[i]
        frame[1] = p & ~(1 << v)
        frame[4] = i - 1
        nodes += 1
        if budget is not None and nodes > budget:
            logger.debug("branch and bound stopped after %d nodes at size %d", nodes, len(best))
            return best, False
        child_r = r + (v,)
        child_p = p & adj[v]
        if not child_p:
            if len(child_r) > len(best):
                best = list(child_r)
            continue
        child_order, child_colors = _color_sort(child_p, adj)
        stack.append([child_r, child_p, child_order, child_colors, len(child_order) - 1])
    logger.debug("branch and bound finished after %d nodes, size %d", nodes, len(best))
    return best, True


def _first_clique_of_size(cg: CliqueGraph, k: int, budget: Optional[int]):
    """Lexicographically first clique of size ``k`` containing vertex 0.

    Returns ``(members, complete)``: members is None when no such clique exists
    (complete=True) or the search ran out of budget (complete=False).
    """
    adj = cg.adjacency
    stack = [[(0,), adj[0]]]
    nodes = 0
    while stack:
        frame = stack[-1]
        r, p = frame
        if len(r) == k:
            return list(r), True
        need = k - len(r)
        if p.bit_count() < need or max(_color_sort(p, adj)[1], default=0) < need:
            stack.pop()
            continue
        low = p & -p
        v = low.bit_length() - 1
        frame[1] = p ^ low
        nodes += 1
        if budget is not None and nodes > budget:
            return None, False
        stack.append([r + (v,), (p ^ low) & adj[v]])
    return None, True


def max_clique(cg: CliqueGraph, budget: Optional[int] = None) -> Clique:
    """Maximum clique containing vertex 0, smallest codeword list among ties.

    ``budget`` bounds the number of node expansions of the branch and bound and,
    separately, of the tie-break. When either runs out the best clique found so
    far is returned with status ``"bound"``.
    """
    if cg.size <= 1:
        return _clique(cg, (0,), EXACT)
    candidates = _bits(cg.adjacency[0])
    order = _vertex_order(cg, candidates)
    best, complete = _branch_and_bound(_relabel(cg, order), budget)
    members = [0] + [order[i] for i in best]
    if not complete:
        return _clique(cg, members, BOUND)
    first, found = _first_clique_of_size(cg, len(members), budget)
    if first is None:
        if found:
            raise AssertionError("maximum clique vanished during tie-breaking")
        logger.debug("tie-break stopped; keeping a maximum clique that may not be the first")
        return _clique(cg, members, BOUND)
    return _clique(cg, first, EXACT)


def find_clique_of_size(cg: CliqueGraph, k: int, budget: Optional[int] = None) -> Optional[Clique]:
    """A clique of exactly ``k`` vertices containing vertex 0, or None when none exists.

    If the budget runs out first, greedy restarts get a try: a clique of ``k`` or
    more vertices still yields ``k`` of them, anything smaller comes back whole
    with status ``"bound"``.
    """
    if k < 1:
        raise UsageError(f"clique size must be positive, got {k}")
    if k > cg.size:
        return None
    members, complete = _first_clique_of_size(cg, k, budget)
    if members is not None:
        return _clique(cg, members, EXACT)
    if complete:
        return None
    partial = heuristic_clique(cg, restarts=8, seed=0)
    if partial.size >= k:
        return _clique(cg, partial.members[:k], EXACT)
    return partial


def heuristic_clique(cg: CliqueGraph, restarts: int = 32, seed: int = 0) -> Clique:
    """Randomized greedy restarts; never claims optimality."""
    rng = np.random.default_rng(seed)
    candidates = np.array(_bits(cg.adjacency[0]), dtype=np.int64)
    best = [0]
    for _ in range(restarts):
        members = [0]
        p = cg.adjacency[0]
        for v in rng.permutation(candidates):
            v = int(v)
            if (p >> v) & 1:
                members.append(v)
                p &= cg.adjacency[v]
        if len(members) > len(best):
            best = members
    return _clique(cg, best, BOUND)


def cws_maxclique(errors: ErrorSet, g: Graph, budget: Optional[int] = None,
                  max_vertices: int = MAX_CLIQUE_VERTICES) -> ClassicalCode:
    cg = make_cws_clique_graph(setup(errors, g), max_vertices=max_vertices)
    return max_clique(cg, budget).code()
