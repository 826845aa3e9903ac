"""Pauli error sets and the classical patterns they induce through a graph state.

For ``E = Z**v X**u`` on graph ``G`` the induced bit-flip pattern is
``Cl_G(E) = v ^ (xor of the adjacency rows selected by u)``. Errors whose pattern
is zero act trivially up to sign on the graph state; every codeword with odd
overlap with such an error's X-support is inadmissible (the set ``D``).
"""
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb
from typing import Iterable, Iterator, List, Optional, Tuple

import numpy as np

from cwsclique.errors import ParseError, RefusedError, UsageError
from cwsclique.model.gf2 import MAX_BITS, BitString, PauliOp
from cwsclique.model.graphs import Graph
from cwsclique.model.kernels import mark_inadmissible, mark_patterns

logger = logging.getLogger(__name__)

HEX_LINE = 64


@dataclass(frozen=True)
class ErrorSet:
    n: int
    errors: Tuple[PauliOp, ...]
    weight_bound: Optional[int] = None

    def __post_init__(self):
        for e in self.errors:
            if e.n != self.n:
                raise UsageError(f"error {e} acts on {e.n} qubits, expected {self.n}")
            if e.u == 0 and e.v == 0:
                raise UsageError("the identity is not an error")

    @classmethod
    def from_paulis(cls, ops: Iterable[PauliOp], n: Optional[int] = None) -> "ErrorSet":
        ops = tuple(ops)
        if n is None:
            if not ops:
                raise UsageError("cannot infer n from an empty error list")
            n = ops[0].n
        seen, unique = set(), []
        for e in ops:
            if (e.u, e.v) not in seen:
                seen.add((e.u, e.v))
                unique.append(PauliOp.hermitian(e.u, e.v, e.n))
        return cls(n, tuple(unique))

    def __len__(self) -> int:
        return len(self.errors)

    def __iter__(self) -> Iterator[PauliOp]:
        return iter(self.errors)

    def arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        """X-supports and Z-supports as int64 arrays."""
        u = np.fromiter((e.u for e in self.errors), dtype=np.int64, count=len(self.errors))
        v = np.fromiter((e.v for e in self.errors), dtype=np.int64, count=len(self.errors))
        return u, v


def iter_paulis_of_weight(n: int, w: int) -> Iterator[PauliOp]:
    """Weight-``w`` Hermitian Paulis ordered by support, then letters with X < Y < Z."""
    for support in itertools.combinations(range(n), w):
        for letters in itertools.product("XYZ", repeat=w):
            u = v = 0
            for q, letter in zip(support, letters):
                if letter in "XY":
                    u |= 1 << q
                if letter in "YZ":
                    v |= 1 << q
            yield PauliOp.hermitian(u, v, n)


def error_set(n: int, d: int) -> ErrorSet:
    """All Pauli errors of weight 1 .. d-1."""
    if n < 1:
        raise UsageError("n must be positive")
    if not 1 <= d <= n + 1:
        raise UsageError(f"distance must lie in 1..{n + 1}, got d={d}")
    errors = tuple(itertools.chain.from_iterable(iter_paulis_of_weight(n, w) for w in range(1, d)))
    assert len(errors) == sum(comb(n, w) * 3 ** w for w in range(1, d))
    return ErrorSet(n, errors, weight_bound=d - 1)


def _check_graph(n: int, g: Graph):
    if g.n != n:
        raise UsageError(f"graph has {g.n} vertices, errors act on {n} qubits")


def cl_value(u: int, v: int, g: Graph) -> int:
    out = v
    for l in range(g.n):
        if (u >> l) & 1:
            out ^= g.neighbors(l)
    return out


def cl_map(e: PauliOp, g: Graph) -> BitString:
    _check_graph(e.n, g)
    return BitString(cl_value(e.u, e.v, g), g.n)


def cl_values(u: np.ndarray, v: np.ndarray, g: Graph) -> np.ndarray:
    """Vectorised ``cl_value`` over arrays of supports."""
    rows = np.array(g.rows, dtype=np.int64)
    if u.size == 0:
        return np.zeros(0, dtype=np.int64)
    selected = ((u[:, None] >> np.arange(g.n, dtype=np.int64)) & 1) * rows
    return np.bitwise_xor.reduce(selected, axis=1) ^ v


@dataclass(frozen=True)
class ClArrays:
    """Bit-packed (little bit order) CL and D arrays of length ``2**n``."""

    n: int
    cl: np.ndarray
    d: np.ndarray

    @classmethod
    def from_marks(cls, n: int, cl_marks: np.ndarray, d_marks: np.ndarray) -> "ClArrays":
        return cls(n, np.packbits(cl_marks, bitorder="little"), np.packbits(d_marks, bitorder="little"))

    def cl_marks(self) -> np.ndarray:
        return np.unpackbits(self.cl, bitorder="little")[: 1 << self.n]

    def d_marks(self) -> np.ndarray:
        return np.unpackbits(self.d, bitorder="little")[: 1 << self.n]

    def cl_bit(self, i: int) -> int:
        return int((self.cl[i >> 3] >> (i & 7)) & 1)

    def d_bit(self, i: int) -> int:
        return int((self.d[i >> 3] >> (i & 7)) & 1)

    @property
    def degenerate(self) -> bool:
        return bool(self.cl_bit(0))

    def cl_set(self) -> List[int]:
        return np.flatnonzero(self.cl_marks()).tolist()

    def d_set(self) -> List[int]:
        return np.flatnonzero(self.d_marks()).tolist()

    def merge(self, other: "ClArrays") -> "ClArrays":
        if other.n != self.n:
            raise UsageError(f"cannot merge arrays for n={self.n} and n={other.n}")
        return ClArrays(self.n, self.cl | other.cl, self.d | other.d)

    def to_dump(self, which: str = "CL") -> str:
        arr = {"CL": self.cl, "D": self.d}.get(which)
        if arr is None:
            raise UsageError(f"which must be CL or D, got {which!r}")
        text = arr.tobytes().hex()
        lines = [f"n={self.n} which={which}"]
        lines += [text[i:i + HEX_LINE] for i in range(0, len(text), HEX_LINE)]
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_dump(text: str, path=None) -> Tuple[int, str, np.ndarray]:
        """Parse one dump into ``(n, which, packed array)``."""
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ParseError("empty dump", path)
        try:
            fields = dict(tok.split("=", 1) for tok in lines[0].split())
            n, which = int(fields["n"]), fields["which"]
        except (KeyError, ValueError):
            raise ParseError(f"bad dump header {lines[0]!r}", path, 1)
        if which not in ("CL", "D"):
            raise ParseError(f"unknown array {which!r}", path, 1)
        try:
            packed = np.frombuffer(bytes.fromhex("".join(lines[1:])), dtype=np.uint8).copy()
        except ValueError:
            raise ParseError("dump body is not hex", path)
        expected = ((1 << n) + 7) // 8
        if packed.size != expected:
            raise ParseError(f"expected {expected} bytes for n={n}, got {packed.size}", path)
        return n, which, packed


def _setup_chunk(n: int, u: np.ndarray, v: np.ndarray, g: Graph) -> Tuple[np.ndarray, np.ndarray]:
    cl = cl_values(u, v, g)
    cl_marks = mark_patterns(n, cl)
    d_marks = mark_inadmissible(n, u[cl == 0])
    return cl_marks, d_marks


def _check_size(n: int, max_qubits: int):
    if n > max_qubits:
        raise RefusedError(f"CL/D arrays need 2**n bits; n={n} exceeds the cap of {max_qubits}")


def setup(errors: ErrorSet, g: Graph, max_qubits: int = MAX_BITS) -> ClArrays:
    _check_graph(errors.n, g)
    _check_size(g.n, max_qubits)
    u, v = errors.arrays()
    cl_marks, d_marks = _setup_chunk(g.n, u, v, g)
    arrays = ClArrays.from_marks(g.n, cl_marks, d_marks)
    logger.debug("setup n=%d errors=%d degenerate=%s", g.n, len(errors), arrays.degenerate)
    return arrays


def setup_partitioned(errors: ErrorSet, g: Graph, workers: int = 4, max_qubits: int = MAX_BITS) -> ClArrays:
    """Same arrays as ``setup``, with the error set split across threads and merged by OR."""
    _check_graph(errors.n, g)
    _check_size(g.n, max_qubits)
    u, v = errors.arrays()
    parts = max(1, min(workers, len(errors)))
    chunks = list(zip(np.array_split(u, parts), np.array_split(v, parts)))
    with ThreadPoolExecutor(max_workers=parts) as pool:
        partials = list(pool.map(lambda uv: _setup_chunk(g.n, uv[0], uv[1], g), chunks))
    cl_marks = np.zeros(1 << g.n, dtype=np.uint8)
    d_marks = np.zeros(1 << g.n, dtype=np.uint8)
    for c, d in partials:
        cl_marks |= c
        d_marks |= d
    return ClArrays.from_marks(g.n, cl_marks, d_marks)
