"""GF(2) vectors and matrices, and the n-qubit Pauli group in binary symplectic form.

Bit ``i`` of every packed integer is qubit ``i + 1`` (graph vertex ``i``), and it is
the ``i``-th character, counted from the left, of the text form. A Pauli operator is
stored as ``i**phase * X**u Z**v`` with that factor order fixed everywhere.
"""
import logging
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from cwsclique.errors import ParseError, RefusedError, UsageError

logger = logging.getLogger(__name__)

MAX_BITS = 24

_PHASE_PREFIX = {"": 0, "+": 0, "+1": 0, "-": 2, "-1": 2, "i": 1, "+i": 1, "-i": 3}
_PHASE_TEXT = {0: "+", 1: "+i", 2: "-", 3: "-i"}

_I2 = np.eye(2, dtype=complex)
_X2 = np.array([[0, 1], [1, 0]], dtype=complex)
_Z2 = np.array([[1, 0], [0, -1]], dtype=complex)


def parity(x: int) -> int:
    return x.bit_count() & 1


def _check_width(n: int):
    if n < 0 or n > MAX_BITS:
        raise RefusedError(f"bit strings are limited to {MAX_BITS} bits, got n={n}")


@dataclass(frozen=True)
class BitString:
    value: int
    n: int

    def __post_init__(self):
        _check_width(self.n)
        if self.value < 0 or self.value >> self.n:
            raise UsageError(f"value {self.value} does not fit in {self.n} bits")

    @classmethod
    def zeros(cls, n: int) -> "BitString":
        return cls(0, n)

    @classmethod
    def unit(cls, n: int, i: int) -> "BitString":
        return cls(1 << i, n)

    @classmethod
    def from_str(cls, text: str) -> "BitString":
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise ParseError(f"not a bit string: {text!r}")
        value = 0
        for i, ch in enumerate(text):
            if ch == "1":
                value |= 1 << i
        return cls(value, len(text))

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitString":
        bits = list(bits)
        return cls(sum(1 << i for i, b in enumerate(bits) if b & 1), len(bits))

    def bits(self) -> Tuple[int, ...]:
        return tuple((self.value >> i) & 1 for i in range(self.n))

    def weight(self) -> int:
        return self.value.bit_count()

    def is_zero(self) -> bool:
        return self.value == 0

    def complement(self) -> "BitString":
        return BitString(self.value ^ ((1 << self.n) - 1), self.n)

    def __xor__(self, other: "BitString") -> "BitString":
        return xor(self, other)

    def __int__(self) -> int:
        return self.value

    def __lt__(self, other: "BitString") -> bool:
        return (self.n, self.value) < (other.n, other.value)

    def __str__(self) -> str:
        return "".join("1" if (self.value >> i) & 1 else "0" for i in range(self.n))


def _same_length(a: BitString, b: BitString):
    if a.n != b.n:
        raise UsageError(f"length mismatch: {a.n} != {b.n}")


def xor(a: BitString, b: BitString) -> BitString:
    _same_length(a, b)
    return BitString(a.value ^ b.value, a.n)


def dot(a: BitString, b: BitString) -> int:
    _same_length(a, b)
    return parity(a.value & b.value)


@dataclass(frozen=True)
class GF2Matrix:
    """Binary matrix with each row packed into an int; bit ``j`` of a row is column ``j``."""

    rows: Tuple[int, ...]
    ncols: int

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(int(r) for r in self.rows))
        limit = 1 << self.ncols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise UsageError(f"row {r:#x} wider than {self.ncols} columns")

    @classmethod
    def from_bitstrings(cls, rows: Sequence[BitString]) -> "GF2Matrix":
        if not rows:
            raise UsageError("matrix needs at least one row")
        ncols = rows[0].n
        for r in rows:
            if r.n != ncols:
                raise UsageError("rows of unequal length")
        return cls(tuple(r.value for r in rows), ncols)

    @classmethod
    def from_array(cls, arr) -> "GF2Matrix":
        arr = np.asarray(arr, dtype=np.uint8) & 1
        weights = 1 << np.arange(arr.shape[1], dtype=object)
        return cls(tuple(int((row.astype(object) * weights).sum()) for row in arr), arr.shape[1])

    @classmethod
    def identity(cls, n: int) -> "GF2Matrix":
        return cls(tuple(1 << i for i in range(n)), n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nrows, self.ncols

    def row(self, i: int) -> BitString:
        return BitString(self.rows[i], self.ncols)

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def column(self, j: int) -> int:
        return sum(((r >> j) & 1) << i for i, r in enumerate(self.rows))

    def to_array(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.uint8)
        for i, r in enumerate(self.rows):
            for j in range(self.ncols):
                out[i, j] = (r >> j) & 1
        return out

    def transpose(self) -> "GF2Matrix":
        return GF2Matrix(tuple(self.column(j) for j in range(self.ncols)), self.nrows)

    def vecmul(self, vec: int) -> int:
        """Row vector (packed over the row index) times this matrix."""
        out = 0
        i = 0
        while vec:
            if vec & 1:
                out ^= self.rows[i]
            vec >>= 1
            i += 1
        return out

    def __matmul__(self, other: "GF2Matrix") -> "GF2Matrix":
        if self.ncols != other.nrows:
            raise UsageError(f"shape mismatch {self.shape} @ {other.shape}")
        return GF2Matrix(tuple(other.vecmul(r) for r in self.rows), other.ncols)

    def row_reduce(self, pivot_cols: Optional[int] = None) -> Tuple["GF2Matrix", Tuple[int, ...]]:
        """Reduced row-echelon form; pivots are searched in the first ``pivot_cols`` columns."""
        work = list(self.rows)
        limit = self.ncols if pivot_cols is None else pivot_cols
        pivots = []
        top = 0
        for col in range(limit):
            if top == len(work):
                break
            bit = 1 << col
            found = next((r for r in range(top, len(work)) if work[r] & bit), None)
            if found is None:
                continue
            work[top], work[found] = work[found], work[top]
            for r in range(len(work)):
                if r != top and work[r] & bit:
                    work[r] ^= work[top]
            pivots.append(col)
            top += 1
        return GF2Matrix(tuple(work), self.ncols), tuple(pivots)

    def rank(self) -> int:
        return len(self.row_reduce()[1])

    def invert(self) -> Optional["GF2Matrix"]:
        """Inverse over GF(2), or None for a singular matrix."""
        n = self.nrows
        if n != self.ncols:
            raise UsageError(f"only square matrices can be inverted, got {self.shape}")
        augmented = GF2Matrix(tuple(r | (1 << (n + i)) for i, r in enumerate(self.rows)), 2 * n)
        reduced, pivots = augmented.row_reduce(pivot_cols=n)
        if len(pivots) < n:
            return None
        mask = (1 << n) - 1
        return GF2Matrix(tuple((r >> n) & mask for r in reduced.rows), n)

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows

    def __str__(self) -> str:
        return "\n".join(str(BitString(r, self.ncols)) if self.ncols <= MAX_BITS else
                         "".join(str((r >> j) & 1) for j in range(self.ncols)) for r in self.rows)


@dataclass(frozen=True)
class ClassicalCode:
    """Ordered set of distinct n-bit codewords (packed ints)."""

    n: int
    words: Tuple[int, ...]

    def __post_init__(self):
        _check_width(self.n)
        object.__setattr__(self, "words", tuple(int(w) for w in self.words))
        if len(set(self.words)) != len(self.words):
            raise UsageError("codewords are not pairwise distinct")
        for w in self.words:
            if w < 0 or w >> self.n:
                raise UsageError(f"codeword {w} does not fit in {self.n} bits")

    @classmethod
    def from_strs(cls, texts: Iterable[str]) -> "ClassicalCode":
        words = [BitString.from_str(t) for t in texts]
        if not words:
            raise UsageError("a code needs at least one codeword")
        if len({w.n for w in words}) != 1:
            raise UsageError("codewords of unequal length")
        return cls(words[0].n, tuple(w.value for w in words))

    @classmethod
    def from_bitstrings(cls, words: Sequence[BitString]) -> "ClassicalCode":
        if not words:
            raise UsageError("a code needs at least one codeword")
        return cls(words[0].n, tuple(w.value for w in words))

    @property
    def size(self) -> int:
        return len(self.words)

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def __contains__(self, word) -> bool:
        return int(word) in self.words

    def contains_zero(self) -> bool:
        return 0 in self.words

    def bitstrings(self) -> Tuple[BitString, ...]:
        return tuple(BitString(w, self.n) for w in self.words)

    def sorted(self) -> "ClassicalCode":
        return ClassicalCode(self.n, tuple(sorted(self.words)))

    def shift(self, offset: int) -> "ClassicalCode":
        return ClassicalCode(self.n, tuple(w ^ offset for w in self.words))

    def as_set(self) -> frozenset:
        return frozenset(self.words)

    def __str__(self) -> str:
        return "\n".join(str(b) for b in self.bitstrings())


def span(vectors: Iterable[int]) -> list:
    """All GF(2) combinations of the given packed vectors (duplicates removed, sorted)."""
    out = {0}
    for v in vectors:
        if v not in out:
            out |= {w ^ v for w in out}
    return sorted(out)


@dataclass(frozen=True)
class PauliOp:
    """``i**phase * X**u Z**v`` on ``n`` qubits; ``u`` and ``v`` are packed ints."""

    u: int
    v: int
    n: int
    phase: int = 0

    def __post_init__(self):
        _check_width(self.n)
        if (self.u | self.v) >> self.n:
            raise UsageError(f"support does not fit in {self.n} qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def identity(cls, n: int) -> "PauliOp":
        return cls(0, 0, n)

    @classmethod
    def hermitian(cls, u: int, v: int, n: int, sign: int = 0) -> "PauliOp":
        """Tensor product of I/X/Y/Z letters (Y where both supports are set), times (-1)**sign."""
        return cls(u, v, n, (u & v).bit_count() + 2 * sign)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliOp":
        bit = 1 << qubit
        u = bit if letter in "XY" else 0
        v = bit if letter in "ZY" else 0
        return cls.hermitian(u, v, n)

    @classmethod
    def from_str(cls, text: str) -> "PauliOp":
        text = text.strip()
        stripped = text.lstrip("+-i1")
        prefix = text[: len(text) - len(stripped)]
        if prefix not in _PHASE_PREFIX or not stripped or set(stripped) - set("IXYZ"):
            raise ParseError(f"not a Pauli operator: {text!r}")
        u = v = 0
        for i, ch in enumerate(stripped):
            if ch in "XY":
                u |= 1 << i
            if ch in "ZY":
                v |= 1 << i
        return cls(u, v, len(stripped), _PHASE_PREFIX[prefix] + (u & v).bit_count())

    @property
    def x_bits(self) -> BitString:
        return BitString(self.u, self.n)

    @property
    def z_bits(self) -> BitString:
        return BitString(self.v, self.n)

    def letters(self) -> Tuple[int, str]:
        """(phase relative to the Hermitian letter product, letter string)."""
        chars = []
        for i in range(self.n):
            x, z = (self.u >> i) & 1, (self.v >> i) & 1
            chars.append("IXZY"[x + 2 * z])
        return (self.phase - (self.u & self.v).bit_count()) % 4, "".join(chars)

    def is_hermitian(self) -> bool:
        return self.letters()[0] in (0, 2)

    def weight(self) -> int:
        return (self.u | self.v).bit_count()

    def support(self) -> int:
        return self.u | self.v

    def symplectic(self) -> int:
        """Packed (u|v): X-half in the low n bits, Z-half above."""
        return self.u | (self.v << self.n)

    def compose(self, other: "PauliOp") -> "PauliOp":
        """Operator product ``self * other``."""
        if self.n != other.n:
            raise UsageError(f"length mismatch: {self.n} != {other.n}")
        # Z^v1 X^u2 = (-1)^{v1.u2} X^u2 Z^v1
        phase = self.phase + other.phase + 2 * parity(self.v & other.u)
        return PauliOp(self.u ^ other.u, self.v ^ other.v, self.n, phase)

    def __mul__(self, other: "PauliOp") -> "PauliOp":
        return self.compose(other)

    def commutes(self, other: "PauliOp") -> bool:
        return symplectic_product(self, other) == 0

    def negate(self) -> "PauliOp":
        return PauliOp(self.u, self.v, self.n, self.phase + 2)

    def conjugate(self, gate: str, qubit: int) -> "PauliOp":
        """``U P U^dagger`` for a single-qubit Clifford ``U`` in {"H", "S"}."""
        sign, chars = self.letters()
        chars = list(chars)
        letter = chars[qubit]
        if gate == "H":
            chars[qubit] = {"I": "I", "X": "Z", "Z": "X", "Y": "Y"}[letter]
            if letter == "Y":
                sign += 2
        elif gate == "S":
            chars[qubit] = {"I": "I", "X": "Y", "Y": "X", "Z": "Z"}[letter]
            if letter == "Y":
                sign += 2
        else:
            raise UsageError(f"unknown single-qubit Clifford {gate!r}")
        op = PauliOp.from_str("".join(chars))
        return PauliOp(op.u, op.v, op.n, op.phase + sign)

    def to_matrix(self) -> np.ndarray:
        """Dense 2**n x 2**n matrix; basis index bit ``i`` is qubit ``i``."""
        factors = []
        for i in reversed(range(self.n)):
            m = _I2
            if (self.u >> i) & 1:
                m = m @ _X2
            if (self.v >> i) & 1:
                m = m @ _Z2
            factors.append(m)
        mat = reduce(np.kron, factors, np.ones((1, 1), dtype=complex))
        return (1j ** self.phase) * mat

    def __str__(self) -> str:
        sign, chars = self.letters()
        return ("" if sign == 0 else _PHASE_TEXT[sign]) + chars


def symplectic_product(p: PauliOp, q: PauliOp) -> int:
    if p.n != q.n:
        raise UsageError(f"length mismatch: {p.n} != {q.n}")
    return parity(p.u & q.v) ^ parity(q.u & p.v)


def compose(p: PauliOp, q: PauliOp) -> PauliOp:
    return p.compose(q)


def rank(m: GF2Matrix) -> int:
    return m.rank()


def invert(m: GF2Matrix) -> Optional[GF2Matrix]:
    return m.invert()


def row_reduce(m: GF2Matrix) -> GF2Matrix:
    return m.row_reduce()[0]


def random_invertible(n: int, rng: np.random.Generator) -> GF2Matrix:
    while True:
        m = GF2Matrix(tuple(int(rng.integers(0, 1 << n)) for _ in range(n)), n)
        if m.is_invertible():
            return m
