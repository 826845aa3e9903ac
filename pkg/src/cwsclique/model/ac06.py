"""Boolean-function (AC06) codes and their conversion to standard-form CWS codes.

The chain runs ``(A, f) -> (S_A, C') -> (G_A, C') -> (G, C)``: read the stabilizer
off the rows of ``A`` and the classical code off the complemented support of
``f``; bring the stabilizer to graph form with single-qubit Hadamard and phase
gates; then change generators with ``R`` so that they read ``X_t Z**r_t`` and
carry the code along as ``C = C' R``.
"""
import logging
import re
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Sequence, Tuple

import numpy as np

from cwsclique.errors import ParseError, RefusedError, UsageError
from cwsclique.eval.verify import CWSCode
from cwsclique.model.errormap import iter_paulis_of_weight
from cwsclique.model.gf2 import BitString, ClassicalCode, GF2Matrix, PauliOp, parity, symplectic_product
from cwsclique.model.graphs import Graph

logger = logging.getLogger(__name__)

MAX_SD_QUBITS = 16
MAX_WORD_QUBITS = 12

_LITERAL = re.compile("(~|!)?v(\u0304)?(\\d+)")


@dataclass(frozen=True)
class BooleanFunction:
    n: int
    support: frozenset

    def __post_init__(self):
        object.__setattr__(self, "support", frozenset(int(c) for c in self.support))
        for c in self.support:
            if c < 0 or c >> self.n:
                raise UsageError(f"support element {c} does not fit in {self.n} variables")

    @classmethod
    def from_strs(cls, texts: Sequence[str]) -> "BooleanFunction":
        words = [BitString.from_str(t) for t in texts]
        if not words:
            raise UsageError("cannot infer n from an empty support")
        return cls(words[0].n, frozenset(w.value for w in words))

    @property
    def weight(self) -> int:
        return len(self.support)

    def __call__(self, c: int) -> int:
        return int(int(c) in self.support)

    def truth_table(self) -> np.ndarray:
        table = np.zeros(1 << self.n, dtype=np.uint8)
        table[list(self.support)] = 1
        return table

    def to_anf(self) -> str:
        """Algebraic normal form, e.g. ``v1v2v3 + v3v4v5``."""
        coeffs = self.truth_table()
        for i in range(self.n):
            view = coeffs.reshape((-1, 2, 1 << i))
            view[:, 1, :] ^= view[:, 0, :]
        monomials = sorted(np.flatnonzero(coeffs).tolist(), key=lambda m: (m.bit_count(), _var_list(m)))
        if not monomials:
            return "0"
        terms = []
        for m in monomials:
            terms.append("".join(f"v{i + 1}" for i in _var_list(m)) or "1")
        return " + ".join(terms)


def _var_list(mask: int) -> List[int]:
    return [i for i in range(mask.bit_length()) if (mask >> i) & 1]


def parse_anf(text: str, n: int) -> BooleanFunction:
    """Parse a sum (XOR) of products of ``v_i`` / ``~v_i`` literals, variables numbered from 1."""
    xs = np.arange(1 << n, dtype=np.int64)
    values = np.zeros(1 << n, dtype=np.uint8)
    for raw in text.split("+"):
        term = raw.replace(" ", "").replace("*", "").replace("&", "")
        if not term:
            raise ParseError(f"empty term in {text!r}")
        if term in ("0", "1"):
            values ^= np.uint8(int(term))
            continue
        mask = np.ones(1 << n, dtype=bool)
        pos = 0
        for m in _LITERAL.finditer(term):
            if m.start() != pos:
                break
            i = int(m.group(3)) - 1
            if not 0 <= i < n:
                raise ParseError(f"variable v{i + 1} out of range for n={n}")
            bit = ((xs >> i) & 1).astype(bool)
            mask &= ~bit if (m.group(1) or m.group(2)) else bit
            pos = m.end()
        if pos != len(term):
            raise ParseError(f"cannot parse term {raw.strip()!r}")
        values ^= mask.astype(np.uint8)
    return BooleanFunction(n, frozenset(np.flatnonzero(values).tolist()))


def cset(f: BooleanFunction) -> List[int]:
    """Shifts ``a`` with ``C_f`` and ``C_f ^ a`` disjoint."""
    if not f.support:
        raise RefusedError("the complementary set of the zero function is undefined")
    words = np.array(sorted(f.support), dtype=np.int64)
    hit = np.zeros(1 << f.n, dtype=bool)
    hit[(words[:, None] ^ words[None, :]).ravel()] = True
    return np.flatnonzero(~hit).tolist()


def code_cset(code: ClassicalCode) -> List[int]:
    return cset(BooleanFunction(code.n, frozenset(code.words)))


@dataclass(frozen=True)
class StabilizerState:
    """Independent, pairwise commuting Hermitian generators (``n`` of them for a state)."""

    generators: Tuple[PauliOp, ...]

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens:
            raise UsageError("a stabilizer needs at least one generator")
        n = gens[0].n
        for k, g in enumerate(gens):
            if g.n != n:
                raise UsageError(f"generator {k} acts on {g.n} qubits, expected {n}")
            if not g.is_hermitian():
                raise RefusedError(f"generator {k} ({g}) is not Hermitian")
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                if symplectic_product(gens[i], gens[j]):
                    raise RefusedError(f"generators {i} and {j} anticommute")
        if GF2Matrix(tuple(g.symplectic() for g in gens), 2 * n).rank() != len(gens):
            raise RefusedError("generators are not independent")

    @classmethod
    def from_strs(cls, texts: Sequence[str]) -> "StabilizerState":
        return cls(tuple(PauliOp.from_str(t) for t in texts))

    @property
    def n(self) -> int:
        return self.generators[0].n

    @property
    def is_state(self) -> bool:
        return len(self.generators) == self.n

    def pattern(self, op: PauliOp) -> int:
        """Bit ``k`` set when ``op`` anticommutes with generator ``k``."""
        return sum(symplectic_product(op, g) << k for k, g in enumerate(self.generators))


@dataclass(frozen=True)
class AC06Data:
    f: BooleanFunction
    A: GF2Matrix

    def __post_init__(self):
        n = self.f.n
        if self.A.shape != (n, 2 * n):
            raise RefusedError(f"A must be {n}x{2 * n}, got {self.A.shape}")
        mask = (1 << n) - 1
        rows = self.A.rows
        for i in range(n):
            for j in range(i + 1, n):
                ai, bi, aj, bj = rows[i] & mask, rows[i] >> n, rows[j] & mask, rows[j] >> n
                if parity(ai & bj) ^ parity(aj & bi):
                    raise RefusedError(f"rows {i + 1} and {j + 1} of A are not symplectically orthogonal")
        if self.A.rank() != n:
            raise RefusedError("rows of A are linearly dependent")

    @property
    def n(self) -> int:
        return self.f.n

    def stabilizer(self) -> StabilizerState:
        """Generators in reverse row order: codeword position ``k`` is the sign of row ``n-1-k``."""
        mask = (1 << self.n) - 1
        return StabilizerState(tuple(PauliOp.hermitian(r & mask, r >> self.n, self.n)
                                     for r in reversed(self.A.rows)))


class CWSForm(NamedTuple):
    stabilizer: StabilizerState
    code: ClassicalCode
    word_operators: Tuple[PauliOp, ...]
    unshifted: ClassicalCode
    shift: int


def word_operator(s: StabilizerState, pattern: int, max_qubits: int = MAX_WORD_QUBITS) -> PauliOp:
    """Minimum-weight Pauli anticommuting exactly with the generators selected by ``pattern``.

    Among equal weights the operator with the fewest non-Z letters wins, then the
    first one in enumeration order.
    """
    n = s.n
    if pattern == 0:
        return PauliOp.identity(n)
    if n > max_qubits:
        raise RefusedError(f"word operator search is limited to n <= {max_qubits}")
    gu = np.array([g.u for g in s.generators], dtype=np.int64)
    gv = np.array([g.v for g in s.generators], dtype=np.int64)
    weights = np.int64(1) << np.arange(len(s.generators), dtype=np.int64)
    for w in range(1, n + 1):
        cands = list(iter_paulis_of_weight(n, w))
        u = np.array([c.u for c in cands], dtype=np.int64)
        v = np.array([c.v for c in cands], dtype=np.int64)
        bits = (_parity64(u[:, None] & gv[None, :]) ^ _parity64(gu[None, :] & v[:, None]))
        patterns = bits @ weights
        hits = np.flatnonzero(patterns == pattern)
        if hits.size:
            best = min(hits.tolist(), key=lambda k: ((cands[k].u).bit_count(), k))
            return cands[best]
    raise RefusedError(f"no Pauli realizes pattern {pattern:b}; generators are not a full set")


def _parity64(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    while x.any():
        out ^= x & 1
        x = x >> 1
    return out


def ac06_to_cws(data: AC06Data) -> CWSForm:
    s = data.stabilizer()
    full = (1 << data.n) - 1
    unshifted = ClassicalCode(data.n, tuple(sorted(c ^ full for c in data.f.support)))
    if not unshifted.words:
        raise RefusedError("the zero function defines an empty code")
    shift = min(unshifted.words)
    code = unshifted.shift(shift)
    words = tuple(word_operator(s, c) for c in code.words)
    logger.debug("stab step: K=%d shift=%s", len(code), BitString(shift, data.n))
    return CWSForm(s, code, words, unshifted, shift)


@dataclass(frozen=True)
class LocalClifford:
    """Hadamards on ``hadamard`` qubits followed by phase gates on ``phase`` qubits."""

    n: int
    hadamard: int = 0
    phase: int = 0

    def letters(self) -> Tuple[str, ...]:
        out = []
        for i in range(self.n):
            gates = ("H" if (self.hadamard >> i) & 1 else "") + ("S" if (self.phase >> i) & 1 else "")
            out.append(gates or "I")
        return tuple(out)

    def is_identity(self) -> bool:
        return self.hadamard == 0 and self.phase == 0

    def apply(self, op: PauliOp) -> PauliOp:
        for i in range(self.n):
            if (self.hadamard >> i) & 1:
                op = op.conjugate("H", i)
        for i in range(self.n):
            if (self.phase >> i) & 1:
                op = op.conjugate("S", i)
        return op


def local_clifford_reduce(s: StabilizerState) -> Tuple[Tuple[PauliOp, ...], LocalClifford]:
    """Local Clifford ``L`` making the X block of ``L g L^dagger`` invertible with a zero diagonal
    in ``X'^-1 Z'``; the generators keep their order."""
    if not s.is_state:
        raise RefusedError(f"need {s.n} generators for a state, got {len(s.generators)}")
    n = s.n
    full = GF2Matrix(tuple(g.symplectic() for g in s.generators), 2 * n)
    _, pivots = full.row_reduce(pivot_cols=n)
    hadamard = sum(1 << j for j in range(n) if j not in pivots)
    step = LocalClifford(n, hadamard=hadamard)
    gens = tuple(step.apply(g) for g in s.generators)
    xinv = GF2Matrix(tuple(g.u for g in gens), n).invert()
    if xinv is None:
        raise AssertionError("X block still singular after Hadamards")
    lam = xinv @ GF2Matrix(tuple(g.v for g in gens), n)
    phase = sum(1 << t for t in range(n) if lam.entry(t, t))
    lc = LocalClifford(n, hadamard=hadamard, phase=phase)
    logger.debug("lc step: %s", " ".join(lc.letters()))
    return tuple(lc.apply(g) for g in s.generators), lc


def regenerate(generators: Sequence[PauliOp], r: GF2Matrix) -> Tuple[PauliOp, ...]:
    """``g'_i = prod_j g_j**R_ji`` (products taken in increasing ``j``)."""
    n = generators[0].n
    if r.shape != (len(generators), len(generators)):
        raise UsageError(f"R must be {len(generators)}x{len(generators)}, got {r.shape}")
    out = []
    for i in range(r.ncols):
        op = PauliOp.identity(n)
        for j in range(r.nrows):
            if r.entry(j, i):
                op = op * generators[j]
        out.append(op)
    return tuple(out)


def change_generators(r: GF2Matrix, c: ClassicalCode) -> ClassicalCode:
    """Each codeword, as a row vector, times ``R``."""
    if r.shape != (c.n, c.n):
        raise UsageError(f"R must be {c.n}x{c.n}, got {r.shape}")
    if not r.is_invertible():
        raise RefusedError("R is singular")
    return ClassicalCode(c.n, tuple(r.vecmul(w) for w in c.words))


@dataclass(frozen=True)
class GraphForm:
    graph: Graph
    r: GF2Matrix
    signs: int


def graph_form(generators: Sequence[PauliOp]) -> GraphForm:
    """Generator change ``R = (X^-1)^T`` turning generators with invertible X block into ``+-X_t Z**r_t``."""
    n = generators[0].n
    xinv = GF2Matrix(tuple(g.u for g in generators), n).invert()
    if xinv is None:
        raise RefusedError("X block of the generators is singular")
    r = xinv.transpose()
    rows, signs = [], 0
    for t, h in enumerate(regenerate(generators, r)):
        if h.u != 1 << t or (h.v >> t) & 1:
            raise RefusedError(f"generator {t} is not of graph form after the change: {h}")
        sign, _ = h.letters()
        if sign == 2:
            signs |= 1 << t
        rows.append(h.v)
    return GraphForm(Graph.from_rows(rows), r, signs)


def stabilizer_to_graph(s: StabilizerState) -> Tuple[Graph, LocalClifford]:
    lc_generators, lc = local_clifford_reduce(s)
    return graph_form(lc_generators).graph, lc


@dataclass(frozen=True)
class ChainRecord:
    stabilizer: StabilizerState
    c_prime: ClassicalCode
    shift: int
    word_operators: Tuple[PauliOp, ...]
    local_clifford: LocalClifford
    lc_generators: Tuple[PauliOp, ...]
    r: GF2Matrix
    sign_fix: PauliOp
    graph: Graph
    code: ClassicalCode
    steps: Dict[str, str] = field(default_factory=dict, compare=False)


def ac06_to_standard_form(data: AC06Data) -> Tuple[CWSCode, ChainRecord]:
    stab = ac06_to_cws(data)
    lc_generators, lc = local_clifford_reduce(stab.stabilizer)
    form = graph_form(lc_generators)
    code = change_generators(form.r, stab.code).sorted()
    record = ChainRecord(
        stabilizer=stab.stabilizer,
        c_prime=stab.unshifted,
        shift=stab.shift,
        word_operators=stab.word_operators,
        local_clifford=lc,
        lc_generators=lc_generators,
        r=form.r,
        sign_fix=PauliOp.hermitian(0, form.signs, data.n),
        graph=form.graph,
        code=code,
        steps={
            "stab": f"K={len(stab.code)} shift={BitString(stab.shift, data.n)}",
            "lc": " ".join(lc.letters()),
            "gen": f"sign_fix={PauliOp.hermitian(0, form.signs, data.n)}",
        },
    )
    return CWSCode(form.graph, code), record


def cws_to_ac06(q: CWSCode) -> AC06Data:
    """``A = [I | Lambda]`` with rows listed from vertex ``n-1`` down, and ``f`` supported on
    the complemented codewords."""
    n = q.n
    full = (1 << n) - 1
    rows = tuple((1 << l) | (q.graph.neighbors(l) << n) for l in reversed(range(n)))
    return AC06Data(BooleanFunction(n, frozenset(c ^ full for c in q.code.words)), GF2Matrix(rows, 2 * n))


@dataclass(frozen=True)
class SdResult:
    elements: Tuple[PauliOp, ...]
    rank: int
    generators: Tuple[PauliOp, ...]


def compute_sd(s: StabilizerState, d: int, max_qubits: int = MAX_SD_QUBITS) -> SdResult:
    """Signed stabilizer elements of weight below ``d``, their rank ``r``, and a generator set
    whose first ``r`` members span them."""
    if s.n > max_qubits or len(s.generators) > max_qubits:
        raise RefusedError(f"stabilizer enumeration is limited to n <= {max_qubits}")
    gens = s.generators
    elements = []
    cur = PauliOp.identity(s.n)
    for i in range(1, 1 << len(gens)):
        k = (i & -i).bit_length() - 1
        cur = cur * gens[k]
        if cur.weight() < d:
            elements.append(cur)
    elements.sort(key=lambda e: (e.weight(), e.symplectic()))
    basis = []
    for e in elements:
        if _extends(basis, e):
            basis.append(e)
    r = len(basis)
    for g in gens:
        if _extends(basis, g):
            basis.append(g)
    logger.debug("S_d at d=%d: %d elements, rank %d", d, len(elements), r)
    return SdResult(tuple(elements), r, tuple(basis))


def _extends(basis: List[PauliOp], op: PauliOp) -> bool:
    n = op.n
    m = GF2Matrix(tuple(b.symplectic() for b in basis) + (op.symplectic(),), 2 * n)
    return m.rank() == len(basis) + 1


def satisfies_sd_constraint(code: ClassicalCode, r: int) -> bool:
    """Every codeword is 0 on the first ``r`` coordinates."""
    mask = (1 << r) - 1
    return all(w & mask == 0 for w in code.words)


def ac06_detects(data: AC06Data, d: int) -> bool:
    """Syndromes of all nonzero errors of symplectic weight below ``d`` lie in ``Cset_f``."""
    allowed = np.zeros(1 << data.n, dtype=bool)
    allowed[cset(data.f)] = True
    s = data.stabilizer()
    for w in range(1, min(d, data.n + 1)):
        for e in iter_paulis_of_weight(data.n, w):
            if not allowed[s.pattern(e)]:
                return False
    return True
