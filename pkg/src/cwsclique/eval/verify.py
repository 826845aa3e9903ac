"""Verification of CWS codes.

``detection_check`` applies the combinatorial detection conditions through the
induced patterns; ``kl_oracle`` checks the Knill-Laflamme conditions directly on
the basis states ``Z**c |G>`` with exact integer arithmetic, sharing nothing with
the pattern machinery beyond the graph itself.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from cwsclique.errors import CWSError, RefusedError, UsageError
from cwsclique.model.errormap import ErrorSet, cl_values, iter_paulis_of_weight
from cwsclique.model.gf2 import BitString, ClassicalCode, PauliOp, parity
from cwsclique.model.graphs import Graph, graph_state_signs

logger = logging.getLogger(__name__)

MAX_ORACLE_QUBITS = 12
MAX_DENSE_QUBITS = 8
MAX_ORACLE_WORK = 1 << 36
TOLERANCE = 1e-9


@dataclass(frozen=True)
class CWSCode:
    graph: Graph
    code: ClassicalCode
    claimed_distance: Optional[int] = None

    def __post_init__(self):
        if self.code.n != self.graph.n:
            raise UsageError(f"codewords have length {self.code.n}, graph has {self.graph.n} vertices")
        if not self.code.contains_zero():
            raise UsageError("standard-form codes must contain the all-zeros word")

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def K(self) -> int:
        return len(self.code)


@dataclass(frozen=True)
class Witness:
    error: PauliOp
    pair: Tuple[int, int]

    def pair_text(self, n: int) -> str:
        return ",".join(str(BitString(c, n)) for c in self.pair)


@dataclass(frozen=True)
class VerificationReport:
    detects: bool
    degenerate: bool
    witness: Optional[Witness] = None
    oracle_distance: Optional[int] = None
    distance: Optional[int] = None

    def to_lines(self, n: int) -> List[str]:
        lines = [f"detects={str(self.detects).lower()}", f"degenerate={str(self.degenerate).lower()}"]
        if self.distance is not None:
            lines.append(f"distance={self.distance}")
        if self.oracle_distance is not None:
            lines.append(f"oracle_distance={self.oracle_distance}")
        if self.witness is not None:
            lines.append(f"witness_error={self.witness.error}")
            lines.append(f"witness_pair={self.witness.pair_text(n)}")
        return lines


def _membership(code: ClassicalCode) -> np.ndarray:
    member = np.zeros(1 << code.n, dtype=bool)
    member[list(code.words)] = True
    return member


def detection_check(q: CWSCode, errors: ErrorSet) -> VerificationReport:
    if errors.n != q.n:
        raise UsageError(f"errors act on {errors.n} qubits, code has {q.n}")
    u, v = errors.arrays()
    cl = cl_values(u, v, q.graph)
    words = np.array(q.code.words, dtype=np.int64)
    member = _membership(q.code)
    degenerate = bool((cl == 0).any())
    witness = None
    for k, e in enumerate(errors.errors):
        pattern = int(cl[k])
        if pattern:
            hits = np.flatnonzero(member[words ^ pattern])
            if hits.size:
                a = int(words[hits].min())
                witness = Witness(e, (a, a ^ pattern))
                break
        else:
            odd = [int(c) for c in q.code.words if parity(c & e.u)]
            if odd:
                witness = Witness(e, (0, min(odd)))
                break
    if witness is not None:
        logger.debug("detection fails on %s between %s", witness.error, witness.pair_text(q.n))
    return VerificationReport(detects=witness is None, degenerate=degenerate, witness=witness)


def recheck_witness(q: CWSCode, report: VerificationReport) -> bool:
    """True when the recorded witness is a genuine violation for ``q``."""
    if report.witness is None:
        return False
    e, (a, b) = report.witness.error, report.witness.pair
    if a not in q.code or b not in q.code:
        return False
    pattern = int(cl_values(np.array([e.u], dtype=np.int64), np.array([e.v], dtype=np.int64), q.graph)[0])
    if pattern:
        return a ^ b == pattern
    return a == 0 and bool(parity(b & e.u))


def _basis_signs(q: CWSCode, max_qubits: int) -> np.ndarray:
    signs = graph_state_signs(q.graph, max_qubits)
    xs = np.arange(1 << q.n, dtype=np.int64)
    words = np.array(q.code.words, dtype=np.int64)
    overlap = words[:, None] & xs[None, :]
    odd = np.zeros(overlap.shape, dtype=np.int64)
    for i in range(q.n):
        odd ^= (overlap >> i) & 1
    return signs[None, :] * (1 - 2 * odd)


def _kl_holds(basis: np.ndarray, e: PauliOp, xs: np.ndarray) -> bool:
    """Knill-Laflamme check of one error on integer sign vectors (global phase dropped)."""
    shifted = xs ^ e.u
    zsign = 1 - 2 * _parity_array(shifted & e.v)
    gram = (basis * zsign[None, :]) @ basis[:, shifted].T
    diag = np.diag(gram)
    off = gram - np.diag(diag)
    return not off.any() and bool((diag == diag[0]).all())


def _parity_array(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    while x.any():
        out ^= x & 1
        x = x >> 1
    return out


def kl_oracle(q: CWSCode, d: int, max_qubits: int = MAX_ORACLE_QUBITS) -> int:
    """Largest ``d' <= d`` such that every Pauli of weight below ``d'`` satisfies the KL conditions."""
    if q.n > max_qubits:
        raise RefusedError(f"the oracle is limited to n <= {max_qubits}")
    if d < 1:
        raise UsageError(f"distance must be positive, got {d}")
    work = q.K * q.K * (1 << q.n) * sum(4 ** w for w in range(1, min(d, q.n + 1)))
    if work > MAX_ORACLE_WORK:
        raise RefusedError(f"oracle workload {work:.3g} exceeds the budget of {MAX_ORACLE_WORK:.3g}")
    basis = _basis_signs(q, max_qubits)
    xs = np.arange(1 << q.n, dtype=np.int64)
    for w in range(1, min(d, q.n + 1)):
        for e in iter_paulis_of_weight(q.n, w):
            if not _kl_holds(basis, e, xs):
                logger.debug("oracle: %s violates the KL conditions", e)
                return w
    return d


def _stabilizer_distance(q: CWSCode) -> int:
    for w in range(1, q.n + 1):
        errors = ErrorSet(q.n, tuple(iter_paulis_of_weight(q.n, w)))
        u, v = errors.arrays()
        if (cl_values(u, v, q.graph) == 0).any():
            return w
    return q.n + 1


def code_distance(q: CWSCode, max_oracle_qubits: int = MAX_ORACLE_QUBITS, cross_check: bool = True) -> int:
    """Largest d with every error of weight below d detected.

    A single-codeword code gets the distance of its stabilizer state: the smallest
    weight of a non-identity error with a zero pattern.
    """
    if q.K == 1:
        return _stabilizer_distance(q)
    distance = q.n + 1
    for w in range(1, q.n + 1):
        report = detection_check(q, ErrorSet(q.n, tuple(iter_paulis_of_weight(q.n, w))))
        if not report.detects:
            distance = w
            break
    if cross_check and q.n <= max_oracle_qubits:
        try:
            oracle = kl_oracle(q, distance + 1 if distance <= q.n else distance, max_oracle_qubits)
        except RefusedError as exc:
            logger.debug("skipping oracle cross-check: %s", exc)
            return distance
        if oracle != distance:
            raise CWSError(f"pattern distance {distance} disagrees with oracle distance {oracle}")
    return distance


def _dense_state(generators: Sequence[PauliOp], pattern: int) -> np.ndarray:
    dim = 1 << generators[0].n
    proj = np.eye(dim, dtype=complex)
    for k, g in enumerate(generators):
        sign = -1.0 if (pattern >> k) & 1 else 1.0
        proj = proj @ ((np.eye(dim) + sign * g.to_matrix()) / 2)
    col = int(np.argmax(np.linalg.norm(proj, axis=0)))
    vec = proj[:, col]
    norm = np.linalg.norm(vec)
    if norm < 0.5 / np.sqrt(dim):
        raise UsageError("generators do not define a stabilizer state")
    return vec / norm


def kl_oracle_stabilizer(generators: Sequence[PauliOp], patterns: Sequence[int], d: int,
                         tol: float = TOLERANCE, max_qubits: int = MAX_DENSE_QUBITS) -> int:
    """Dense floating-point oracle for a code given by stabilizer generators and sign patterns.

    Basis state ``j`` is the joint eigenvector with ``g_k -> (-1)**bit_k(patterns[j])``.
    """
    if not generators:
        raise UsageError("need at least one generator")
    n = generators[0].n
    if n > max_qubits:
        raise RefusedError(f"the dense oracle is limited to n <= {max_qubits}")
    basis = np.stack([_dense_state(generators, p) for p in patterns], axis=1)
    for w in range(1, min(d, n + 1)):
        for e in iter_paulis_of_weight(n, w):
            gram = basis.conj().T @ e.to_matrix() @ basis
            diag = np.diag(gram)
            if np.abs(gram - np.diag(diag)).max(initial=0.0) > tol or np.abs(diag - diag[0]).max() > tol:
                logger.debug("dense oracle: %s violates the KL conditions", e)
                return w
    return d


def graph_generators(g: Graph) -> List[PauliOp]:
    """``X_l Z**r_l`` for every vertex ``l``."""
    return [PauliOp.hermitian(1 << l, g.neighbors(l), g.n) for l in range(g.n)]
