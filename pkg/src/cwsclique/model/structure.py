"""Linearity of classical codes and the constructions that turn CWS codes into additive ones."""
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

from cwsclique.errors import CWSError, ParseError, RefusedError, UsageError
from cwsclique.eval.verify import CWSCode, code_distance, detection_check
from cwsclique.model.errormap import ErrorSet, error_set
from cwsclique.model.gf2 import ClassicalCode, GF2Matrix, span

logger = logging.getLogger(__name__)

ADDITIVE = "additive"
NOT_MANIFESTLY_ADDITIVE = "not manifestly additive"
NONADDITIVE = "nonadditive"

PRUNED = "pruned"
OPEN = "open"

_REGISTRY_LINE = re.compile(
    r"^n=(\d+)\s+K=(\d+)\s+d=(\d+)\s+optimal=(yes|no)(?:\s+source=(.*))?$")


@dataclass(frozen=True)
class LinearityReport:
    is_linear: bool
    basis: Tuple[int, ...] = ()
    violating_pair: Optional[Tuple[int, int]] = None


def is_linear(c: ClassicalCode) -> LinearityReport:
    if not c.contains_zero():
        raise RefusedError("linearity is tested on standard-form codes containing the all-zeros word")
    words = set(c.words)
    ordered = sorted(words)
    for i, a in enumerate(ordered):
        for b in ordered[i + 1:]:
            if a ^ b not in words:
                return LinearityReport(False, violating_pair=(a, b))
    reduced, pivots = GF2Matrix(tuple(ordered), c.n).row_reduce()
    basis = tuple(r for r in reduced.rows if r)
    assert len(ordered) == 1 << len(basis)
    return LinearityReport(True, basis=basis)


def linear_span(words, n: int) -> ClassicalCode:
    return ClassicalCode(n, tuple(span(int(w) for w in words)))


def _require_detection(q: CWSCode, errors: ErrorSet):
    report = detection_check(q, errors)
    if not report.detects:
        raise RefusedError(f"input code fails detection on {report.witness.error}")


def _errors_for(q: CWSCode, errors: Optional[ErrorSet]) -> ErrorSet:
    if errors is not None:
        return errors
    d = q.claimed_distance if q.claimed_distance is not None else code_distance(q)
    return error_set(q.n, min(d, q.n + 1))


def _checked(q: CWSCode, words, errors: ErrorSet, name: str) -> CWSCode:
    out = CWSCode(q.graph, ClassicalCode(q.n, tuple(sorted(words))), q.claimed_distance)
    if not detection_check(out, errors).detects or not is_linear(out.code).is_linear:
        raise CWSError(f"{name}: constructed code fails verification")
    return out


def extend_dim3_to_dim4(q: CWSCode, errors: ErrorSet) -> CWSCode:
    """Adds ``c2 ^ c3`` to a verified three-word code, giving a linear four-word code."""
    if q.K != 3:
        raise UsageError(f"need a code with K=3, got K={q.K}")
    _require_detection(q, errors)
    c2, c3 = sorted(w for w in q.code.words if w)
    return _checked(q, (0, c2, c3, c2 ^ c3), errors, "extend_dim3_to_dim4")


def double_linear_subcode(q: CWSCode, b: ClassicalCode, v: int,
                          errors: Optional[ErrorSet] = None) -> CWSCode:
    """``b`` together with ``v ^ b``; additive with twice the dimension of ``b``."""
    if b.n != q.n:
        raise UsageError(f"subcode has length {b.n}, code has {q.n}")
    if not b.contains_zero() or not is_linear(b).is_linear:
        raise RefusedError("subcode is not linear")
    if not b.as_set() <= q.code.as_set():
        raise RefusedError("subcode is not contained in the code")
    if v not in q.code:
        raise RefusedError("v is not a codeword")
    if v in b:
        raise RefusedError("v already lies in the subcode")
    errors = _errors_for(q, errors)
    _require_detection(q, errors)
    return _checked(q, list(b.words) + [v ^ w for w in b.words], errors, "double_linear_subcode")


def additivity_label(code: ClassicalCode, exhaustive_nonlinear_only: bool = False) -> str:
    """Nonlinear codes are only called nonadditive when an exhaustive search found no linear code
    achieving the same parameters."""
    if is_linear(code).is_linear:
        return ADDITIVE
    return NONADDITIVE if exhaustive_nonlinear_only else NOT_MANIFESTLY_ADDITIVE


@dataclass(frozen=True)
class RegistryEntry:
    n: int
    K: int
    d: int
    optimal: bool
    source: str = ""


@dataclass(frozen=True)
class Registry:
    entries: Tuple[RegistryEntry, ...] = ()

    def is_optimal(self, n: int, K: int, d: int) -> bool:
        return any(e.optimal and (e.n, e.K, e.d) == (n, K, d) for e in self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def parse_registry(text: str, path=None) -> Registry:
    entries: List[RegistryEntry] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        m = _REGISTRY_LINE.match(line)
        if m is None:
            raise ParseError(f"malformed registry line {line!r}", path, lineno)
        n, K, d = int(m.group(1)), int(m.group(2)), int(m.group(3))
        entries.append(RegistryEntry(n, K, d, m.group(4) == "yes", (m.group(5) or "").strip()))
    return Registry(tuple(entries))


def load_registry(path) -> Registry:
    return parse_registry(Path(path).read_text(), path)


def optimality_filter(n: int, K: int, d: int, registry: Registry) -> str:
    """``"pruned"`` when an optimal additive ((n,1,d0)) or ((n,2,d0)) code with ``d0 <= d``
    rules out a CWS ((n,K,d)) code with larger K."""
    for e in registry.entries:
        if e.optimal and e.n == n and e.K in (1, 2) and K > e.K and d >= e.d:
            logger.debug("((%d,%d,%d)) pruned by ((%d,%d,%d)) from %s", n, K, d, e.n, e.K, e.d, e.source)
            return PRUNED
    return OPEN
