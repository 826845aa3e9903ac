"""Text formats for graphs, codes, AC06 data and explicit error sets."""
import os
from pathlib import Path
from typing import List, Optional, Tuple

from cwsclique.errors import CWSError, ParseError
from cwsclique.eval.verify import CWSCode
from cwsclique.model.ac06 import AC06Data, BooleanFunction, parse_anf
from cwsclique.model.errormap import ErrorSet
from cwsclique.model.gf2 import BitString, ClassicalCode, GF2Matrix, PauliOp
from cwsclique.model.graphs import Graph


def _content_lines(text: str) -> List[Tuple[int, str]]:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line))
    return out


def parse_graph(text: str, path=None) -> Graph:
    """Header ``n <count>`` or ``<n> <m>``, then one ``<i> <j>`` edge per line (0-based, i < j)."""
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty graph file", path)
    lineno, header = lines[0]
    parts = header.split()
    edge_count = None
    try:
        if len(parts) == 2 and parts[0] == "n":
            n = int(parts[1])
        elif len(parts) == 2:
            n, edge_count = int(parts[0]), int(parts[1])
        else:
            raise ValueError
    except ValueError:
        raise ParseError(f"bad graph header {header!r}", path, lineno)
    if n < 1:
        raise ParseError(f"vertex count must be positive, got {n}", path, lineno)
    edges, seen = [], set()
    for lineno, line in lines[1:]:
        try:
            i, j = (int(x) for x in line.split())
        except ValueError:
            raise ParseError(f"bad edge line {line!r}", path, lineno)
        if i == j:
            raise ParseError(f"self-loop at vertex {i}", path, lineno)
        if not (0 <= i < j < n):
            raise ParseError(f"edge ({i}, {j}) must satisfy 0 <= i < j < {n}", path, lineno)
        if (i, j) in seen:
            raise ParseError(f"duplicate edge ({i}, {j})", path, lineno)
        seen.add((i, j))
        edges.append((i, j))
    if edge_count is not None and edge_count != len(edges):
        raise ParseError(f"header announces {edge_count} edges, found {len(edges)}", path)
    return Graph.from_edges(n, edges)


def format_graph(g: Graph) -> str:
    lines = [f"n {g.n}"] + [f"{i} {j}" for i, j in g.edges()]
    return "\n".join(lines) + "\n"


def read_graph(path) -> Graph:
    return parse_graph(Path(path).read_text(), path)


def write_graph(path, g: Graph):
    Path(path).write_text(format_graph(g))


def _key_value(line: str, key: str, path, lineno) -> str:
    if not line.startswith(key + "="):
        raise ParseError(f"expected {key}=..., got {line!r}", path, lineno)
    return line[len(key) + 1:].strip()


def parse_code(text: str, path=None, graph: Optional[Graph] = None) -> CWSCode:
    """``n=<n>``, ``graph=<path>``, optional ``d=<claimed distance>``, then codewords."""
    lines = _content_lines(text)
    if len(lines) < 3:
        raise ParseError("code file needs n=, graph= and at least one codeword", path)
    try:
        n = int(_key_value(lines[0][1], "n", path, lines[0][0]))
    except ValueError:
        raise ParseError(f"bad n line {lines[0][1]!r}", path, lines[0][0])
    graph_ref = _key_value(lines[1][1], "graph", path, lines[1][0])
    body = lines[2:]
    claimed = None
    if body and body[0][1].startswith("d="):
        try:
            claimed = int(body[0][1][2:])
        except ValueError:
            raise ParseError(f"bad distance line {body[0][1]!r}", path, body[0][0])
        body = body[1:]
    if graph is None:
        base = os.path.dirname(os.fspath(path)) if path is not None else "."
        graph = read_graph(os.path.join(base, graph_ref))
    words = []
    for lineno, line in body:
        try:
            word = BitString.from_str(line)
        except ParseError:
            raise ParseError(f"not a codeword: {line!r}", path, lineno)
        if word.n != n:
            raise ParseError(f"codeword {line} has length {word.n}, expected {n}", path, lineno)
        words.append(word)
    try:
        return CWSCode(graph, ClassicalCode.from_bitstrings(words), claimed)
    except CWSError as exc:
        raise ParseError(str(exc), path)


def format_code(q: CWSCode, graph_ref: str) -> str:
    lines = [f"n={q.n}", f"graph={graph_ref}"]
    if q.claimed_distance is not None:
        lines.append(f"d={q.claimed_distance}")
    lines += [str(b) for b in q.code.sorted().bitstrings()]
    return "\n".join(lines) + "\n"


def read_code(path) -> CWSCode:
    return parse_code(Path(path).read_text(), path)


def write_code(path, q: CWSCode, graph_path=None):
    """Writes the code file and, when ``graph_path`` is new, the graph next to it."""
    path = Path(path)
    if graph_path is None:
        graph_path = path.with_suffix(".graph")
    graph_path = Path(graph_path)
    if not graph_path.exists():
        write_graph(graph_path, q.graph)
    ref = os.path.relpath(graph_path, path.parent)
    path.write_text(format_code(q, ref))


def parse_ac06(text: str, path=None) -> AC06Data:
    """``n=<n>``, an ``A:`` block of n rows of 2n bits, then ``f:`` with support strings
    (or a single ``f=<algebraic normal form>`` line)."""
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty AC06 file", path)
    try:
        n = int(_key_value(lines[0][1], "n", path, lines[0][0]))
    except ValueError:
        raise ParseError(f"bad n line {lines[0][1]!r}", path, lines[0][0])
    rows, support, anf = [], [], None
    block = None
    for lineno, line in lines[1:]:
        if line == "A:":
            block = "A"
        elif line == "f:":
            block = "f"
        elif line.startswith("f="):
            anf = line[2:].strip()
            block = None
        elif block == "A":
            bits = line.replace(" ", "")
            if len(bits) != 2 * n or set(bits) - {"0", "1"}:
                raise ParseError(f"A rows need {2 * n} bits, got {line!r}", path, lineno)
            rows.append(sum(1 << i for i, ch in enumerate(bits) if ch == "1"))
        elif block == "f":
            word = BitString.from_str(line)
            if word.n != n:
                raise ParseError(f"support string {line} has length {word.n}, expected {n}", path, lineno)
            support.append(word.value)
        else:
            raise ParseError(f"unexpected line {line!r}", path, lineno)
    if len(rows) != n:
        raise ParseError(f"A needs {n} rows, got {len(rows)}", path)
    f = parse_anf(anf, n) if anf is not None else BooleanFunction(n, frozenset(support))
    try:
        return AC06Data(f, GF2Matrix(tuple(rows), 2 * n))
    except CWSError as exc:
        raise ParseError(str(exc), path)


def format_ac06(data: AC06Data) -> str:
    lines = [f"n={data.n}", "A:"]
    lines += ["".join(str((r >> j) & 1) for j in range(2 * data.n)) for r in data.A.rows]
    lines.append("f:")
    lines += [str(BitString(c, data.n)) for c in sorted(data.f.support)]
    return "\n".join(lines) + "\n"


def read_ac06(path) -> AC06Data:
    return parse_ac06(Path(path).read_text(), path)


def parse_error_set(text: str, path=None, n: Optional[int] = None) -> ErrorSet:
    ops = []
    for lineno, line in _content_lines(text):
        try:
            ops.append(PauliOp.from_str(line))
        except ParseError:
            raise ParseError(f"not a Pauli operator: {line!r}", path, lineno)
    try:
        return ErrorSet.from_paulis(ops, n)
    except CWSError as exc:
        raise ParseError(str(exc), path)


def read_error_set(path, n: Optional[int] = None) -> ErrorSet:
    return parse_error_set(Path(path).read_text(), path, n)


