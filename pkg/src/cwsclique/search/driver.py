"""Search over a stream of graphs for the largest CWS code of a given distance.

Graphs are pulled by a worker pool; each worker runs setup, builds the clique
graph and solves it. The collector is the only writer of checkpoint and result
records, and sorts records by canonical id so output does not depend on
completion order.
"""
import time
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from multiprocessing import Pool
from typing import Iterator, List, Optional, Tuple

from loguru import logger
from tqdm import tqdm

from cwsclique.errors import CWSError, ParseError, RefusedError, UsageError
from cwsclique.eval.verify import CWSCode, detection_check
from cwsclique.model.clique import (BOUND, EXACT, MAX_CLIQUE_VERTICES, Clique, find_clique_of_size,
                                    heuristic_clique, make_cws_clique_graph, max_clique)
from cwsclique.model.errormap import error_set, setup
from cwsclique.model.gf2 import MAX_BITS, BitString, ClassicalCode
from cwsclique.model.graphs import (MAX_CANONICAL_N, MAX_EXHAUSTIVE_N, Graph, canonical_form, enumerate_graphs,
                                    label_hex, lc_orbit_representatives, sample_graphs)
from cwsclique.model.structure import PRUNED, Registry, optimality_filter
from cwsclique.search.checkpoint import Checkpoint
from cwsclique.utils.hparam_utils import HParams
from cwsclique.utils.io_utils import read_graph

GRAPH_SOURCES = ("all", "iso", "lc", "file", "sample")
EXACTNESS = ("exact", "heuristic")

FOUND = "found"
COMPLETE = "complete"
ABSENT = "absent"
INCONCLUSIVE = "inconclusive"
ABORTED = "aborted"

EXIT_CODES = {FOUND: 0, COMPLETE: 0, ABSENT: 3, INCONCLUSIVE: 4, ABORTED: 1}


@dataclass(frozen=True)
class SearchJob:
    n: int
    d: int
    target_K: Optional[int] = None
    graphs: str = "all"
    exactness: str = "exact"
    jobs: int = 1
    seed: int = 0
    budget: Optional[int] = None
    samples: int = 1000
    restarts: int = 32
    graph_file: Optional[str] = None
    max_qubits: int = MAX_BITS
    max_clique_vertices: int = MAX_CLIQUE_VERTICES

    def __post_init__(self):
        if self.n < 1:
            raise UsageError(f"n must be positive, got {self.n}")
        if not 1 <= self.d <= self.n + 1:
            raise UsageError(f"d must lie in 1..{self.n + 1}, got {self.d}")
        if self.graphs not in GRAPH_SOURCES:
            raise UsageError(f"graph source must be one of {GRAPH_SOURCES}, got {self.graphs!r}")
        if self.exactness not in EXACTNESS:
            raise UsageError(f"exactness must be one of {EXACTNESS}, got {self.exactness!r}")
        if self.target_K is not None and self.target_K < 1:
            raise UsageError(f"target K must be positive, got {self.target_K}")
        if self.graphs == "file" and not self.graph_file:
            raise UsageError("graph source 'file' needs a graph file")
        if self.jobs < 1:
            raise UsageError(f"need at least one worker, got {self.jobs}")

    @property
    def covers_all_classes(self) -> bool:
        return self.graphs in ("all", "iso", "lc")

    @property
    def conclusive(self) -> bool:
        """Whether a negative outcome of this job proves nonexistence."""
        return self.exactness == "exact" and self.covers_all_classes

    def mode(self) -> str:
        text = f"mode={self.exactness} graphs={self.graphs}"
        if self.target_K is not None:
            text += f" target_K={self.target_K}"
        return text

    def to_hparams(self) -> HParams:
        search = asdict(self)
        limits = {"max_qubits": search.pop("max_qubits"),
                  "max_clique_vertices": search.pop("max_clique_vertices")}
        return HParams(search=search, limits=limits)

    @classmethod
    def from_hparams(cls, hps: HParams, **overrides) -> "SearchJob":
        fields = {k: v for k, v in hps.search.items() if k in cls.__dataclass_fields__}
        limits = hps.get("limits")
        if limits is not None:
            for key in ("max_qubits", "max_clique_vertices"):
                if key in limits:
                    fields[key] = limits[key]
        fields.update({k: v for k, v in overrides.items() if v is not None})
        if fields.get("n") is None or fields.get("d") is None:
            raise UsageError("a search job needs n and d")
        return cls(**fields)


@dataclass(frozen=True)
class GraphRecord:
    graph_id: str
    canonical_id: str
    vertices: int
    best_K: int
    status: str
    codewords: Tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {"id": self.graph_id, "canonical": self.canonical_id, "vertices": self.vertices,
                "bestK": self.best_K, "status": self.status, "codewords": list(self.codewords)}

    @classmethod
    def from_dict(cls, rec: dict) -> "GraphRecord":
        return cls(rec["id"], rec["canonical"], rec["vertices"], rec["bestK"], rec["status"],
                   tuple(rec["codewords"]))

    def line(self) -> str:
        return (f"graph={self.canonical_id} cliquegraph_vertices={self.vertices} "
                f"bestK={self.best_K} status={self.status}")

    def sort_key(self):
        return (self.canonical_id, self.graph_id)


@dataclass
class SearchResult:
    job: SearchJob
    records: List[GraphRecord]
    best_K: int
    status: str
    witness: Optional[CWSCode] = None
    witness_id: Optional[str] = None
    error: Optional[str] = None
    elapsed: float = field(default=0.0, compare=False)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def to_text(self) -> str:
        lines = [f"n={self.job.n}", f"d={self.job.d}", self.job.mode()]
        lines += [r.line() for r in self.records]
        lines.append(f"summary_bestK={self.best_K}")
        lines.append(f"summary_graphs={len(self.records)}")
        lines.append(f"summary_status={self.status}")
        if self.witness is not None:
            lines.append(f"witness_graph={self.witness_id}")
            lines.append("witness_code=" + ",".join(str(b) for b in self.witness.code.sorted().bitstrings()))
        if self.error is not None:
            lines.append(f"error={self.error}")
        return "\n".join(lines) + "\n"


def graph_id(g: Graph) -> str:
    return label_hex(g.n, g.label())


def canonical_id(g: Graph) -> str:
    if g.n > MAX_CANONICAL_N:
        return graph_id(g)
    return label_hex(g.n, canonical_form(g).label)


def graph_stream(job: SearchJob) -> Iterator[Graph]:
    if job.graphs == "all":
        return enumerate_graphs(job.n)
    if job.graphs == "iso":
        return enumerate_graphs(job.n, dedup="iso")
    if job.graphs == "lc":
        return lc_orbit_representatives(job.n)
    if job.graphs == "sample":
        return sample_graphs(job.n, job.samples, job.seed)
    g = read_graph(job.graph_file)
    if g.n != job.n:
        raise UsageError(f"{job.graph_file} has {g.n} vertices, job asks for n={job.n}")
    return iter([g])


def stream_size(job: SearchJob) -> Optional[int]:
    if job.graphs == "all":
        return 1 << (job.n * (job.n - 1) // 2)
    if job.graphs == "sample":
        return job.samples
    if job.graphs == "file":
        return 1
    return None


@lru_cache(maxsize=None)
def _errors(n: int, d: int):
    return error_set(n, d)


def search_graph(job: SearchJob, g: Graph) -> GraphRecord:
    """Largest code on one graph (or a code of the target size)."""
    cl = setup(_errors(job.n, job.d), g, job.max_qubits)
    cg = make_cws_clique_graph(cl, job.max_clique_vertices)
    if job.exactness == "heuristic":
        clique = heuristic_clique(cg, job.restarts, job.seed)
        if job.target_K is not None and clique.size > job.target_K:
            clique = Clique(clique.n, clique.members[: job.target_K], clique.codewords[: job.target_K], BOUND)
    elif job.target_K is not None:
        clique = find_clique_of_size(cg, job.target_K, job.budget)
        if clique is None:
            clique = max_clique(cg, job.budget)
    else:
        clique = max_clique(cg, job.budget)
    return GraphRecord(graph_id(g), canonical_id(g), cg.size, clique.size, clique.status,
                       tuple(sorted(clique.codewords)))


def _work(task):
    job, n, label = task
    return search_graph(job, Graph.from_label(n, label))


def _summarize(job: SearchJob, records: List[GraphRecord], aborted: Optional[str]) -> SearchResult:
    records = sorted(records, key=GraphRecord.sort_key)
    best_K = max((r.best_K for r in records), default=0)
    all_exact = all(r.status == EXACT for r in records)
    if aborted is not None:
        status = ABORTED
    elif job.target_K is not None:
        if any(r.best_K >= job.target_K for r in records):
            status = FOUND
        elif all_exact and job.conclusive:
            status = ABSENT
        else:
            status = INCONCLUSIVE
    else:
        status = COMPLETE if all_exact and job.exactness == "exact" else INCONCLUSIVE
    witness, witness_id = None, None
    candidates = [r for r in records if r.best_K == best_K and r.best_K > 0]
    if candidates:
        rec = min(candidates, key=lambda r: (r.status != EXACT, r.sort_key()))
        g = Graph.from_label(job.n, int(rec.graph_id, 16))
        witness = CWSCode(g, ClassicalCode(job.n, rec.codewords))
        witness_id = rec.graph_id
    return SearchResult(job, records, best_K, status, witness, witness_id, aborted)


def _job_key(job: SearchJob) -> dict:
    key = asdict(job)
    key.pop("jobs")
    return key


def pruned_result(job: SearchJob) -> SearchResult:
    logger.info(f"(({job.n},{job.target_K},{job.d})) is ruled out by the optimality registry")
    return SearchResult(job, [], 0, ABSENT)


def run_search(job: SearchJob, checkpoint_path=None, registry: Optional[Registry] = None,
               quiet: bool = False) -> SearchResult:
    start = time.time()
    if job.covers_all_classes and job.n > MAX_EXHAUSTIVE_N:
        raise RefusedError(f"graph source {job.graphs!r} is limited to n <= {MAX_EXHAUSTIVE_N}; use sampling")
    if registry is not None and job.target_K is not None:
        if optimality_filter(job.n, job.target_K, job.d, registry) == PRUNED:
            return pruned_result(job)

    checkpoint = Checkpoint(checkpoint_path, _job_key(job)) if checkpoint_path else None
    records: List[GraphRecord] = []
    if checkpoint is not None:
        records = [GraphRecord.from_dict(r) for r in checkpoint.records.values()]

    def tasks():
        seen = set()
        for g in graph_stream(job):
            gid = graph_id(g)
            if gid in seen or (checkpoint is not None and checkpoint.done(gid)):
                continue
            if job.graphs == "sample":
                seen.add(gid)
            yield job, g.n, g.label()

    logger.info(f"search n={job.n} d={job.d} {job.mode()} jobs={job.jobs}")
    aborted = None
    pbar = tqdm(total=stream_size(job), initial=len(records), disable=quiet, desc="graphs")
    pool = Pool(job.jobs) if job.jobs > 1 else None
    try:
        results = pool.imap_unordered(_work, tasks(), chunksize=4) if pool else map(_work, tasks())
        for rec in results:
            records.append(rec)
            if checkpoint is not None:
                checkpoint.append(rec.to_dict())
            pbar.update(1)
    except Exception as exc:
        aborted = f"{type(exc).__name__}: {exc}"
        logger.error(f"search aborted after {len(records)} graphs: {aborted}")
    finally:
        pbar.close()
        if pool is not None:
            pool.terminate()
            pool.join()

    result = _summarize(job, records, aborted)
    result.elapsed = time.time() - start
    logger.info(f"{len(result.records)} graphs, bestK={result.best_K}, status={result.status}, "
                f"elapsed {result.elapsed:.1f}s")
    return result


def write_result(path, result: SearchResult):
    with open(path, "w", encoding="utf-8") as f:
        f.write(result.to_text())


def _fields(line: str) -> dict:
    try:
        return dict(tok.split("=", 1) for tok in line.split())
    except ValueError:
        raise ParseError(f"expected key=value tokens, got {line!r}")


def parse_result(text: str, path=None) -> SearchResult:
    """Inverse of ``SearchResult.to_text``; the stored witness is re-verified."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) < 3:
        raise ParseError("result file is truncated", path)
    try:
        n = int(_fields(lines[0])["n"])
        d = int(_fields(lines[1])["d"])
        mode = _fields(lines[2])
        target = mode.get("target_K")
        job = SearchJob(n=n, d=d, exactness=mode["mode"], graphs=mode["graphs"],
                        target_K=int(target) if target is not None else None,
                        graph_file=mode.get("file", "-") if mode["graphs"] == "file" else None)
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad result header: {exc}", path)
    records, summary = [], {}
    for lineno, line in enumerate(lines[3:], 4):
        if line.startswith("graph="):
            f = _fields(line)
            try:
                records.append(GraphRecord("", f["graph"], int(f["cliquegraph_vertices"]),
                                           int(f["bestK"]), f["status"]))
            except (KeyError, ValueError):
                raise ParseError(f"bad graph record {line!r}", path, lineno)
        else:
            key, _, value = line.partition("=")
            summary[key] = value
    try:
        best_K = int(summary["summary_bestK"])
        status = summary["summary_status"]
    except (KeyError, ValueError):
        raise ParseError("missing summary lines", path)
    witness, witness_id = None, summary.get("witness_graph")
    if witness_id is not None:
        words = [BitString.from_str(w) for w in summary.get("witness_code", "").split(",") if w]
        g = Graph.from_label(n, int(witness_id, 16))
        witness = CWSCode(g, ClassicalCode.from_bitstrings(words))
        if len(witness.code) != best_K:
            raise CWSError(f"witness has {len(witness.code)} codewords, summary claims {best_K}")
        if not detection_check(witness, error_set(n, d)).detects:
            raise CWSError(f"stored witness on graph {witness_id} fails detection at d={d}")
    return SearchResult(job, records, best_K, status, witness, witness_id, summary.get("error"))


def load_result(path) -> SearchResult:
    with open(path, "r", encoding="utf-8") as f:
        return parse_result(f.read(), path)
