import pytest

from cwsclique.errors import CWSError, RefusedError, UsageError
from cwsclique.model.clique import EXACT
from cwsclique.model.structure import parse_registry
from cwsclique.search.checkpoint import Checkpoint
from cwsclique.search.driver import (ABSENT, COMPLETE, FOUND, INCONCLUSIVE, GraphRecord, SearchJob, _job_key,
                                     load_result, parse_result, run_search, search_graph, write_result)
from cwsclique.model.graphs import Graph
from cwsclique.utils.hparam_utils import get_default_hparams

from conftest import EXAMPLES_DIR

PENTAGON = str(EXAMPLES_DIR / "pentagon.graph")


@pytest.mark.parametrize("kwargs", [
    dict(n=0, d=1),
    dict(n=5, d=7),
    dict(n=5, d=3, graphs="bogus"),
    dict(n=5, d=3, exactness="sloppy"),
    dict(n=5, d=3, graphs="file"),
    dict(n=5, d=3, jobs=0),
    dict(n=5, d=3, target_K=0),
])
def test_job_validation(kwargs):
    with pytest.raises(UsageError):
        SearchJob(**kwargs)


def test_job_from_hparams():
    hps = get_default_hparams()
    job = SearchJob.from_hparams(hps, d=3, seed=None)
    assert (job.n, job.d, job.seed) == (hps.search.n, 3, hps.search.seed)
    assert SearchJob.from_hparams(job.to_hparams()) == job
    assert job.mode() == "mode=exact graphs=all"
    assert SearchJob(n=5, d=3, target_K=2).mode() == "mode=exact graphs=all target_K=2"


def test_search_graph_pentagon():
    rec = search_graph(SearchJob(n=5, d=3), Graph.ring(5))
    assert rec.best_K == 2
    assert rec.vertices == 2
    assert rec.codewords == (0, 31)
    assert rec.line().endswith("cliquegraph_vertices=2 bestK=2 status=exact")
    assert GraphRecord.from_dict(rec.to_dict()) == rec


def test_all_graphs_n4_d2():
    result = run_search(SearchJob(n=4, d=2), quiet=True)
    assert result.best_K == 4
    assert result.status == COMPLETE
    assert result.exit_code == 0
    assert len(result.records) == 64
    assert result.witness.K == 4
    text = result.to_text()
    assert text.splitlines()[:3] == ["n=4", "d=2", "mode=exact graphs=all"]
    assert "summary_bestK=4" in text


def test_parallel_run_is_deterministic():
    job = SearchJob(n=4, d=2, graphs="iso")
    serial = run_search(job, quiet=True)
    parallel = run_search(SearchJob(n=4, d=2, graphs="iso", jobs=2), quiet=True)
    assert parallel.to_text() == serial.to_text()
    assert len(serial.records) == 11


def test_checkpoint_resume(tmp_path):
    job = SearchJob(n=4, d=2, graphs="iso")
    ckpt = tmp_path / "run.jsonl"
    full = run_search(job, checkpoint_path=ckpt, quiet=True)
    lines = ckpt.read_text().splitlines()
    assert len(lines) == 1 + 11
    ckpt.write_text("\n".join(lines[:5]) + "\n" + lines[5][: len(lines[5]) // 2])
    resumed = run_search(job, checkpoint_path=ckpt, quiet=True)
    assert resumed.to_text() == full.to_text()
    assert len(resumed.records) == 11
    assert len(Checkpoint(ckpt, _job_key(job))) == 11


def test_checkpoint_belongs_to_job(tmp_path):
    ckpt = tmp_path / "run.jsonl"
    run_search(SearchJob(n=3, d=2, graphs="iso"), checkpoint_path=ckpt, quiet=True)
    with pytest.raises(UsageError):
        run_search(SearchJob(n=3, d=3, graphs="iso"), checkpoint_path=ckpt, quiet=True)


def test_checkpoint_append_is_idempotent(tmp_path):
    path = tmp_path / "c.jsonl"
    ckpt = Checkpoint(path, {"n": 3})
    ckpt.append({"id": "a", "bestK": 1})
    ckpt.append({"id": "a", "bestK": 1})
    assert len(Checkpoint(path, {"n": 3})) == 1
    assert Checkpoint(path, {"n": 3}).get("a")["bestK"] == 1


def test_target_on_single_graph():
    found = run_search(SearchJob(n=5, d=3, target_K=2, graphs="file", graph_file=PENTAGON), quiet=True)
    assert found.status == FOUND and found.exit_code == 0
    missing = run_search(SearchJob(n=5, d=3, target_K=3, graphs="file", graph_file=PENTAGON), quiet=True)
    assert missing.status == INCONCLUSIVE and missing.exit_code == 4


def test_target_absent_over_lc_orbits():
    result = run_search(SearchJob(n=5, d=3, target_K=3, graphs="lc"), quiet=True)
    assert result.status == ABSENT
    assert result.exit_code == 3
    assert result.best_K == 2


def test_heuristic_is_inconclusive():
    result = run_search(SearchJob(n=5, d=3, graphs="file", graph_file=PENTAGON, exactness="heuristic"),
                        quiet=True)
    assert result.best_K == 2
    assert result.status == INCONCLUSIVE


def test_registry_prunes():
    registry = parse_registry("n=7 K=2 d=3 optimal=yes\n")
    result = run_search(SearchJob(n=7, d=3, target_K=3, graphs="lc"), registry=registry, quiet=True)
    assert result.status == ABSENT
    assert result.records == []
    assert result.exit_code == 3


def test_exhaustive_sources_are_capped():
    with pytest.raises(RefusedError):
        run_search(SearchJob(n=9, d=2, graphs="iso"), quiet=True)


def test_sample_mode_runs():
    result = run_search(SearchJob(n=5, d=3, graphs="sample", samples=20, seed=3), quiet=True)
    assert 1 <= len(result.records) <= 20
    assert result.status in (COMPLETE, INCONCLUSIVE)


def test_result_file_round_trip(tmp_path):
    result = run_search(SearchJob(n=4, d=2, graphs="iso"), quiet=True)
    path = tmp_path / "result.txt"
    write_result(path, result)
    loaded = load_result(path)
    assert loaded.to_text() == result.to_text()
    assert loaded.witness.code.as_set() == result.witness.code.as_set()


def test_tampered_result_is_rejected(tmp_path):
    result = run_search(SearchJob(n=4, d=2, graphs="iso"), quiet=True)
    lines = result.to_text().splitlines()
    bad_code = [ln if not ln.startswith("witness_code=") else "witness_code=0000,1000,0100,1100"
                for ln in lines]
    with pytest.raises(CWSError):
        parse_result("\n".join(bad_code))
    bad_k = [ln if not ln.startswith("summary_bestK=") else "summary_bestK=3" for ln in lines]
    with pytest.raises(CWSError):
        parse_result("\n".join(bad_k))


def test_target_search_with_exhausted_budget_keeps_found_code():
    rec = search_graph(SearchJob(n=5, d=2, target_K=3, budget=0), Graph.ring(5))
    assert rec.best_K == 3
    assert rec.status == EXACT
    assert rec.codewords[0] == 0
