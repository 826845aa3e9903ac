import pytest

from cwsclique import CWSSearch
from cwsclique.errors import UsageError
from cwsclique.model.gf2 import ClassicalCode
from cwsclique.search.driver import COMPLETE

from conftest import DATA_DIR


def test_defaults_and_overrides():
    api = CWSSearch()
    assert api.job().n == api.hps.search.n
    api = CWSSearch(n=4, d=2, graphs="iso")
    job = api.job()
    assert (job.n, job.d, job.graphs) == (4, 2, "iso")
    assert api.registry is None


def test_sample_config_and_registry():
    api = CWSSearch(config_path=DATA_DIR / "config.json", registry_path=DATA_DIR / "registry.txt")
    assert len(api.registry) == 4
    result = api.search()
    assert result.exit_code == 3
    assert result.records == []


def test_search_to_file(tmp_path):
    out = tmp_path / "r.txt"
    result = CWSSearch().search_to_file(out, n=3, d=2, graphs="iso", quiet=True)
    assert result.status == COMPLETE
    assert out.read_text() == result.to_text()


def test_verify_reports_distance(pentagon_code):
    report = CWSSearch().verify(pentagon_code)
    assert report.detects
    assert report.distance == 3
    assert report.oracle_distance == 3


def test_map_errors_workers_agree(pentagon):
    api = CWSSearch()
    assert api.map_errors(pentagon, 3).cl_set() == api.map_errors(pentagon, 3, workers=3).cl_set()
    assert api.clique_graph(pentagon, 3).vertices == (0, 31)


def test_structure_actions(example3_linear, example3_nonlinear):
    api = CWSSearch()
    assert api.structure(example3_linear, "linear").is_linear
    assert api.structure(example3_nonlinear, "label") == "not manifestly additive"
    doubled = api.structure(example3_linear, "double", ClassicalCode(4, (0, 6)), 10)
    assert doubled.K == 4
    with pytest.raises(UsageError):
        api.structure(example3_linear, "double")
    with pytest.raises(UsageError):
        api.structure(example3_linear, "rotate")


def test_orbit_ids(star4):
    ids = CWSSearch.orbit(star4)
    # the star and the complete graph are one local-complementation step apart
    assert len(ids) == 2
    assert CWSSearch.canonical_id(star4) in ids
    assert "3f" in ids


def test_search_in_dir_resumes(tmp_path):
    run_dir = tmp_path / "run"
    first = CWSSearch().search_in_dir(run_dir, quiet=True, n=3, d=2, graphs="iso")
    assert (run_dir / "config.json").exists()
    second = CWSSearch().search_in_dir(run_dir, quiet=True)
    assert second.to_text() == first.to_text()
    assert (run_dir / "result.txt").read_text() == first.to_text()
