import pytest

from cwsclique.errors import RefusedError, UsageError
from cwsclique.model.clique import (BOUND, EXACT, cws_maxclique, find_clique_of_size,
                                    heuristic_clique, make_cws_clique_graph, max_clique)
from cwsclique.model.errormap import error_set, setup
from cwsclique.model.graphs import Graph

from conftest import brute_force_clique


def _clique_graph(g, d, **kwargs):
    return make_cws_clique_graph(setup(error_set(g.n, d), g), **kwargs)


def test_pentagon_clique_graph(pentagon):
    cg = _clique_graph(pentagon, 3)
    assert cg.vertices == (0, 31)
    assert cg.has_edge(0, 1) and cg.has_edge(1, 0)
    assert cg.to_dump().splitlines()[0] == "vertices=2"


def test_pentagon_max_clique(pentagon):
    clique = max_clique(_clique_graph(pentagon, 3))
    assert clique.size == 2
    assert clique.codewords == (0, 31)
    assert clique.status == EXACT
    assert clique.code().as_set() == {0, 31}


def test_find_clique_of_size(pentagon):
    cg = _clique_graph(pentagon, 3)
    assert find_clique_of_size(cg, 3) is None
    found = find_clique_of_size(cg, 2)
    assert found.codewords == (0, 31) and found.exact
    with pytest.raises(UsageError):
        find_clique_of_size(cg, 0)


def test_heuristic_is_never_exact(pentagon):
    clique = heuristic_clique(_clique_graph(pentagon, 3), restarts=4, seed=7)
    assert clique.status == BOUND
    assert clique.codewords == (0, 31)


def test_vertex_cap(pentagon):
    with pytest.raises(RefusedError):
        _clique_graph(pentagon, 3, max_vertices=1)


def test_adjacency_is_symmetric(rng):
    g = Graph.from_label(5, int(rng.integers(0, 1 << 10)))
    cg = _clique_graph(g, 2)
    dense = cg.dense()
    assert (dense == dense.T).all()
    assert not dense.diagonal().any()
    # the all-zeros word is compatible with every admissible word
    assert dense[0, 1:].all()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_max_clique_matches_brute_force(n, rng):
    for _ in range(6):
        g = Graph.from_label(n, int(rng.integers(0, 1 << (n * (n - 1) // 2))))
        cg = _clique_graph(g, 2)
        expected = brute_force_clique(cg)
        clique = max_clique(cg)
        assert clique.members == expected
        assert cg.is_clique(clique.members)
        heuristic = heuristic_clique(cg, restarts=8, seed=1)
        assert cg.is_clique(heuristic.members)
        assert heuristic.size <= clique.size


def test_budgeted_search_returns_a_clique():
    cg = _clique_graph(Graph.ring(4), 2)
    exact = max_clique(cg)
    assert exact.members == (0, 1, 4, 5)
    clique = max_clique(cg, budget=0)
    assert cg.is_clique(clique.members)
    assert clique.size == exact.size
    # the tie-break cannot finish on a zero budget
    assert clique.status == BOUND
    assert clique.members == (0, 2, 3, 5)


def test_exhausted_budget_keeps_a_large_enough_clique(pentagon):
    cg = _clique_graph(pentagon, 2)
    clique = find_clique_of_size(cg, 3, budget=0)
    assert clique.size == 3
    assert clique.exact
    assert clique.members[0] == 0
    assert cg.is_clique(clique.members)


def test_cws_maxclique(pentagon):
    code = cws_maxclique(error_set(5, 3), pentagon)
    assert code.as_set() == {0, 31}


def test_pentagon_distance_two_clique_number(pentagon):
    assert max_clique(_clique_graph(pentagon, 2)).size == 6


def test_single_edge_has_no_distance_two_code():
    code = cws_maxclique(error_set(2, 2), Graph.from_edges(2, [(0, 1)]))
    assert code.words == (0,)


def test_clique_of_size_one_is_zero(pentagon):
    clique = find_clique_of_size(_clique_graph(pentagon, 3), 1)
    assert clique.codewords == (0,)
