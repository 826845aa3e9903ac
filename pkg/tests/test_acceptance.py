"""End-to-end checks on published parameters and exhaustive property sweeps."""
import itertools

import numpy as np
import pytest

from cwsclique.errors import UsageError
from cwsclique.eval.verify import (CWSCode, code_distance, detection_check, graph_generators, kl_oracle,
                                   kl_oracle_stabilizer)
from cwsclique.model.ac06 import (AC06Data, BooleanFunction, LocalClifford, ac06_to_cws, ac06_to_standard_form,
                                  change_generators, code_cset, regenerate)
from cwsclique.model.clique import make_cws_clique_graph, max_clique
from cwsclique.model.errormap import error_set, setup
from cwsclique.model.gf2 import ClassicalCode, GF2Matrix, random_invertible, span
from cwsclique.model.graphs import Graph, enumerate_graphs, iso_classes, lc_orbit, lc_orbit_representatives
from cwsclique.model.structure import (ADDITIVE, additivity_label, double_linear_subcode,
                                       extend_dim3_to_dim4, is_linear)
from cwsclique.search.driver import ABSENT, SearchJob, run_search

from conftest import brute_force_clique


def _clique_graph(g, d):
    return make_cws_clique_graph(setup(error_set(g.n, d), g))


def _small_graphs(max_n=5):
    for n in range(1, 5):
        yield from enumerate_graphs(n)
    for n in range(5, max_n + 1):
        yield from iso_classes(n)


def test_example2_reproduction(example2, example2_expected):
    form = ac06_to_cws(example2)
    assert {str(g) for g in form.stabilizer.generators} == set(example2_expected["generators"])
    assert {str(b) for b in form.unshifted.bitstrings()} == set(example2_expected["c_prime"])
    q, _ = ac06_to_standard_form(example2)
    assert (q.n, q.K) == (5, 6)
    assert kl_oracle(q, 3) == 2


def test_best_code_n5_d2():
    result = run_search(SearchJob(n=5, d=2), quiet=True)
    assert len(result.records) == 1024
    assert result.best_K == 6
    assert kl_oracle(result.witness, 2) == 2


def test_best_code_n5_d3():
    result = run_search(SearchJob(n=5, d=3), quiet=True)
    assert result.best_K == 2
    assert code_distance(result.witness) == 3
    assert additivity_label(result.witness.code) == ADDITIVE


@pytest.mark.slow
def test_no_733_code():
    result = run_search(SearchJob(n=7, d=3, target_K=3, graphs="lc", jobs=4), quiet=True)
    assert result.status == ABSENT
    assert result.exit_code == 3


def test_detection_matches_oracle(rng):
    errors = {n: error_set(n, 2) for n in range(1, 5)}
    for n in range(1, 5):
        for g in enumerate_graphs(n):
            q = CWSCode(g, max_clique(_clique_graph(g, 2)).code())
            assert detection_check(q, errors[n]).detects
            assert kl_oracle(q, 2) == 2
            others = rng.permutation(np.arange(1, 1 << n))[: int(rng.integers(0, 1 << n))]
            random_code = CWSCode(g, ClassicalCode(n, (0, *sorted(int(c) for c in others))))
            detects = detection_check(random_code, errors[n]).detects
            assert detects == (kl_oracle(random_code, 2) == 2)


def test_three_word_codes_extend():
    checked = 0
    for g in _small_graphs():
        cg = _clique_graph(g, 2)
        errors = error_set(g.n, 2)
        for a, b in itertools.combinations(range(1, cg.size), 2):
            if not cg.has_edge(a, b):
                continue
            q = CWSCode(g, ClassicalCode(g.n, (0, cg.vertices[a], cg.vertices[b])))
            extended = extend_dim3_to_dim4(q, errors)
            assert extended.K == 4
            checked += 1
    assert checked > 0


def _doubling_triples(q):
    words = set(q.code.words)
    nonzero = sorted(words - {0})
    for k in (1, 2):
        for gens in itertools.combinations(nonzero, k):
            sub = span(gens)
            if len(sub) != 1 << k or not set(sub) <= words:
                continue
            for v in nonzero:
                if v not in sub:
                    yield ClassicalCode(q.n, tuple(sub)), v


def test_doubling_linear_subcodes(rng):
    triples = []
    for g in _small_graphs(6):
        q = CWSCode(g, max_clique(_clique_graph(g, 2)).code())
        triples += [(q, b, v) for b, v in _doubling_triples(q)]
    assert triples
    picks = rng.permutation(len(triples))[:1000]
    for k in picks:
        q, b, v = triples[int(k)]
        errors = error_set(q.n, 2)
        doubled = double_linear_subcode(q, b, v, errors)
        assert doubled.K == 2 * len(b)
        assert detection_check(doubled, errors).detects
        assert is_linear(doubled.code).is_linear
        assert kl_oracle(doubled, 2) == 2


def test_generator_change_invariance(example2, rng):
    q, _ = ac06_to_standard_form(example2)
    generators = graph_generators(q.graph)
    cset_size = len(code_cset(q.code))
    for _ in range(100):
        r = random_invertible(5, rng)
        new_generators = regenerate(generators, r)
        code = change_generators(r, q.code)
        assert kl_oracle_stabilizer(list(new_generators), list(code.words), 3) == 2
        assert len(code_cset(code)) == cset_size


def test_exact_solver_matches_brute_force(rng):
    for _ in range(200):
        n = int(rng.integers(2, 5))
        g = Graph.from_label(n, int(rng.integers(0, 1 << (n * (n - 1) // 2))))
        cg = _clique_graph(g, 2)
        assert cg.size <= 16
        assert max_clique(cg).members == brute_force_clique(cg)


def test_example3_codes(example3_linear, example3_nonlinear):
    for q, linear in ((example3_linear, True), (example3_nonlinear, False)):
        assert (q.n, q.K) == (4, 4)
        assert code_distance(q) == 2
        assert is_linear(q.code).is_linear is linear


def test_search_refuses_bad_distance():
    with pytest.raises(UsageError):
        SearchJob(n=3, d=5)


@pytest.mark.slow
def test_three_word_codes_extend_n6():
    errors = error_set(6, 2)
    for g in iso_classes(6):
        code = max_clique(_clique_graph(g, 2)).code()
        pairs = itertools.combinations(sorted(set(code.words) - {0}), 2)
        for b, c in itertools.islice(pairs, 20):
            extended = extend_dim3_to_dim4(CWSCode(g, ClassicalCode(6, (0, b, c))), errors)
            assert extended.K == 4
            assert kl_oracle(extended, 2) == 2


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_best_code_is_constant_on_lc_orbits(n):
    for rep in lc_orbit_representatives(n):
        sizes = {max_clique(_clique_graph(Graph.from_label(n, label), 2)).size for label in lc_orbit(rep)}
        assert len(sizes) == 1


def _random_ac06(rng, n):
    """Graph generators scrambled by a local Clifford and a generator change, with a random f."""
    g = Graph.from_label(n, int(rng.integers(0, 1 << (n * (n - 1) // 2))))
    lc = LocalClifford(n, hadamard=int(rng.integers(0, 1 << n)), phase=int(rng.integers(0, 1 << n)))
    generators = regenerate([lc.apply(h) for h in graph_generators(g)], random_invertible(n, rng))
    rows = tuple(h.u | (h.v << n) for h in generators)
    support = rng.choice(1 << n, size=min(int(rng.integers(1, 7)), 1 << n), replace=False)
    return AC06Data(BooleanFunction(n, frozenset(int(c) for c in support)), GF2Matrix(rows, 2 * n))


def test_conversion_preserves_parameters(rng):
    for _ in range(60):
        n = int(rng.integers(2, 6))
        data = _random_ac06(rng, n)
        form = ac06_to_cws(data)
        before = kl_oracle_stabilizer(list(form.stabilizer.generators), list(form.unshifted.words), n + 1)
        q, _ = ac06_to_standard_form(data)
        assert (q.n, q.K) == (n, data.f.weight)
        assert kl_oracle(q, n + 1) == before
