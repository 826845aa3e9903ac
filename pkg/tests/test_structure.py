import pytest

from cwsclique.errors import ParseError, RefusedError, UsageError
from cwsclique.eval.verify import CWSCode
from cwsclique.model.errormap import error_set
from cwsclique.model.gf2 import ClassicalCode
from cwsclique.model.structure import (ADDITIVE, NONADDITIVE, NOT_MANIFESTLY_ADDITIVE, OPEN, PRUNED,
                                       Registry, additivity_label, double_linear_subcode,
                                       extend_dim3_to_dim4, is_linear, linear_span, load_registry,
                                       optimality_filter, parse_registry)

from conftest import DATA_DIR


def test_is_linear(example3_linear, example3_nonlinear):
    report = is_linear(example3_linear.code)
    assert report.is_linear
    assert len(report.basis) == 2
    report = is_linear(example3_nonlinear.code)
    assert not report.is_linear
    assert report.violating_pair == (6, 10)
    with pytest.raises(RefusedError):
        is_linear(ClassicalCode(3, (1, 2)))


def test_linear_span():
    assert linear_span([6, 10], 4).as_set() == {0, 6, 10, 12}
    assert linear_span([], 3).words == (0,)


def test_additivity_labels(example3_linear, example3_nonlinear):
    assert additivity_label(example3_linear.code) == ADDITIVE
    assert additivity_label(example3_nonlinear.code) == NOT_MANIFESTLY_ADDITIVE
    assert additivity_label(example3_nonlinear.code, exhaustive_nonlinear_only=True) == NONADDITIVE
    assert additivity_label(example3_linear.code, exhaustive_nonlinear_only=True) == ADDITIVE


def test_extend_dim3(star4):
    q = CWSCode(star4, ClassicalCode(4, (0, 6, 10)))
    extended = extend_dim3_to_dim4(q, error_set(4, 2))
    assert extended.code.words == (0, 6, 10, 12)
    assert is_linear(extended.code).is_linear
    with pytest.raises(UsageError):
        extend_dim3_to_dim4(CWSCode(star4, ClassicalCode(4, (0, 6))), error_set(4, 2))


def test_extend_dim3_requires_detection(pentagon):
    q = CWSCode(pentagon, ClassicalCode(5, (0, 1, 2)))
    with pytest.raises(RefusedError):
        extend_dim3_to_dim4(q, error_set(5, 2))


def test_double_linear_subcode(example3_linear):
    doubled = double_linear_subcode(example3_linear, ClassicalCode(4, (0, 6)), 10)
    assert doubled.code.as_set() == {0, 6, 10, 12}
    assert doubled.K == 4


def test_double_rejects_bad_inputs(example3_linear, example3_nonlinear):
    with pytest.raises(RefusedError):
        double_linear_subcode(example3_linear, ClassicalCode(4, (0, 6)), 6)
    with pytest.raises(RefusedError):
        double_linear_subcode(example3_linear, ClassicalCode(4, (0, 1)), 10)
    with pytest.raises(RefusedError):
        double_linear_subcode(example3_nonlinear, ClassicalCode(4, (0, 6, 10, 12)), 13)
    with pytest.raises(RefusedError):
        double_linear_subcode(example3_linear, ClassicalCode(4, (0, 6)), 13)
    with pytest.raises(UsageError):
        double_linear_subcode(example3_linear, ClassicalCode(3, (0,)), 1)


def test_load_registry():
    registry = load_registry(DATA_DIR / "registry.txt")
    assert len(registry) == 4
    assert registry.is_optimal(5, 2, 3)
    assert registry.is_optimal(7, 2, 3)
    assert not registry.is_optimal(4, 4, 2)
    assert registry.entries[0].source == "perfect five-qubit code"


def test_parse_registry_errors():
    with pytest.raises(ParseError) as excinfo:
        parse_registry("# header\nn=5 K=2 d=3 optimal=maybe\n")
    assert excinfo.value.lineno == 2


def test_optimality_filter():
    registry = parse_registry("n=7 K=2 d=3 optimal=yes\nn=5 K=4 d=2 optimal=yes\n")
    assert optimality_filter(7, 3, 3, registry) == PRUNED
    assert optimality_filter(7, 3, 4, registry) == PRUNED
    assert optimality_filter(7, 2, 3, registry) == OPEN
    assert optimality_filter(7, 3, 2, registry) == OPEN
    assert optimality_filter(5, 6, 2, registry) == OPEN
    assert optimality_filter(7, 3, 3, Registry()) == OPEN
