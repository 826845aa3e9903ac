import pytest

from cwsclique.errors import ParseError
from cwsclique.eval.verify import CWSCode
from cwsclique.model.gf2 import ClassicalCode
from cwsclique.model.graphs import Graph
from cwsclique.utils.io_utils import (format_ac06, format_graph, parse_ac06, parse_code,
                                      parse_error_set, parse_graph, read_ac06, read_code,
                                      read_graph, write_code)


def test_parse_graph_header_forms():
    g = parse_graph("n 3\n0 1\n1 2\n")
    assert g == Graph.from_edges(3, [(0, 1), (1, 2)])
    assert parse_graph("# comment\n3 2\n0 1  # first\n1 2\n") == g
    assert parse_graph("n 4\n").n == 4
    assert parse_graph(format_graph(Graph.ring(5))) == Graph.ring(5)


@pytest.mark.parametrize("text, lineno", [
    ("n 3\n0 0\n", 2),
    ("n 3\n0 1\n0 1\n", 3),
    ("n 3\n1 0\n", 2),
    ("n 3\n0 5\n", 2),
    ("n 3\n0 x\n", 2),
    ("graph\n", 1),
])
def test_parse_graph_errors(text, lineno):
    with pytest.raises(ParseError) as excinfo:
        parse_graph(text, "g.txt")
    assert excinfo.value.lineno == lineno
    assert str(excinfo.value).startswith(f"g.txt:{lineno}:")


def test_parse_graph_edge_count_mismatch():
    with pytest.raises(ParseError):
        parse_graph("3 2\n0 1\n")
    with pytest.raises(ParseError):
        parse_graph("")


def test_read_example_graphs(examples_dir):
    assert read_graph(examples_dir / "pentagon.graph") == Graph.ring(5)
    assert read_graph(examples_dir / "star4.graph") == Graph.star(4)


def test_read_example_codes(examples_dir, example3_linear, example3_nonlinear):
    q = read_code(examples_dir / "pentagon_repetition.code")
    assert q.graph == Graph.ring(5)
    assert q.claimed_distance == 3
    assert q.code.as_set() == {0, 31}
    assert read_code(examples_dir / "star4_linear.code").code == example3_linear.code
    assert read_code(examples_dir / "star4_nonlinear.code").code == example3_nonlinear.code


def test_parse_code_errors(pentagon):
    with pytest.raises(ParseError):
        parse_code("n=5\ngraph=-\n0000\n", graph=pentagon)
    with pytest.raises(ParseError):
        parse_code("n=5\ngraph=-\n00020\n", graph=pentagon)
    with pytest.raises(ParseError):
        parse_code("n=5\ngraph=-\n10000\n", graph=pentagon)
    with pytest.raises(ParseError):
        parse_code("n=5\nd=3\n00000\n", graph=pentagon)


def test_write_and_read_code(tmp_path, star4):
    q = CWSCode(star4, ClassicalCode(4, (12, 0, 6, 10)), claimed_distance=2)
    path = tmp_path / "codes" / "star.code"
    path.parent.mkdir()
    write_code(path, q)
    assert (tmp_path / "codes" / "star.graph").exists()
    assert path.read_text().splitlines()[:3] == ["n=4", "graph=star.graph", "d=2"]
    back = read_code(path)
    assert back.graph == star4
    assert back.code.words == (0, 6, 10, 12)


def test_read_example2(examples_dir, example2):
    data = read_ac06(examples_dir / "example2.ac06")
    assert data == example2
    assert parse_ac06(format_ac06(data)) == data


def test_parse_ac06_with_anf(example2):
    text = format_ac06(example2).split("f:")[0] + f"f={example2.f.to_anf()}\n"
    assert parse_ac06(text).f.support == example2.f.support


def test_parse_ac06_errors():
    with pytest.raises(ParseError):
        parse_ac06("n=2\nA:\n1000\n")
    with pytest.raises(ParseError):
        parse_ac06("n=2\nA:\n100\n0100\n")
    with pytest.raises(ParseError):
        parse_ac06("n=2\nA:\n1000\n0010\nf:\n00\n")


def test_parse_error_set():
    errors = parse_error_set("XII\n# weight two\nIZZ\nXII\n")
    assert len(errors) == 2
    assert [str(e) for e in errors] == ["XII", "IZZ"]
    with pytest.raises(ParseError):
        parse_error_set("XII\nIQI\n")
