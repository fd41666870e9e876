import json

import pytest

from heatsse import load_graph, parse_edge_list, parse_json
from heatsse.errors import GraphFormatError, InputError


def test_edge_list_basic():
    g = parse_edge_list("# two edges\nundirected\n0 1 2.5\n1 2  # default weight\n")
    assert g.n == 3 and not g.directed
    assert g.edges == [(0, 1, 2.5), (1, 2, 1.0)]


def test_directed_header_case_insensitive():
    assert parse_edge_list("Directed\n0 1\n1 0\n").directed


@pytest.mark.parametrize("text, lineno", [
    ("undirected\n0 1\n1 x\n", 3),
    ("undirected\n0 1 -2\n", 2),
    ("undirected\n\n0 1 1 1\n", 3),
    ("graph\n0 1\n", 1),
    ("undirected\n0 1 abc\n", 2),
    ("undirected\n0 -1\n", 2),
])
def test_errors_carry_line_numbers(text, lineno):
    with pytest.raises(GraphFormatError) as err:
        parse_edge_list(text)
    assert err.value.lineno == lineno
    assert str(err.value).startswith(f"line {lineno}: ")


def test_missing_header_or_edges():
    with pytest.raises(GraphFormatError):
        parse_edge_list("# nothing\n")
    with pytest.raises(GraphFormatError):
        parse_edge_list("undirected\n")


def test_json_graph():
    g = parse_json(json.dumps({"n": 4, "directed": True, "edges": [[0, 1], [1, 2, 0.5]]}))
    assert g.n == 4 and g.directed
    assert g.edges == [(0, 1, 1.0), (1, 2, 0.5)]


@pytest.mark.parametrize("text", ['{"edges": [[0]]}', "[1, 2]", '{"n": 2, "edges": [[0, 5]]}', '{"edges": [["a", 1]]}'])
def test_json_errors(text):
    with pytest.raises(GraphFormatError):
        parse_json(text)


def test_invalid_json_line_number():
    with pytest.raises(GraphFormatError) as err:
        parse_json('{\n"n": 3,\n"edges": [[0, 1],,]\n}')
    assert err.value.lineno == 3


def test_load_dispatch(tmp_path):
    (tmp_path / "g.txt").write_text("undirected\n0 1\n")
    (tmp_path / "g.json").write_text('{"edges": [[0, 1]]}')
    (tmp_path / "noext").write_text(' {"edges": [[0, 1], [1, 2]]}')
    assert load_graph(tmp_path / "g.txt").n == 2
    assert load_graph(tmp_path / "g.json").n == 2
    assert load_graph(tmp_path / "noext").n == 3
    with pytest.raises(InputError):
        load_graph(tmp_path / "missing.txt")
