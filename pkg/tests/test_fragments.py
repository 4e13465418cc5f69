import pytest
from hypothesis import given, strategies as st

from conftest import fragments
from oracles import brute_fragment_count
from vertexrank.errors import ParseError, PreconditionError
from vertexrank.fragments import (Fragment, Graph, basic_fragment, circle, complete_graph,
                                  contract_fragment, enumerate_fragments, format_fragment, glue,
                                  iter_fragments, open_edge, parse_fragment, product)

E2 = open_edge()
B1 = basic_fragment(1)
B2 = basic_fragment(2)


def loop_vertex():
    return Graph(1, [(0, 0)])


def test_glue_examples():
    assert glue(E2, E2) == circle(1)
    assert glue(B1, B1) == complete_graph(2)
    assert glue(B2, E2) == loop_vertex()


def test_product_examples():
    p = product(B1, B1)
    assert p == Fragment(2, 2, [(-1, 0), (-2, 1)])
    assert product(B2, Graph()) == B2
    assert product(E2, B1) == Fragment(3, 1, [(-2, -1), (-3, 0)])


def test_contract_examples():
    assert contract_fragment(E2, 1, 2) == circle(1)
    assert contract_fragment(B2, 1, 2) == loop_vertex()
    assert contract_fragment(product(B1, B1), 1, 2) == complete_graph(2)


def test_contract_relabels_in_order():
    f = Fragment(4, 4, [(-1, 0), (-2, 1), (-3, 2), (-4, 3)])
    g = contract_fragment(f, 2, 3)
    assert g == Fragment(2, 4, [(-1, 0), (-2, 3), (1, 2)])


def test_enumeration_edge_cases():
    assert enumerate_fragments(2, 0, 5) == [E2]
    assert enumerate_fragments(1, 0, 5) == []
    assert enumerate_fragments(0, 0, 3) == [Graph()]


@pytest.mark.parametrize("k,v,d", [(1, 1, 3), (0, 2, 2), (2, 1, 2), (2, 2, 2), (3, 1, 3),
                                   (1, 2, 3), (4, 1, 2), (0, 3, 2)])
def test_enumeration_count_oracle(k, v, d):
    assert len(iter_fragments(k, v, d)) == brute_fragment_count(k, v, d)


def test_enumeration_order_and_bounds():
    fs = enumerate_fragments(2, 2, 3)
    keys = [(f.n_vertices, f.n_edges) for f in fs]
    assert keys == sorted(keys)
    assert len(set(fs)) == len(fs)
    for f in fs:
        assert f.circles == 0
        assert f.max_degree() <= 3


def test_validation():
    with pytest.raises(PreconditionError):
        Fragment(1, 1, [(-1, 0), (-1, 0)])
    with pytest.raises(PreconditionError):
        Fragment(2, 1, [(-1, 0)])
    with pytest.raises(PreconditionError):
        Fragment(0, 1, [(0, 3)])


@given(st.data())
def test_glue_keeps_vertices_and_degrees(data):
    k = data.draw(st.integers(0, 4))
    f = data.draw(fragments(k=k))
    h = data.draw(fragments(k=k))
    g = glue(f, h)
    assert g.n_vertices == f.n_vertices + h.n_vertices
    assert g.circles >= f.circles + h.circles
    assert list(g.degrees()) == list(f.degrees()) + list(h.degrees())


@given(st.data())
def test_glue_is_iterated_contraction(data):
    k = data.draw(st.integers(0, 4))
    f = data.draw(fragments(k=k))
    h = data.draw(fragments(k=k))
    p = product(f, h)
    for _ in range(k):
        # labels 1 and k'+1 of the shrinking product pair up in turn
        p = contract_fragment(p, 1, p.k // 2 + 1)
    assert p.as_graph() == glue(f, h)


@given(st.data())
def test_contraction_order_independent(data):
    f = data.draw(fragments(k=4))
    a = contract_fragment(contract_fragment(f, 1, 2), 1, 2)
    b = contract_fragment(contract_fragment(f, 3, 4), 1, 2)
    assert a == b


@given(fragments())
def test_format_round_trip(f):
    assert parse_fragment(format_fragment(f)) == f


@given(fragments())
def test_components_rebuild_counts(f):
    parts = f.components()
    assert sum(p.n_vertices for p, _ in parts) == f.n_vertices
    assert sum(p.n_edges for p, _ in parts) == f.n_edges
    assert sum(p.circles for p, _ in parts) == f.circles


def test_parse_errors_have_lines():
    with pytest.raises(ParseError, match="line 3"):
        parse_fragment("graph\nvertex a\nedge a b\n")
    with pytest.raises(ParseError, match="line 1"):
        parse_fragment("grph\n")
    with pytest.raises(ParseError, match="never attached"):
        parse_fragment("fragment k=2\nvertex a\nopen 1 a\n")
