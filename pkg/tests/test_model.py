import itertools

import pytest
from hypothesis import given, strategies as st

from conftest import example2_model, fragments, matching_model, models
from oracles import (brute_p_h, brute_partition_function, count_perfect_matchings, pair,
                     tensor_pairs)
from vertexrank.errors import ParseError, PreconditionError
from vertexrank.fragments import (Graph, basic_fragment, circle, complete_graph,
                                  contract_fragment, glue, open_edge, product)
from vertexrank.model import (VertexModel, eval_h, format_model, format_polynomial, h_phi, p_h,
                              parse_model, parse_polynomial, partition_function,
                              partition_polynomial)
from vertexrank.scalar import I, ONE, ZERO
from vertexrank.tensors import (OrthogonalMap, Tensor, apply_orthogonal, bilinear_form, contract,
                                delta_tensor, tensor_product)

SQUARE = VertexModel.from_spin([(1, 0), (0, 1)], [1, 1])


def test_eval_examples():
    h = example2_model()
    assert eval_h(h, (1, 0)) == ONE
    assert eval_h(h, (0, 1)) == I
    assert eval_h(h, (2, 0)) == ZERO
    assert eval_h(SQUARE, (0, 0)) == 2
    assert eval_h(SQUARE, (1, 1)) == 0


def test_partition_function_examples():
    h = example2_model()
    assert partition_function(h, complete_graph(2)) == 0
    assert partition_function(h, complete_graph(3)) == 0
    assert partition_function(h, circle(1)) == 2
    assert partition_function(h, circle(3)) == 8
    assert partition_function(matching_model(), complete_graph(4)) == 3


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_matching_model_oracle(m):
    g = complete_graph(m)
    want = count_perfect_matchings(m, [e for e in g.edges])
    assert partition_function(matching_model(5), g) == want


def test_h_phi_examples():
    h = example2_model()
    b1 = basic_fragment(1)
    assert h_phi(h, b1, (0,)) == 1
    assert h_phi(h, b1, (1,)) == I
    e2 = open_edge()
    for a, b in itertools.product(range(2), repeat=2):
        assert h_phi(h, e2, (a, b)) == (1 if a == b else 0)


@given(models(), st.integers(1, 4))
def test_h_phi_on_basic_fragment(h, k):
    f = basic_fragment(k)
    for phi in itertools.product(range(h.n), repeat=k):
        alpha = [0] * h.n
        for c in phi:
            alpha[c] += 1
        assert h_phi(h, f, phi) == h.eval(tuple(alpha))


def test_p_h_examples():
    h = example2_model()
    assert p_h(h, open_edge()) == delta_tensor(2)
    assert p_h(h, basic_fragment(1)) == Tensor.vector([1, I])
    assert p_h(SQUARE, basic_fragment(1)) == Tensor.vector([1, 1])
    assert p_h(h, circle(1)).value() == 2


def test_partition_polynomial_examples():
    assert format_polynomial(partition_polynomial(Graph(1, [(0, 0)]), 2)) == "1*y[2,0] + 1*y[0,2]"
    assert format_polynomial(partition_polynomial(complete_graph(2), 2)) == "1*y[1,0]^2 + 1*y[0,1]^2"
    assert format_polynomial(partition_polynomial(Graph(1), 2)) == "1*y[0,0]"
    assert format_polynomial(partition_polynomial(circle(2), 3)) == "9"


@given(models(), fragments(k=0, max_vertices=3, extra_edges=4))
def test_partition_function_oracle(h, g):
    assert pair(partition_function(h, g)) == brute_partition_function(h, g)


@given(models(), fragments(max_k=3))
def test_p_h_oracle(h, f):
    assert tensor_pairs(p_h(h, f)) == brute_p_h(h, f)


@given(st.data())
def test_contraction_commutes(data):
    h = data.draw(models())
    f = data.draw(fragments(k=data.draw(st.integers(2, 5))))
    i, j = sorted(data.draw(st.lists(st.integers(1, f.k), min_size=2, max_size=2, unique=True)))
    assert p_h(h, contract_fragment(f, i, j)) == contract(p_h(h, f), i, j)


@given(st.data())
def test_gluing_identity(data):
    h = data.draw(models())
    k = data.draw(st.integers(0, 4))
    f, g = data.draw(fragments(k=k)), data.draw(fragments(k=k))
    assert partition_function(h, glue(f, g)) == bilinear_form(p_h(h, f), p_h(h, g))


@given(models(), fragments(max_k=2), fragments(max_k=2))
def test_multiplicative(h, f, g):
    assert p_h(h, product(f, g)) == tensor_product(p_h(h, f), p_h(h, g))


@given(st.data())
def test_equivariance_signed_permutations(data):
    h = data.draw(models())
    perm = data.draw(st.permutations(range(h.n)))
    signs = data.draw(st.lists(st.sampled_from([1, -1]), min_size=h.n, max_size=h.n))
    g = OrthogonalMap.signed_permutation(perm, signs)
    f = data.draw(fragments(max_k=3))
    assert apply_orthogonal(g, p_h(h, f)) == p_h(h.act(g), f)


@given(models(), fragments(max_k=3), st.integers(1, 3))
def test_circle_scaling(h, f, c):
    assert p_h(h, f.with_circles(c)) == p_h(h, f) * (h.n ** c)


@given(models(), fragments(k=0, max_vertices=3, extra_edges=4))
def test_polynomial_consistency(h, g):
    poly = partition_polynomial(g, h.n)
    assert poly.evaluate(h) == partition_function(h, g)
    assert parse_polynomial(format_polynomial(poly), h.n) == poly


@given(models())
def test_model_round_trip(h):
    assert parse_model(format_model(h)) == h


def test_spin_round_trip_and_truncate():
    h = VertexModel.from_spin([(1, I), (0, 2)], [3, -1], degree_bound=2)
    assert parse_model(format_model(h)) == h
    t = h.truncate(2)
    assert t.spin is None and t.degree_bound == 2
    assert t.eval((1, 1)) == 3 * I + 0


def test_model_parse_errors():
    with pytest.raises(ParseError, match="line 2"):
        parse_model("model n=2\nterm 1 : 1\n")
    with pytest.raises(ParseError, match="line 3"):
        parse_model("model n=1\nterm 1 : 1\nterm 1 : 2\n")
    with pytest.raises(ParseError):
        parse_model("spin n=2\npoint 1 : 1 0\npoint 2 : 1 0\n")


def test_degree_bound_checked():
    with pytest.raises(PreconditionError):
        VertexModel(2, {(2, 1): 1}, 2)
