import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import example2_model, models, random_model
from vertexrank.connection import (RankReport, build_matrix, format_matrix, rank_direct,
                                   rank_via_gram, saturating_rank)
from vertexrank.errors import InvariantError, PreconditionError
from vertexrank.fragments import basic_fragment, enumerate_fragments, glue, open_edge
from vertexrank.invariants import brauer_invariant_dim
from vertexrank.linalg import kernel
from vertexrank.model import VertexModel, p_h, partition_function
from vertexrank.scalar import ZERO
from vertexrank.tensors import bilinear_form

SQUARE = VertexModel.from_spin([(1, 0), (0, 1)], [1, 1])


def test_build_matrix_examples():
    assert build_matrix(example2_model(), [basic_fragment(1)]).entries == ((0,),)
    assert build_matrix(SQUARE, [open_edge()]).entries == ((2,),)
    zero = VertexModel.zero(2, 3)
    fs = enumerate_fragments(2, 1, 3)
    m = build_matrix(zero, fs)
    for a, f in enumerate(fs):
        if f.n_vertices:
            assert all(x == 0 for x in m.entries[a])
    with pytest.raises(PreconditionError):
        build_matrix(zero, [basic_fragment(1), open_edge()])


def test_rank_examples():
    assert rank_direct([[ZERO]]) == 0
    assert rank_direct([[4, 2, 2], [2, 4, 2], [2, 2, 4]]) == 3
    assert rank_direct([[2]]) == 1
    assert rank_via_gram(example2_model(), [basic_fragment(1)]) == 0
    assert rank_via_gram(SQUARE, [basic_fragment(1)]) == 1
    assert rank_via_gram(VertexModel.zero(2), enumerate_fragments(4, 0, 0)) == 3


def test_saturating_examples():
    h = example2_model()
    r = saturating_rank(h, 1, 3, target=0)
    assert (r.rank, r.certified, r.certificate) == (0, True, "hit_invariant_dim")
    r = saturating_rank(h, 2, 3, target=1)
    assert (r.rank, r.certified) == (1, True)
    r = saturating_rank(SQUARE, 2, 3, target=2, max_degree=2)
    assert (r.rank, r.certified) == (2, True)
    assert r.line() == "rank=2 certified=true certificate=hit_invariant_dim fragments=18"


def test_uncertified_without_target():
    r = saturating_rank(example2_model(), 1, 2)
    assert (r.rank, r.certified, r.certificate) == (0, False, "none")


def test_ambient_bound_certificate():
    h = VertexModel.from_spin([(1, 0), (0, 1)], [1, 2])
    r = saturating_rank(h, 1, 3, max_degree=2)
    assert (r.rank, r.certificate) == (2, "hit_ambient_bound")


def test_target_below_rank_is_invariant_breach():
    # the first nonempty k=3 class already has rank 4, past the claimed bound
    with pytest.raises(InvariantError):
        saturating_rank(SQUARE, 3, 3, target=2, max_degree=2)


def test_report_validation():
    with pytest.raises(InvariantError):
        RankReport(1, 0, True, 0, "none")


def test_degree_above_support_rejected():
    with pytest.raises(PreconditionError):
        saturating_rank(example2_model(degree=2), 2, 2, max_degree=3)


@settings(max_examples=25)
@given(models(max_n=2), st.integers(0, 3))
def test_two_routes_agree(h, k):
    fs = enumerate_fragments(k, 1, h.degree_bound)
    m = build_matrix(h, fs)
    assert m.is_symmetric()
    assert rank_direct(m) == rank_via_gram(h, fs)
    ts = [p_h(h, f) for f in fs]
    for a in range(len(fs)):
        for b in range(len(fs)):
            assert m.entries[a][b] == bilinear_form(ts[a], ts[b])


@settings(max_examples=15)
@given(models(max_n=2), st.integers(1, 2))
def test_kernel_is_ideal_slice(h, k):
    fs = enumerate_fragments(k, 1, h.degree_bound)
    m = build_matrix(h, fs)
    for c in kernel([list(r) for r in m.entries], len(fs)):
        for other in fs:
            total = ZERO
            for coef, f in zip(c, fs):
                if coef:
                    total = total + coef * partition_function(h, glue(f, other))
            assert total == 0


@settings(max_examples=15)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 3))
def test_budget_monotone(seed, k):
    h = random_model(random.Random(seed), 2, 3)
    ranks = [saturating_rank(h, k, b, patience=None).rank for b in range(3)]
    assert ranks == sorted(ranks)


@settings(max_examples=10)
@given(models(max_n=2), st.integers(1, 2))
def test_circle_rows_proportional(h, k):
    fs = enumerate_fragments(k, 1, h.degree_bound)[:4]
    with_c = [f.with_circles(1) for f in fs]
    a = build_matrix(h, fs + with_c)
    half = len(fs)
    for r in range(half):
        assert [x * h.n for x in a.entries[r]] == list(a.entries[half + r])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_zero_model_reduces_to_brauer(n):
    for k in range(1, 5):
        r = saturating_rank(VertexModel.zero(n), k, 1, target=brauer_invariant_dim(n, k))
        assert r.certified


def test_format_matrix():
    m = build_matrix(SQUARE, [open_edge(), open_edge()])
    assert format_matrix(m) == "2\t2\n2\t2\n"
