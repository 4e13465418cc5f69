import pytest
from hypothesis import given, strategies as st

from conftest import scalars
from oracles import complex_rank
from vertexrank.errors import PreconditionError
from vertexrank.linalg import (SpanBasis, identity, inverse, kernel, mat_mul, mat_vec, rank,
                               rref, solve)
from vertexrank.scalar import I, ONE, ZERO, GaussRational


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(scalars | st.just(ZERO), min_size=c, max_size=c),
                               min_size=r, max_size=r)))


def test_known_ranks():
    assert rank([[ZERO]]) == 0
    assert rank([[4, 2, 2], [2, 4, 2], [2, 2, 4]]) == 3
    assert rank([[2]]) == 1
    assert rank([[1, I], [I, -1]]) == 1
    assert rank([]) == 0


def test_big_integers_survive():
    big = 2 ** 200 + 1
    assert rank([[big, 1], [big * 3, 3]]) == 1
    assert rank([[big, 1], [big * 3, 4]]) == 2


@given(matrices())
def test_rank_matches_block_oracle(m):
    assert rank(m) == complex_rank(m)


@given(matrices())
def test_rank_of_transpose(m):
    t = [list(col) for col in zip(*m)]
    assert rank(m) == rank(t)


@given(matrices())
def test_kernel_vectors_are_null(m):
    ks = kernel(m, len(m[0]))
    assert len(ks) == len(m[0]) - rank(m)
    for v in ks:
        assert all(x == 0 for x in mat_vec(m, v))


@given(matrices(4, 4))
def test_rref_pivots_count_rank(m):
    _, pivots = rref(m)
    assert len(pivots) == rank(m)


@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(scalars, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_inverse_or_singular(m):
    n = len(m)
    if rank(m) < n:
        with pytest.raises(PreconditionError):
            inverse(m)
    else:
        assert mat_mul(m, inverse(m)) == identity(n)


def test_solve_inconsistent():
    assert solve([[1, 1], [1, 1]], [1, 2]) is None
    x = solve([[1, 1], [1, -1]], [2, 0])
    assert x == [ONE, ONE]


@given(st.lists(st.dictionaries(st.integers(0, 4), scalars.filter(bool), max_size=4), max_size=6))
def test_span_basis_tracks_rank(vecs):
    b = SpanBasis()
    for v in vecs:
        b.add(v)
    dense = [[v.get(c, ZERO) for c in range(5)] for v in vecs]
    assert len(b.vectors) == rank(dense)
    for v in vecs:
        assert b.contains(v)


def test_span_basis_rejects_dependent():
    b = SpanBasis()
    assert b.add({0: ONE, 1: I})
    assert not b.add({0: I, 1: GaussRational(-1)})
    assert b.add({1: ONE})
