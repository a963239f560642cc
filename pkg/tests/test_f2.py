import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from c2max.f2 import F2Matrix, Echelon, kernel_basis, rank, rref, solve_all
from oracles import apply_dense, naive_rank


def dense_matrices(max_rows=12, max_cols=12):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(0, 1), min_size=c, max_size=c), min_size=r, max_size=r)))


@given(dense_matrices())
def test_rank_matches_naive(rows):
    assert rank(F2Matrix.from_dense(np.array(rows))) == naive_rank(rows)


@given(dense_matrices())
def test_kernel_is_kernel_of_right_size(rows):
    m = F2Matrix.from_dense(np.array(rows))
    ker = kernel_basis(m)
    assert len(ker) == m.ncols - naive_rank(rows)
    for v in ker:
        assert m.apply(v) == 0
    if ker:
        assert naive_rank([[(v >> j) & 1 for j in range(m.ncols)] for v in ker]) == len(ker)


@st.composite
def compatible_pair(draw):
    r, k, c = (draw(st.integers(1, 8)) for _ in range(3))
    bit = st.integers(0, 1)
    a = draw(st.lists(st.lists(bit, min_size=k, max_size=k), min_size=r, max_size=r))
    b = draw(st.lists(st.lists(bit, min_size=c, max_size=c), min_size=k, max_size=k))
    return np.array(a), np.array(b)


@given(compatible_pair())
def test_product_matches_dense(pair):
    a, b = pair
    got = (F2Matrix.from_dense(a) @ F2Matrix.from_dense(b)).to_dense()
    assert np.array_equal(got, (a @ b) % 2)


@given(dense_matrices())
def test_rref_pivots_are_leftmost(rows):
    reduced, pivots = rref(F2Matrix.from_dense(np.array(rows)).rows, len(rows[0]))
    assert pivots == sorted(pivots)
    for r, p in zip(reduced, pivots):
        assert r & ((1 << p) - 1) == 0
        assert sum(((x >> p) & 1) for x in reduced) == 1


@settings(max_examples=60)
@given(dense_matrices(10, 10), st.data())
def test_solve_all_consistent_systems(rows, data):
    m = F2Matrix.from_dense(np.array(rows))
    x = data.draw(st.lists(st.integers(0, 1), min_size=m.ncols, max_size=m.ncols))
    b = apply_dense(rows, x)
    sol = solve_all(m, F2Matrix.from_dense(np.array(b).reshape(-1, 1)))
    assert sol is not None
    got = [sol.rows[j] & 1 for j in range(m.ncols)]
    assert apply_dense(rows, got) == b


def test_solve_all_inconsistent():
    m = F2Matrix.from_dense(np.array([[1, 1], [1, 1]]))
    assert solve_all(m, F2Matrix.from_dense(np.array([[1], [0]]))) is None
    with pytest.raises(ValueError):
        solve_all(m, F2Matrix.from_dense(np.array([[1]])))


def test_echelon_membership():
    e = Echelon()
    e.add(0b011)
    e.add(0b110)
    assert e.contains(0b101)
    assert not e.contains(0b001)


def test_identity_and_transpose():
    i = F2Matrix.identity(5)
    assert i.is_identity() and (i + i).is_zero()
    m = F2Matrix.from_dense(np.array([[1, 0, 1], [0, 1, 1]]))
    assert m.transpose().transpose() == m
    assert m.transpose().shape == (3, 2)


@given(dense_matrices(), st.randoms(use_true_random=False))
def test_rank_invariant_under_row_permutation(rows, rnd):
    shuffled = list(rows)
    rnd.shuffle(shuffled)
    assert rank(F2Matrix.from_dense(np.array(rows))) == rank(F2Matrix.from_dense(np.array(shuffled)))


@given(dense_matrices(10, 10), st.data())
def test_solve_all_none_iff_augmented_rank_grows(rows, data):
    b = data.draw(st.lists(st.integers(0, 1), min_size=len(rows), max_size=len(rows)))
    m = F2Matrix.from_dense(np.array(rows))
    aug = [r + [x] for r, x in zip(rows, b)]
    sol = solve_all(m, F2Matrix.from_dense(np.array(b).reshape(-1, 1)))
    assert (sol is None) == (naive_rank(aug) > naive_rank(rows))


def test_swap_examples():
    one_plus_swap = F2Matrix.from_dense(np.array([[1, 1], [1, 1]]))
    assert rank(one_plus_swap) == 1
    assert kernel_basis(one_plus_swap) == [0b11]
    assert len(kernel_basis(F2Matrix.zeros(2, 2))) == 2
    assert kernel_basis(F2Matrix.identity(3)) == []
