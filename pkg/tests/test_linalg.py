import numpy as np
import pytest

from linalg import PrimeField, as_columns, as_rows


@pytest.fixture
def F():
    return PrimeField(7)


def test_field_requires_small_prime():
    with pytest.raises(ValueError):
        PrimeField(4)
    with pytest.raises(ValueError):
        PrimeField(2147483647)
    assert PrimeField(101) == PrimeField(101)
    assert PrimeField(101) != PrimeField(7)


def test_inverse_element(F):
    assert F.inv(3) == 5
    assert F.inv(-1) == 6
    with pytest.raises(ZeroDivisionError):
        F.inv(14)


def test_matrix_is_reduced(F):
    m = F.matrix([[-1, 8], [15, 0]])
    assert m.tolist() == [[6, 1], [1, 0]]


def test_rank_and_kernel(F):
    m = F.matrix([[1, 2], [2, 4]])
    assert F.rank(m) == 1
    k = F.kernel_basis(m)
    assert k.tolist() == [[5, 1]]
    assert not np.any(F.matmul(m, k.T))


def test_kernel_of_empty_row_matrix(F):
    assert F.kernel_basis(F.zeros(0, 3)).tolist() == np.eye(3, dtype=int).tolist()


def test_rref_pivots(F):
    r, pivots = F.rref(F.matrix([[0, 2, 4], [0, 1, 3]]))
    assert pivots == [1, 2]
    assert r.tolist() == [[0, 1, 0], [0, 0, 1]]


def test_solve(F):
    x = F.solve(F.matrix([[1, 1], [0, 1]]), [3, 1])
    assert x.tolist() == [2, 1]
    assert F.solve(F.matrix([[1, 1], [1, 1]]), [1, 2]) is None
    with pytest.raises(ValueError):
        F.solve(F.matrix([[1, 1]]), [1, 2])


def test_solve_matrix_rhs(F):
    m = F.matrix([[2, 0], [0, 3]])
    x = F.solve(m, F.identity(2))
    assert F.matmul(m, x).tolist() == [[1, 0], [0, 1]]


def test_inverse_matrix(F):
    assert F.inverse(F.matrix([[1, 1], [0, 1]])).tolist() == [[1, 6], [0, 1]]
    assert F.inverse(F.matrix([[1, 2], [2, 4]])) is None
    assert not F.is_invertible(F.zeros(2, 3))


def test_column_space_uses_original_columns(F):
    cs = F.column_space(F.matrix([[1, 2], [2, 4]]))
    assert cs.tolist() == [[1], [2]]


def test_extend_columns(F):
    base = F.matrix([[1], [0], [0]])
    candidates = F.matrix([[1, 0, 1], [0, 1, 1], [0, 0, 0]])
    assert F.extend_columns(base, candidates) == [1]


def test_in_column_space(F):
    base = F.matrix([[1], [1]])
    assert F.in_column_space(base, F.matrix([[3], [3]]))
    assert not F.in_column_space(base, F.matrix([[1], [0]]))
    assert F.in_column_space(F.zeros(2, 0), F.zeros(2, 1))


def test_minimal_polynomial(F):
    assert F.matrix_minimal_polynomial(F.matrix([[0, 1], [0, 0]])) == [0, 0, 1]
    assert F.matrix_minimal_polynomial(F.identity(2)) == [6, 1]


def test_factor(F):
    assert F.factor([6, 0, 1]) == [([1, 1], 1), ([6, 1], 1)]
    assert F.factor([0, 0, 1]) == [([0, 1], 2)]
    assert F.factor([3]) == []


def test_evaluate_polynomial(F):
    swap = F.matrix([[0, 1], [1, 0]])
    assert not np.any(F.evaluate([6, 0, 1], swap))
    assert F.matrix_power(swap, 3).tolist() == swap.tolist()


def test_empty_reshapes():
    assert as_columns([], 3).shape == (3, 0)
    assert as_rows([], 4).shape == (0, 4)
    assert as_columns(np.arange(6), 2).shape == (2, 3)


@pytest.fixture
def F101():
    return PrimeField(101)


def test_rref_over_f101(F101):
    r, pivots = F101.rref(F101.matrix([[2, 4], [1, 2]]))
    assert r.tolist() == [[1, 2], [0, 0]]
    assert pivots == [0]


def test_kernel_over_f101(F101):
    assert F101.kernel_basis(F101.matrix([[1, 2]])).tolist() == [[99, 1]]


def test_every_nonzero_element_is_invertible(F101):
    for a in range(1, 101):
        assert a * F101.inv(a) % 101 == 1


@pytest.mark.parametrize("seed", range(20))
def test_random_matrix_rank_and_kernel(F101, seed):
    rng = np.random.default_rng(seed)
    rows, cols = (int(x) for x in rng.integers(1, 7, size=2))
    m = F101.random_matrix(rng, rows, cols)
    if seed % 2:
        # 低秩：最后一行为前两行之和
        m[-1] = np.mod(m[0] + m[min(1, rows - 1)], 101)
    r, pivots = F101.rref(m)
    assert F101.rank(m) == F101.rank(r) == len(pivots)
    k = F101.kernel_basis(m)
    assert k.shape == (cols - len(pivots), cols)
    if k.size:
        assert not np.any(F101.matmul(m, k.T))
