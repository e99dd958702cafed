import numpy as np
import pytest

from algebra import (
    Arrow, Quiver, Relation, build_quiver_algebra, corner, is_ideal, normalize_subset, opposite,
    quotient_algebra, trace_ideal,
)
from file_formats import parse_algebra
from linalg import PrimeField
from utils import AlgebraError


def test_path_bases(a2, a3rad2, a4rad2, kx2, semisimple2):
    assert a2.based.dim == 3
    assert a2.based.labels == ["e1", "e2", "a"]
    assert a3rad2.based.dim == 5
    assert a3rad2.based.labels == ["e1", "e2", "e3", "a", "b"]
    assert a4rad2.based.dim == 7
    assert kx2.based.dim == 2
    assert semisimple2.based.dim == 2


def test_product_follows_walk_order(a2):
    A = a2.based
    e1, e2, a = (A.unit(k) for k in range(3))
    assert A.multiply(a, e1).tolist() == a.tolist()
    assert A.multiply(e2, a).tolist() == a.tolist()
    assert not np.any(A.multiply(e1, a))
    assert not np.any(A.multiply(a, a))


def test_relation_reduces_paths():
    qa = parse_algebra("vertices 1\narrow x 1 1\nrelation x*x*x", prime=5)
    assert qa.dim == 3
    assert qa.labels == ["e1", "x", "x*x"]
    assert qa.vanishing_length == 3


def test_commutativity_relation():
    text = """
    vertices 4
    arrow a 1 2
    arrow b 2 4
    arrow c 1 3
    arrow d 3 4
    relation a*b - c*d
    """
    qa = parse_algebra(text)
    # 4 个平凡路径 + 4 条箭头 + 1 条长度为 2 的路径
    assert qa.dim == 9
    A = qa.to_based()
    ab = A.multiply(A.unit(qa.arrow_index("b")), A.unit(qa.arrow_index("a")))
    cd = A.multiply(A.unit(qa.arrow_index("d")), A.unit(qa.arrow_index("c")))
    assert np.any(ab)
    assert ab.tolist() == cd.tolist()


def test_relation_with_mixed_lengths():
    text = """
    vertices 4
    arrow a 1 2
    arrow b 2 3
    arrow c 1 4
    arrow d 4 4
    arrow e 4 3
    relation a*b - c*d*e
    relation d*d
    """
    qa = parse_algebra(text)
    # 4 个平凡路径 + 5 条箭头 + ab, cd, ce, de；cde 约化为 ab，含 dd 的路径为零
    assert qa.dim == 13
    assert "c*d*e" not in qa.labels
    assert qa.vanishing_length == 4
    A = qa.to_based()
    a, b, c, d, e = (A.unit(qa.arrow_index(x)) for x in "abcde")
    ab = A.multiply(b, a)
    cde = A.multiply(e, A.multiply(d, c))
    assert np.any(ab)
    assert cde.tolist() == ab.tolist()
    assert not np.any(A.multiply(d, d))


def test_mixed_length_relation_with_unit_factor():
    # x² = x³ 意味着 x²(1 - x) = 0，而 1 - x 可逆
    qa = parse_algebra("vertices 1\narrow x 1 1\nrelation x*x - x*x*x", prime=7)
    assert qa.dim == 2
    assert qa.labels == ["e1", "x"]


def test_non_admissible_ideal_raises():
    quiver = Quiver(1, [Arrow("x", 0, 0)])
    with pytest.raises(AlgebraError, match="bound"):
        build_quiver_algebra(quiver, [], PrimeField(101), bound=4)


def test_relation_must_compose():
    quiver = Quiver(2, [Arrow("a", 0, 1)])
    with pytest.raises(AlgebraError):
        build_quiver_algebra(quiver, [Relation([(1, ("a", "a"))])])


def test_quiver_rejects_bad_arrows():
    with pytest.raises(AlgebraError):
        Quiver(2, [Arrow("a", 0, 2)])
    with pytest.raises(AlgebraError):
        Quiver(2, [Arrow("a", 0, 1), Arrow("a", 1, 0)])


def test_structure_checks(a3rad2):
    A = a3rad2.based
    assert A.check_associativity()
    assert A.check_idempotents()
    assert A.one().tolist() == [1, 1, 1, 0, 0]


def test_opposite_is_involution(a3rad2):
    A = a3rad2.based
    assert opposite(opposite(A)) == A
    assert opposite(A) != A


def test_radical_and_generators(a2, kx2):
    assert a2.based.radical().shape == (3, 1)
    assert kx2.based.radical().shape == (2, 1)
    assert a2.based.generators().shape == (3, 3)


def test_corner_algebras(a3rad2):
    A = a3rad2.based
    C, E = corner(A, [0, 1])
    assert C.dim == 3
    assert C.num_vertices == 2
    assert E.shape == (5, 3)
    C2, _ = corner(A, [1, 2])
    assert C2.dim == 3
    assert sorted(C2.labels) == ["b", "e2", "e3"]


def test_trace_ideal_and_quotient(a2):
    A = a2.based
    I = trace_ideal(A, [1])
    assert I.shape[1] == 2
    assert is_ideal(A, I)
    Q, proj = quotient_algebra(A, I)
    assert Q.dim == 1
    assert proj.shape == (1, 3)
    assert trace_ideal(A, []).shape == (3, 0)


def test_quotient_rejects_non_ideal(a2):
    A = a2.based
    not_ideal = A.unit(0).reshape(-1, 1)
    assert not is_ideal(A, not_ideal)
    with pytest.raises(AlgebraError):
        quotient_algebra(A, not_ideal)


def test_normalize_subset(a2):
    assert normalize_subset(a2.based, [1, 0, 1]) == [0, 1]
    with pytest.raises(AlgebraError):
        normalize_subset(a2.based, [])
    with pytest.raises(AlgebraError):
        normalize_subset(a2.based, [2])


def test_blocks_partition_the_basis(a2, a3rad2, a4rad2, kx2):
    for alg in (a2, a3rad2, a4rad2, kx2):
        A = alg.based
        n = A.num_vertices
        assert sum(A.block(i, j).shape[1] for i in range(n) for j in range(n)) == A.dim


@pytest.mark.parametrize("subset", [[0], [1], [2], [0, 2]])
def test_trace_ideal_is_idempotent(a3rad2, subset):
    A = a3rad2.based
    F = A.field
    I = trace_ideal(A, subset)
    products = [A.multiply(x, y).reshape(-1, 1) for x in I.T for y in I.T]
    square = np.hstack(products) if products else F.zeros(A.dim, 0)
    assert F.rank(square) == F.rank(I)
    assert F.rank(np.hstack([I, square])) == F.rank(I)
