import numpy as np
import pytest

from conftest import data_path
from file_formats import (
    LoadedAlgebra, format_based_algebra, format_module, load_algebra, load_module, load_module_dir,
    parse_algebra, parse_based_algebra, parse_module, parse_relation, write_based_algebra, write_module,
)
from modcat import indecomposable_isomorphism, projective, simple
from tilting import endo_algebra
from utils import AlgebraError, InputError


def test_parse_relation():
    assert parse_relation("a*b").terms == [(1, ("a", "b"))]
    assert parse_relation("a*b - c*d").terms == [(1, ("a", "b")), (-1, ("c", "d"))]
    assert parse_relation("2*a*b + 3*c").terms == [(2, ("a", "b")), (3, ("c",))]
    with pytest.raises(InputError):
        parse_relation("")


def test_parse_algebra_dimensions():
    qa = parse_algebra("field 7\nvertices 3\narrow a 1 2\narrow b 2 3\nrelation a*b  # rad^2\n")
    A = qa.to_based()
    assert A.field.p == 7
    assert A.dim == 5
    assert A.num_vertices == 3


def test_field_line_wins_over_default_prime():
    qa = parse_algebra("field 5\nvertices 1\n", prime=11)
    assert qa.to_based().field.p == 5
    qa = parse_algebra("vertices 1\n", prime=11)
    assert qa.to_based().field.p == 11


def test_bundled_algebras(a2, a3rad2, a4rad2, kx2, semisimple2):
    assert [x.based.dim for x in (a2, a3rad2, a4rad2, kx2, semisimple2)] == [3, 5, 7, 2, 2]
    assert a3rad2.field.p == 101


@pytest.mark.parametrize("text, fragment", [
    ("vertices 2\narrow a 1\n", ":2:"),
    ("vertices x\n", ":1:"),
    ("field 8\nvertices 1\n", ":1:"),
    ("vertices 1\nloop x\n", ":2:"),
    ("arrow a 1 2\n", "vertices"),
])
def test_parse_algebra_errors(text, fragment):
    with pytest.raises(InputError) as info:
        parse_algebra(text, source="bad.alg")
    assert fragment in str(info.value)


def test_based_algebra_text_round_trip(a3rad2_ct):
    Gamma = endo_algebra(a3rad2_ct).algebra
    B = parse_based_algebra(format_based_algebra(Gamma))
    assert B.labels == Gamma.labels
    assert np.array_equal(B.structure, Gamma.structure)
    assert np.array_equal(B.idempotents, Gamma.idempotents)


def test_write_and_load_based_algebra(a3rad2_ct, tmp_path):
    Gamma = endo_algebra(a3rad2_ct).algebra
    path = str(tmp_path / "out" / "gamma.balg")
    write_based_algebra(Gamma, path)
    loaded = load_algebra(path)
    assert loaded.quiver_algebra is None
    assert loaded.based.dim == 7


def test_parse_based_algebra_errors():
    with pytest.raises(InputError):
        parse_based_algebra("field 7\nidem e1\n")
    with pytest.raises(InputError):
        parse_based_algebra("basis e1 e1\nidem e1\n")
    with pytest.raises(InputError) as info:
        parse_based_algebra("basis e1\nidem e1\nmult e1 e2 = [1]\n", source="g.balg")
    assert "g.balg:3:" in str(info.value)
    with pytest.raises(InputError):
        parse_based_algebra("basis e1\nidem e1\nmult e1 e1 = [1, 0]\n")


def test_load_module_with_algebra_reference():
    M = load_module(data_path("a2_s1.mod"))
    assert M.dims == (1, 0)
    assert M.name == "a2_s1"


def test_module_files_match_standard_modules(a2):
    A = a2.based
    assert indecomposable_isomorphism(load_module(data_path("a2_s1.mod"), a2), simple(A, 0)) is not None
    assert indecomposable_isomorphism(load_module(data_path("a2_s2.mod"), a2), simple(A, 1)) is not None
    assert indecomposable_isomorphism(load_module(data_path("a2_p1.mod"), a2), projective(A, 0)) is not None


def test_module_text_round_trip(a3rad2):
    M = projective(a3rad2.based, 0)
    N = parse_module(format_module(M), a3rad2, name="P1")
    assert np.array_equal(N.action, M.action)


def test_write_module(a3rad2, tmp_path):
    M = simple(a3rad2.based, 2)
    path = str(tmp_path / "s3.mod")
    write_module(M, path, algebra_path=data_path("a3rad2.alg"))
    N = load_module(path)
    assert N.dims == (0, 0, 1)


def test_parse_module_errors(a2):
    with pytest.raises(InputError):
        parse_module("map a = [[1]]\n", a2)
    with pytest.raises(InputError):
        parse_module("dims 1 1 1\n", a2)
    with pytest.raises(InputError) as info:
        parse_module("dims 1 1\nmap a = [[1, 0]]\n", a2, source="m.mod")
    assert "m.mod:2:" in str(info.value)
    with pytest.raises(InputError):
        parse_module("dims 1 1\nmap z = [[1]]\n", a2)
    based_only = LoadedAlgebra(a2.based, None, "")
    with pytest.raises(InputError):
        parse_module("dims 1 1\nmap a = [[1]]\n", based_only)


def test_module_violating_relation(a3rad2):
    with pytest.raises(AlgebraError):
        parse_module("dims 1 1 1\nmap a = [[1]]\nmap b = [[1]]\n", a3rad2)


def test_load_module_dir(a3rad2_indecomposables):
    assert [M.name for M in a3rad2_indecomposables] == ["p1", "p2", "s1", "s2", "s3"]
    assert sum(M.dim for M in a3rad2_indecomposables) == 7


def test_missing_files(a2, tmp_path):
    with pytest.raises(InputError):
        load_algebra(str(tmp_path / "nope.alg"))
    with pytest.raises(InputError):
        load_module_dir(str(tmp_path), a2)
