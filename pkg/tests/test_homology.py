import pytest

from homology import (
    INJECTIVE, PROJECTIVE, dominant_dimension, dominant_dimension_via_injective, ext_dim,
    global_dimension, injective_envelope, min_resolution, pk_membership, projective_cover,
    projective_dimension, sweep_apt_equivalence, verify_apt_equivalence, verify_ext_iso,
)
from modcat import (
    cogenerator, direct_sum, indecomposable_isomorphism, projective, regular, simple,
)
from utils import TruncationError


def test_projective_cover_of_simple(a2, kx2):
    A = a2.based
    cover = projective_cover(simple(A, 0))
    assert cover.source.dims == (1, 1)
    assert cover.is_homomorphism()
    S = simple(kx2.based, 0)
    assert projective_cover(S).source.dim == 2


def test_injective_envelope_of_simple(a2):
    A = a2.based
    env = injective_envelope(simple(A, 1))
    assert env.target.dims == (1, 1)
    assert env.is_homomorphism()


def test_projective_resolution_of_s1(a2):
    res = min_resolution(simple(a2.based, 0), PROJECTIVE)
    assert res.term_dims() == [2, 1]
    assert res.length == 1
    assert not res.truncated
    assert res.multiplicities == [[1, 0], [0, 1]]


def test_projective_module_has_length_zero(a3rad2):
    res = min_resolution(projective(a3rad2.based, 0))
    assert res.length == 0


def test_injective_resolution_of_s2(a2):
    res = min_resolution(simple(a2.based, 1), INJECTIVE)
    assert res.term_dims() == [2, 1]
    assert res.direction == INJECTIVE


def test_periodic_resolution_is_truncated(kx2):
    S = simple(kx2.based, 0)
    res = min_resolution(S, cutoff=10)
    assert res.truncated
    assert all(dim == 2 for dim in res.term_dims())
    assert all(omega.dim == 1 for omega in res.syzygies[1:])


def test_ext_dimensions(a2, a3rad2):
    A = a2.based
    S1, S2 = simple(A, 0), simple(A, 1)
    assert ext_dim(1, S1, S2) == 1
    assert ext_dim(1, S2, S1) == 0
    assert ext_dim(0, projective(A, 0), S1) == 1
    B = a3rad2.based
    assert ext_dim(1, simple(B, 1), simple(B, 2)) == 1
    assert ext_dim(1, simple(B, 0), projective(B, 1)) == 0
    assert ext_dim(2, simple(B, 0), simple(B, 2)) == 1


def test_ext_raises_on_truncated_resolution(kx2):
    S = simple(kx2.based, 0)
    res = min_resolution(S, cutoff=1)
    assert ext_dim(1, S, S, resolution=res) == 1
    with pytest.raises(TruncationError):
        ext_dim(3, S, S, resolution=res)


def test_global_dimension(a2, a3rad2, a4rad2, kx2, semisimple2):
    assert str(global_dimension(semisimple2.based)) == "= 0"
    assert str(global_dimension(a2.based)) == "= 1"
    assert str(global_dimension(a3rad2.based)) == "= 2"
    assert str(global_dimension(a4rad2.based)) == "= 3"
    result = global_dimension(kx2.based, cutoff=10)
    assert not result.is_exact
    assert str(result) == ">= 10"


def test_projective_dimension(a2):
    assert projective_dimension(simple(a2.based, 0)).value == 1
    assert projective_dimension(simple(a2.based, 1)).value == 0


def test_dominant_dimension(a2, a3rad2, kx2):
    assert str(dominant_dimension(a2.based)) == "= 1"
    assert str(dominant_dimension(a3rad2.based)) == "= 2"
    assert str(dominant_dimension(kx2.based, cutoff=10)) == ">= 10"


@pytest.mark.parametrize("name", ["a2", "a3rad2", "a4rad2", "kx2", "semisimple2"])
def test_dominant_dimension_characterisations_agree(name, request):
    A = request.getfixturevalue(name).based
    via_dual = dominant_dimension(A, cutoff=8)
    via_injective = dominant_dimension_via_injective(A, cutoff=8)
    assert (via_dual.kind, via_dual.value) == (via_injective.kind, via_injective.value)


def test_pk_membership(a2, a3rad2):
    A = a2.based
    S1 = simple(A, 0)
    assert pk_membership(A, [0], S1, 0)
    assert not pk_membership(A, [0], S1, 1)
    B = a3rad2.based
    DB = cogenerator(B)
    assert pk_membership(B, [0, 1], DB, 1)
    assert not pk_membership(B, [0, 1], DB, 2)


def test_dimension_shift(a3rad2):
    B = a3rad2.based
    S1, S3 = simple(B, 0), simple(B, 2)
    res = min_resolution(S1)
    omega = res.syzygies[1]
    assert ext_dim(2, S1, S3) == ext_dim(1, omega, S3)


def test_apt_examples(a2):
    A = a2.based
    S1 = simple(A, 0)
    report = verify_apt_equivalence(A, [0], S1, 2)
    assert not report.projective_condition
    assert not report.ext_condition
    assert report.agree
    report = verify_apt_equivalence(A, [0], S1, 1)
    assert report.projective_condition and report.ext_condition
    P1 = projective(A, 0)
    assert verify_apt_equivalence(A, [0], P1, 3).agree


@pytest.mark.parametrize("name", ["a2", "a3rad2"])
def test_apt_sweep_has_no_disagreements(name, request):
    A = request.getfixturevalue(name).based
    reports = sweep_apt_equivalence(A, (1, 2, 3))
    k = A.num_vertices
    assert len(reports) == (2 ** k - 1) * k * 3
    assert [r for r in reports if not r.agree] == []


def test_ext_iso_for_projective_injective_part(a3rad2):
    G = a3rad2.based
    e = [0, 1]
    X = direct_sum([projective(G, v) for v in e], G)[0]
    for v in range(3):
        report = verify_ext_iso(G, e, X, simple(G, v), 2)
        assert report.outcome == "pass"
        assert [row[0] for row in report.rows] == [0, 1]


def test_ext_iso_for_dual_module(a3rad2):
    G = a3rad2.based
    DG = cogenerator(G)
    for v in range(3):
        report = verify_ext_iso(G, [0, 1], DG, simple(G, v), 1)
        assert report.passed
    assert verify_ext_iso(G, [0, 1], DG, simple(G, 0), 2).outcome == "hypothesis not met"


def test_ext_iso_hypothesis_for_regular_module(a3rad2):
    G = a3rad2.based
    report = verify_ext_iso(G, [0, 1], regular(G), simple(G, 0), 2)
    assert report.outcome == "hypothesis not met"
    assert report.passed is None


def test_ext_iso_with_full_idempotent(a2):
    A = a2.based
    S1, S2 = simple(A, 0), simple(A, 1)
    report = verify_ext_iso(A, [0, 1], S1, S2, 2)
    assert report.rows == [(0, 0, 0), (1, 1, 1)]


def test_resolution_terms_are_projective(a3rad2):
    B = a3rad2.based
    res = min_resolution(simple(B, 0))
    expected = [projective(B, 0), projective(B, 1), projective(B, 2)]
    for term, P in zip(res.terms, expected):
        assert indecomposable_isomorphism(term, P) is not None
