import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from normalsurf import census
from normalsurf.homology import (NotClosed, NotOrientable, boundary_matrices, homology,
                                 is_homology_sphere, is_smith_normal_form, matmul,
                                 smith_normal_form)
from normalsurf.triangulation import disjoint_union

THREE_D = [n for n in census.names() if n != "tetra_boundary"]


def check_witness(A, snf):
    """left * A * right == D exactly, both sides unimodular."""
    D = snf.matrix()
    assert matmul(matmul(snf.left, A), snf.right) == D
    assert abs(Matrix(snf.left).det()) == 1
    assert abs(Matrix(snf.right).det()) == 1
    assert is_smith_normal_form(D)


def sympy_factors(A):
    if not A or not A[0]:
        return []
    return sorted(abs(int(d)) for d in invariant_factors(Matrix(A), domain=ZZ) if d)


@pytest.mark.parametrize("A,D", [
    ([[2]], [[2]]),
    ([[1, 0], [0, 0]], [[1, 0], [0, 0]]),
    ([[2, 4], [6, 8]], [[2, 0], [0, 4]]),
])
def test_small_examples(A, D):
    snf = smith_normal_form(A)
    assert snf.matrix() == D
    check_witness(A, snf)


matrices = st.integers(1, 5).flatmap(lambda m: st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n),
                       min_size=m, max_size=m)))


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_random_matrices_against_sympy(A):
    snf = smith_normal_form(A)
    check_witness(A, snf)
    assert sorted(d for d in snf.diagonal if d) == sympy_factors(A)


@pytest.mark.parametrize("name", THREE_D)
def test_boundary_maps(name):
    T = census.get(name)
    d1, d2, d3 = boundary_matrices(T)
    # d d = 0
    assert not any(any(r) for r in matmul(d1, d2))
    assert not any(any(r) for r in matmul(d2, d3))
    for d in (d1, d2, d3):
        snf = smith_normal_form(d)
        check_witness(d, snf)
        assert sorted(x for x in snf.diagonal if x) == sympy_factors(d)


EXPECTED = {
    "s3_boundary4simplex": ((1, 0, 0, 1), ((), (), (), ())),
    "s3_one_tet": ((1, 0, 0, 1), ((), (), (), ())),
    "s3_two_tet": ((1, 0, 0, 1), ((), (), (), ())),
    "lens_3_1": ((1, 0, 0, 1), ((), (3,), (), ())),
    "lens_4_1": ((1, 0, 0, 1), ((), (4,), (), ())),
    "rp3_rp3": ((1, 0, 0, 1), ((), (2, 2), (), ())),
    "s2xs1": ((1, 1, 1, 1), ((), (), (), ())),
    "s2_twisted_s1": ((1, 1, 0, 0), ((), (), (2,), ())),
}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_known_homology(name):
    H = homology(census.get(name))
    assert (H.ranks, H.torsion) == EXPECTED[name]


@pytest.mark.parametrize("name", census.closed_manifolds())
def test_euler_characteristic_and_relabelling(name):
    T = census.get(name)
    H = homology(T)
    assert H.euler_characteristic() == 0
    U = T.relabel(list(reversed(range(T.size))))
    assert homology(U) == H


def test_homology_sphere_gate():
    assert is_homology_sphere(census.get("s3_boundary4simplex"))
    assert not is_homology_sphere(census.get("lens_3_1"))
    s2xs1 = homology(census.get("s2xs1"))
    assert not is_homology_sphere(census.get("s2xs1"))
    assert s2xs1.describe(1) == "Z"
    with pytest.raises(NotOrientable):
        is_homology_sphere(census.get("s2_twisted_s1"))
    with pytest.raises(NotClosed):
        homology(census.get("one_tet_open"))
    H = homology(census.get("one_tet_open"), allow_boundary=True)
    assert H.ranks == (1, 0, 0, 0)


def test_disconnected():
    T = census.get("s3_boundary4simplex")
    H = homology(disjoint_union(T, T))
    assert H.group(0) == (2, [])
    assert H.group(3) == (2, [])
