import pytest
from hypothesis import given, settings, strategies as st

from normalsurf import census
from normalsurf.triangulation import (BadEdgeIdentification, FaceGluing, NonInvolutiveGluing,
                                      SelfGluedFace, SurfaceTriangulation, Triangulation,
                                      TriangulationError, build, disjoint_union,
                                      from_gluing_table, perm_compose, perm_inverse)

CLOSED = census.closed_manifolds()
THREE_D = [n for n in census.names() if n != "tetra_boundary"]


def test_single_tetrahedron():
    T = from_gluing_table([[None] * 4])
    assert T.f_vector() == (4, 6, 4, 1)
    assert len(T.boundary_facets()) == 4
    mc = T.is_closed_3_manifold()
    assert not mc and mc.reason == "BoundaryFace"
    link = T.vertex_link(0)
    assert link.size == 1 and len(link.boundary_facets()) == 3


def test_boundary_4_simplex_skeleton():
    T = census.get("s3_boundary4simplex")
    assert T.f_vector() == (5, 10, 10, 5)
    assert T.is_closed_3_manifold()
    assert T.is_orientable()
    for v in range(5):
        L = T.vertex_link(v)
        assert (L.size, L.euler_characteristic(), L.is_connected()) == (4, 2, True)


def test_build_from_one_sided_gluings():
    g = [FaceGluing((0, f), (1, f), (0, 1, 2, 3)) for f in range(4)]
    T = build(2, g)
    assert T == census.get("s3_two_tet")
    # both directions given and consistent is fine as well
    back = [FaceGluing((1, f), (0, f), (0, 1, 2, 3)) for f in range(4)]
    assert build(2, g + back) == T


def test_gluing_errors():
    with pytest.raises(NonInvolutiveGluing):
        from_gluing_table([[(1, (0, 1, 2, 3)), None, None, None],
                           [(0, (1, 0, 2, 3)), None, None, None]])
    with pytest.raises(SelfGluedFace):
        from_gluing_table([[(0, (0, 1, 2, 3)), None, None, None]])
    with pytest.raises(BadEdgeIdentification):
        from_gluing_table([[None, None, (0, (1, 0, 3, 2)), (0, (1, 0, 3, 2))]])
    with pytest.raises(TriangulationError):
        build(1, [FaceGluing((0, 0), (0, 1), (0, 1, 2, 3))])
    with pytest.raises(TriangulationError):
        build(1, [FaceGluing((0, 0), (3, 1), (1, 0, 2, 3))])


def test_manifold_gate():
    assert census.get("torus_cusp_pseudo").is_closed_3_manifold().reason == "BadVertexLink"
    assert census.get("one_tet_open").is_closed_3_manifold().reason == "BoundaryFace"
    for name in CLOSED:
        assert census.get(name).is_closed_3_manifold(), name


def test_orientability():
    assert not census.get("s2_twisted_s1").is_orientable()
    for name in CLOSED:
        if name != "s2_twisted_s1":
            assert census.get(name).is_orientable(), name


@pytest.mark.parametrize("name", CLOSED)
def test_closed_invariants(name):
    T = census.get(name)
    V, E, F, t = T.f_vector()
    assert V - E + F - t == 0
    assert 2 * F == 4 * t
    for v in range(V):
        L = T.vertex_link(v)
        # re-check the link independently of the gate
        assert L.is_closed() and L.is_connected()
        assert L.euler_characteristic() == 2
        assert 2 * L.num_edges() == 3 * L.size


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(THREE_D), st.randoms())
def test_relabelling_preserves_skeleton(name, rnd):
    T = census.get(name)
    order = list(range(T.size))
    rnd.shuffle(order)
    U = T.relabel(order)
    assert U.f_vector() == T.f_vector()
    assert U.is_orientable() == T.is_orientable()
    assert bool(U.is_closed_3_manifold()) == bool(T.is_closed_3_manifold())


def test_disjoint_union():
    T = census.get("s3_boundary4simplex")
    U = disjoint_union(T, T)
    assert U.f_vector() == (10, 20, 20, 10)
    assert len(U.simplex_components()) == 2


@given(st.permutations(range(4)), st.permutations(range(4)))
def test_permutation_helpers(p, q):
    p, q = tuple(p), tuple(q)
    assert perm_compose(p, perm_inverse(p)) == (0, 1, 2, 3)
    assert perm_inverse(perm_compose(p, q)) == perm_compose(perm_inverse(q), perm_inverse(p))


def test_surfaces():
    S = census.get("tetra_boundary")
    assert isinstance(S, SurfaceTriangulation)
    assert S.is_closed() and S.is_sphere() and S.euler_characteristic() == 2
    assert S.num_vertices() == 4 and S.num_edges() == 6
    disk = SurfaceTriangulation(1, [[None] * 3])
    assert disk.is_disk() and not disk.is_closed()


def test_boundary_surface_of_open_tetrahedron():
    B = census.get("one_tet_open").boundary_surface()
    assert B.is_sphere() and B.size == 4


def test_triangulation_is_hashable_value():
    a, b = census.get("lens_3_1"), census.get("lens_3_1")
    assert a == b and hash(a) == hash(b)
    assert a != census.get("s2xs1")
    assert isinstance(a, Triangulation)
