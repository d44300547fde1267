import pytest

from normalsurf import census
from normalsurf.cutting import (CellDecomposition, NotASphere, NotConnectedSurface,
                                boundary_surfaces, cut_along, cut_along_surface,
                                piece_homology, reglue)
from normalsurf.enumeration import find_spheres, hilbert_basis
from normalsurf.homology import homology
from normalsurf.normal_coords import is_vertex_linking, matching_matrix, vertex_linking_vector

B4 = census.get("s3_boundary4simplex")


def spheres_of(T):
    return find_spheres(T, hilbert_basis(matching_matrix(T)).basis)


def check_cut(T, s):
    res = cut_along(T, s)
    eulers = [[b.euler_characteristic() for b in res.boundary_surfaces(i)]
              for i in range(len(res.components))]
    # two copies of the sphere appear on the boundary
    assert sorted(sum(eulers, [])) == [2, 2]
    for piece in res.components:
        assert piece.local_manifold_check()
        assert all(b.is_sphere() for b in boundary_surfaces(piece))
    back = reglue(res)
    assert back.is_closed_3_manifold()
    assert homology(back) == homology(T)
    return res, eulers


@pytest.mark.parametrize("v", range(5))
def test_boundary_4_simplex_vertex_links(v):
    res, eulers = check_cut(B4, vertex_linking_vector(B4, v))
    assert len(res.components) == 2
    assert eulers == [[2], [2]]
    assert sorted(t[0] for t in res.tags) == ["Generic", "VertexStar"]
    star = res.tags.index(("VertexStar", v))
    # the star of a vertex is a ball
    H = piece_homology(res, star)
    assert H.ranks == (1, 0, 0, 0) and not any(H.torsion)
    # each piece sees one side of the sphere
    sides = sorted(sorted({e[2] for e in bm}) for bm in res.boundary_map)
    assert sides == [[0], [1]]


def test_boundary_4_simplex_edge_links():
    edge_links = [s for s in spheres_of(B4) if not is_vertex_linking(B4, s)]
    assert len(edge_links) == 10
    for s in edge_links[:3]:
        res, eulers = check_cut(B4, s)
        assert len(res.components) == 2
        assert all(t == ("Generic",) for t in res.tags)


def test_nonseparating_sphere_in_s2xs1():
    T = census.get("s2xs1")
    (s,) = [s for s in spheres_of(T) if not is_vertex_linking(T, s)][:1]
    res, eulers = check_cut(T, s)
    assert len(res.components) == 1 and eulers == [[2, 2]]


def test_lens_space_sphere_bounds_a_ball():
    T = census.get("lens_3_1")
    (s,) = [s for s in spheres_of(T) if not is_vertex_linking(T, s)]
    res, _ = check_cut(T, s)
    assert len(res.components) == 2
    h1 = sorted(piece_homology(res, i).torsion[1] for i in range(2))
    assert h1 == [(), (3,)]


@pytest.mark.parametrize("name", ["s3_one_tet", "s3_one_tet_one_vertex", "s3_two_tet",
                                  "lens_4_1", "rp3_rp3"])
def test_every_fundamental_sphere(name):
    T = census.get(name)
    for s in spheres_of(T):
        res, _ = check_cut(T, s)
        if homology(T).is_sphere_homology():
            assert len(res.components) == 2


def test_errors():
    with pytest.raises(NotASphere):
        cut_along(B4, (0,) * 35)
    links = [vertex_linking_vector(B4, v) for v in (0, 1)]
    with pytest.raises(NotConnectedSurface):
        cut_along(B4, tuple(map(sum, zip(*links))))
    with pytest.raises(ValueError):
        cut_along(census.get("one_tet_open"), (1, 0, 0, 0, 0, 0, 0))


def test_boundary_surfaces():
    assert boundary_surfaces(B4) == []
    (S,) = boundary_surfaces(census.get("one_tet_open"))
    assert S.euler_characteristic() == 2 and S.size == 4


def test_cut_along_family():
    links = [vertex_linking_vector(B4, v) for v in range(5)]
    total = tuple(map(sum, zip(*links)))
    res = cut_along_surface(B4, total)
    cd = CellDecomposition(B4, total)
    assert len(res.components) == cd.num_regions == 6
    assert sum(1 for t in res.tags if t[0] == "VertexStar") == 5
    central = res.tags.index(("Generic",))
    assert sorted(b.euler_characteristic() for b in res.boundary_surfaces(central)) == [2] * 5
    assert homology(reglue(res)) == homology(B4)
