"""
Small named triangulations used by the tests and the bundled corpus.

Each table lists, per tetrahedron, the four face gluings ``(target, perm)``
with ``perm`` the vertex map; ``None`` marks a boundary face.
"""
from __future__ import annotations

from .triangulation import SurfaceTriangulation, Triangulation, from_gluing_table

_TABLES = {
    # one tetrahedron, faces folded in pairs; two vertices
    "s3_one_tet": [
        [(0, (1, 0, 2, 3)), (0, (1, 0, 2, 3)), (0, (0, 1, 3, 2)), (0, (0, 1, 3, 2))],
    ],
    # one tetrahedron, one vertex
    "s3_one_tet_one_vertex": [
        [(0, (1, 0, 2, 3)), (0, (1, 0, 2, 3)), (0, (1, 2, 3, 0)), (0, (3, 0, 1, 2))],
    ],
    # two tetrahedra glued along their boundaries by the identity
    "s3_two_tet": [
        [(1, (0, 1, 2, 3))] * 4,
        [(0, (0, 1, 2, 3))] * 4,
    ],
    "lens_4_1": [
        [(0, (1, 2, 3, 0)), (0, (3, 0, 1, 2)), (0, (1, 2, 3, 0)), (0, (3, 0, 1, 2))],
    ],
    "lens_3_1": [
        [(0, (1, 0, 2, 3)), (0, (1, 0, 2, 3)), (1, (2, 3, 0, 1)), (1, (2, 3, 0, 1))],
        [(0, (2, 3, 0, 1)), (0, (2, 3, 0, 1)), (1, (1, 2, 3, 0)), (1, (3, 0, 1, 2))],
    ],
    "lens_3_1_two_vertex": [
        [(1, (0, 1, 2, 3)), (1, (0, 1, 2, 3)), (1, (0, 1, 2, 3)), (1, (1, 2, 0, 3))],
        [(0, (0, 1, 2, 3)), (0, (0, 1, 2, 3)), (0, (0, 1, 2, 3)), (0, (2, 0, 1, 3))],
    ],
    "s2xs1": [
        [(0, (1, 2, 3, 0)), (0, (3, 0, 1, 2)), (1, (2, 3, 0, 1)), (1, (2, 3, 0, 1))],
        [(0, (2, 3, 0, 1)), (0, (2, 3, 0, 1)), (1, (1, 2, 3, 0)), (1, (3, 0, 1, 2))],
    ],
    "s2_twisted_s1": [
        [(1, (0, 1, 3, 2)), (1, (0, 1, 3, 2)), (1, (1, 3, 2, 0)), (1, (2, 0, 1, 3))],
        [(0, (0, 1, 3, 2)), (0, (0, 1, 3, 2)), (0, (3, 0, 2, 1)), (0, (1, 2, 0, 3))],
    ],
    "rp3_rp3": [
        [(1, (0, 2, 3, 1)), (1, (3, 1, 0, 2)), (1, (1, 3, 2, 0)), (1, (2, 0, 1, 3))],
        [(0, (0, 3, 1, 2)), (0, (2, 1, 3, 0)), (0, (3, 0, 2, 1)), (0, (1, 2, 0, 3))],
    ],
    # not a manifold: the vertex link is a torus
    "torus_cusp_pseudo": [
        [(0, (1, 2, 0, 3)), (0, (2, 0, 1, 3)), (0, (0, 2, 3, 1)), (0, (0, 3, 1, 2))],
    ],
    "one_tet_open": [
        [None, None, None, None],
    ],
}


def boundary_4_simplex():
    """The boundary of the 4-simplex: five tetrahedra, five vertices."""
    tets = [tuple(x for x in range(5) if x != i) for i in range(5)]
    adj = []
    for i, tv in enumerate(tets):
        row = []
        for f in range(4):
            # face f of tetrahedron i misses vertex tv[f]; it is shared with
            # tetrahedron tv[f], where the missing vertex is i
            j = tv[f]
            tj = tets[j]
            perm = tuple(tj.index(tv[lv] if lv != f else i) for lv in range(4))
            row.append((j, perm))
        adj.append(row)
    return Triangulation(5, adj)


def tetrahedron_boundary():
    """The boundary of a tetrahedron as a 4-triangle surface."""
    tris = [tuple(x for x in range(4) if x != i) for i in range(4)]
    adj = []
    for i, tv in enumerate(tris):
        row = []
        for e in range(3):
            j = tv[e]
            tj = tris[j]
            perm = tuple(tj.index(tv[lv] if lv != e else i) for lv in range(3))
            row.append((j, perm))
        adj.append(row)
    return SurfaceTriangulation(4, adj)


def get(name):
    """A named triangulation from this module."""
    if name in ("s3_boundary4simplex", "boundary_4_simplex"):
        return boundary_4_simplex()
    if name == "tetra_boundary":
        return tetrahedron_boundary()
    try:
        return from_gluing_table(_TABLES[name])
    except KeyError:
        raise KeyError(f"unknown triangulation {name!r}") from None


def names():
    return ["s3_boundary4simplex", "tetra_boundary"] + sorted(_TABLES)


def closed_manifolds():
    """Names of the closed 3-manifold entries."""
    return [n for n in names() if n not in ("tetra_boundary", "one_tet_open",
                                            "torus_cusp_pseudo")]
