"""
Normal and almost normal coordinates.

A normal surface meets each tetrahedron in triangles (one kind per corner)
and quadrilaterals (one kind per way of splitting the four vertices into
two pairs).  Almost normal surfaces may also contain a single octagon; there
are three octagon kinds per tetrahedron, indexed like the quadrilaterals.

Vectors are plain tuples of non-negative integers laid out tetrahedron-major:
``[T0, T1, T2, T3, Q0, Q1, Q2]`` per tetrahedron in normal mode and
``[T0, T1, T2, T3, Q0, Q1, Q2, K0, K1, K2]`` in almost normal mode.

An arc on a face is named by the face vertex it cuts off.
"""
from __future__ import annotations

from enum import Enum

from .triangulation import EDGES, Triangulation


class Mode(Enum):
    NORMAL = 7
    ALMOST = 10

    @property
    def block(self):
        return self.value


class LengthMismatch(ValueError):
    pass


# Quad kind k separates the vertex pair QUAD_PAIRS[k][0] from QUAD_PAIRS[k][1].
QUAD_PAIRS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))

KIND_NAMES = ("T0", "T1", "T2", "T3", "Q01/23", "Q02/13", "Q03/12",
              "K01/23", "K02/13", "K03/12")


def partner(quad, v):
    """The vertex paired with ``v`` by quad kind ``quad``."""
    for a, b in QUAD_PAIRS[quad]:
        if v == a:
            return b
        if v == b:
            return a
    raise ValueError(v)


def quad_side(quad, v):
    """0 if ``v`` is on the same side of quad kind ``quad`` as vertex 0, else 1."""
    return 0 if v in QUAD_PAIRS[quad][0] else 1


def _build_kind_tables():
    arcs = []
    crossings = []
    for v in range(4):
        arcs.append({(f, v): 1 for f in range(4) if f != v})
        crossings.append({tuple(sorted((v, w))): 1 for w in range(4) if w != v})
    for q in range(3):
        arcs.append({(f, partner(q, f)): 1 for f in range(4)})
        p0, p1 = QUAD_PAIRS[q]
        crossings.append({tuple(sorted((a, c))): 1 for a in p0 for c in p1})
    for q in range(3):
        arcs.append({(f, u): 1 for f in range(4) for u in range(4)
                     if u != f and u != partner(q, f)})
        p0, p1 = QUAD_PAIRS[q]
        cr = {tuple(sorted((a, c))): 1 for a in p0 for c in p1}
        cr[p0] = 2
        cr[p1] = 2
        crossings.append(cr)
    return tuple(arcs), tuple(crossings)


#: KIND_ARCS[kind][(face, cut_off_vertex)] = number of arcs of that type
#: KIND_CROSSINGS[kind][(a, b)] = number of times the disk meets edge ab
KIND_ARCS, KIND_CROSSINGS = _build_kind_tables()


def is_triangle(kind):
    return kind < 4


def is_quad(kind):
    return 4 <= kind < 7


def is_octagon(kind):
    return kind >= 7


def mode_of(T: Triangulation, vec):
    if len(vec) == 7 * T.size:
        return Mode.NORMAL
    if len(vec) == 10 * T.size:
        return Mode.ALMOST
    raise LengthMismatch(f"vector of length {len(vec)} does not fit {T.size} tetrahedra")


def coord(mode, tet, kind):
    return mode.block * tet + kind


def blocks(vec, mode):
    b = mode.block
    return [vec[i:i + b] for i in range(0, len(vec), b)]


def to_almost(vec):
    """Pad a 7t normal vector with zero octagon coordinates."""
    out = []
    for i in range(0, len(vec), 7):
        out.extend(vec[i:i + 7])
        out.extend((0, 0, 0))
    return tuple(out)


def to_normal(vec):
    """Drop octagon coordinates of a 10t vector (they must be zero)."""
    out = []
    for i in range(0, len(vec), 10):
        if any(vec[i + 7:i + 10]):
            raise ValueError("vector has an octagon")
        out.extend(vec[i:i + 7])
    return tuple(out)


def matching_matrix(T: Triangulation, mode=Mode.NORMAL):
    """Matching equations, one row per (glued face pair, arc type).

    Row order: glued pairs as in ``T.interior_face_pairs()``, arc types in
    increasing order of the cut-off vertex on the source face.
    """
    b = mode.block
    ncols = b * T.size
    rows = []
    labels = []
    for (t, f), (t2, f2), perm in T.interior_face_pairs():
        for u in range(4):
            if u == f:
                continue
            row = [0] * ncols
            for kind in range(b):
                row[b * t + kind] += KIND_ARCS[kind].get((f, u), 0)
                row[b * t2 + kind] -= KIND_ARCS[kind].get((f2, perm[u]), 0)
            rows.append(row)
            labels.append(((t, f), u))
    return MatchingSystem(rows, ncols, mode, labels)


class MatchingSystem:
    """Integer matrix of matching equations over a coordinate layout."""

    def __init__(self, rows, ncols, mode=Mode.NORMAL, labels=None):
        self.rows = [list(r) for r in rows]
        self.ncols = ncols
        self.mode = mode
        self.labels = labels

    @property
    def shape(self):
        return (len(self.rows), self.ncols)

    def apply(self, vec):
        if len(vec) != self.ncols:
            raise LengthMismatch(f"expected {self.ncols} coordinates, got {len(vec)}")
        return [sum(a * x for a, x in zip(row, vec) if a) for row in self.rows]

    def contains(self, vec):
        return not any(self.apply(vec))

    def __repr__(self):
        mode = self.mode.name if self.mode else "plain"
        return f"MatchingSystem(shape={self.shape}, mode={mode})"


def vertex_linking_vector(T: Triangulation, v, mode=Mode.NORMAL):
    vec = [0] * (mode.block * T.size)
    for (t, w) in T.vertex_corners(v):
        vec[mode.block * t + w] += 1
    return tuple(vec)


def is_admissible(vec, mode=Mode.NORMAL, strict=True):
    """Quad condition; in almost normal mode also the single-octagon rule.

    With ``strict=False`` an almost normal vector may have no octagon at all.
    """
    b = mode.block
    if len(vec) % b:
        raise LengthMismatch(f"length {len(vec)} is not a multiple of {b}")
    if any(x < 0 for x in vec):
        return False
    octagons = 0
    for i in range(0, len(vec), b):
        block = vec[i:i + b]
        quads = sum(1 for x in block[4:7] if x)
        octs = [x for x in block[7:10]]
        nonzero_octs = sum(1 for x in octs if x)
        if quads + nonzero_octs > 1:
            return False
        octagons += sum(octs)
    if mode is Mode.ALMOST:
        return octagons == 1 if strict else octagons <= 1
    return True


def edge_crossings(T: Triangulation, vec, tet, edge):
    """Points where the surface meets edge ``edge`` (a vertex pair) of ``tet``."""
    mode = mode_of(T, vec)
    b = mode.block
    edge = tuple(sorted(edge))
    return sum(vec[b * tet + k] * KIND_CROSSINGS[k].get(edge, 0) for k in range(b))


def edge_weights(T: Triangulation, vec):
    """Intersection count with every edge class, read off a representative wedge."""
    out = []
    for members in T.class_members(1):
        t, edge = members[0]
        out.append(edge_crossings(T, vec, t, edge))
    return out


def weight(T: Triangulation, vec):
    """Number of points where the surface meets the edges of ``T``."""
    return sum(edge_weights(T, vec))


def face_arc_count(T, vec, tet, face):
    mode = mode_of(T, vec)
    b = mode.block
    return sum(vec[b * tet + k] * n for k in range(b)
               for (f, _), n in KIND_ARCS[k].items() if f == face)


def euler_characteristic(T: Triangulation, vec):
    """V - E + F of the surface, computed linearly from the coordinates."""
    faces = sum(vec)
    edges = 0
    for (t, f), _, _ in T.interior_face_pairs():
        edges += face_arc_count(T, vec, t, f)
    for (t, f) in T.boundary_facets():
        edges += face_arc_count(T, vec, t, f)
    return weight(T, vec) - edges + faces


def is_vertex_linking(T: Triangulation, vec):
    """True iff ``vec`` is a non-negative combination of vertex links only."""
    mode = mode_of(T, vec)
    b = mode.block
    for i in range(0, len(vec), b):
        if any(vec[i + 4:i + b]):
            return False
    # triangle coordinates must be constant on every vertex class
    for v in range(T.num_vertices()):
        vals = {vec[b * t + w] for (t, w) in T.vertex_corners(v)}
        if len(vals) > 1:
            return False
    return True


def linked_vertex(T: Triangulation, vec):
    """The vertex class whose link is exactly ``vec``, or ``None``."""
    for v in range(T.num_vertices()):
        if tuple(vec) == vertex_linking_vector(T, v, mode_of(T, vec)):
            return v
    return None


def describe(vec, mode=Mode.NORMAL):
    """Short human-readable listing of the non-zero coordinates."""
    parts = []
    b = mode.block
    for i, x in enumerate(vec):
        if x:
            parts.append(f"{x}*{KIND_NAMES[i % b]}@{i // b}")
    return " + ".join(parts) if parts else "0"


__all__ = [
    "Mode", "QUAD_PAIRS", "KIND_ARCS", "KIND_CROSSINGS", "EDGES",
    "matching_matrix", "vertex_linking_vector", "is_admissible", "weight",
    "euler_characteristic", "MatchingSystem", "LengthMismatch",
]
