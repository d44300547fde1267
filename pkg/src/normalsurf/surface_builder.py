"""
Instantiate a coordinate vector as an embedded surface.

Parallel copies of each disk kind are stacked in a fixed order:

* triangle copies of corner ``v`` are numbered outward from ``v``;
* quad copies are numbered from the side holding vertex 0 of the
  tetrahedron to the other side;
* there is at most one octagon.

On a face, the arcs cutting off a vertex ``u`` are ranked outward from
``u``: triangle arcs first, then the arcs of the quad or octagon.  Arcs of
equal type and rank are matched across a gluing, which is the only matching
compatible with disjoint disks.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .normal_coords import (KIND_ARCS, Mode, QUAD_PAIRS, is_admissible, mode_of,
                            partner, quad_side)
from .triangulation import Triangulation


class NotAdmissible(ValueError):
    pass


class _DSU:
    def __init__(self, n=0):
        self.parent = list(range(n))

    def add(self):
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


class Layout:
    """Positions of every disk copy inside every tetrahedron."""

    def __init__(self, T: Triangulation, vec):
        self.T = T
        self.vec = tuple(int(x) for x in vec)
        self.mode = mode_of(T, vec)
        if not is_admissible(self.vec, self.mode, strict=False):
            raise NotAdmissible("vector violates the quad/octagon condition")
        b = self.mode.block
        self.tri = []
        self.quad = []      # (kind, count) or None
        self.octagon = []   # kind or None
        self.disks = []     # (tet, kind, copy)
        self.disk_index = {}
        for t in range(T.size):
            block = self.vec[b * t:b * t + b]
            self.tri.append(tuple(block[:4]))
            q = [(k, block[4 + k]) for k in range(3) if block[4 + k]]
            self.quad.append(q[0] if q else None)
            o = [k for k in range(3) if b == 10 and block[7 + k]]
            self.octagon.append(o[0] if o else None)
            for kind in range(b):
                for c in range(block[kind]):
                    self.disk_index[(t, kind, c)] = len(self.disks)
                    self.disks.append((t, kind, c))

    def disk(self, t, kind, copy):
        return self.disk_index[(t, kind, copy)]

    def face_arcs(self, t, f):
        """``{u: [disk ids by rank]}`` for the arcs on face ``f`` of ``t``."""
        out = {}
        for u in range(4):
            if u == f:
                continue
            ids = [self.disk(t, u, c) for c in range(self.tri[t][u])]
            q = self.quad[t]
            if q is not None and partner(q[0], f) == u:
                kind, n = q
                order = range(n) if quad_side(kind, u) == 0 else range(n - 1, -1, -1)
                ids += [self.disk(t, 4 + kind, c) for c in order]
            k = self.octagon[t]
            if k is not None and partner(k, f) != u:
                ids.append(self.disk(t, 7 + k, 0))
            out[u] = ids
        return out

    def edge_points(self, t, a, b):
        """Disk ids met along edge ab of ``t``, listed from ``a`` to ``b``."""
        ids = [self.disk(t, a, c) for c in range(self.tri[t][a])]
        q = self.quad[t]
        if q is not None:
            kind, n = q
            if quad_side(kind, a) != quad_side(kind, b):
                order = range(n) if quad_side(kind, a) == 0 else range(n - 1, -1, -1)
                ids += [self.disk(t, 4 + kind, c) for c in order]
        k = self.octagon[t]
        if k is not None:
            reps = 2 if quad_side(k, a) == quad_side(k, b) else 1
            ids += [self.disk(t, 7 + k, 0)] * reps
        ids += [self.disk(t, b, c) for c in range(self.tri[t][b] - 1, -1, -1)]
        return ids

    def arc_endpoints(self, t, f, u, rank):
        """The two edge points ``(t, (a, b), k)`` bounding an arc (k counted from min)."""
        out = []
        for w in range(4):
            if w in (f, u):
                continue
            a, b = min(u, w), max(u, w)
            n = len(self.edge_points(t, a, b))
            out.append((t, (a, b), rank if u == a else n - 1 - rank))
        return out

    def map_point(self, t, f, point):
        """Image of an edge point on face ``f`` of ``t`` under the face gluing."""
        t2, perm = self.T.adjacent(t, f)
        _, (a, b), k = point
        a2, b2 = perm[a], perm[b]
        if a2 < b2:
            return (t2, (a2, b2), k)
        n = len(self.edge_points(t, a, b))
        return (t2, (b2, a2), n - 1 - k)


@dataclass
class EmbeddedSurface:
    """An instantiated surface: disks, their gluing, and per-component data."""

    T: Triangulation
    vector: tuple
    disks: list
    components: list
    component_vectors: list
    component_euler: list
    component_boundary_arcs: list
    arc_pairs: list = field(repr=False, default_factory=list)
    weight: int = 0

    @property
    def euler_characteristic(self):
        return sum(self.component_euler)

    def is_connected(self):
        return len(self.components) == 1

    def recovered_vector(self):
        vec = [0] * len(self.vector)
        b = len(self.vector) // self.T.size if self.T.size else 7
        for (t, kind, _) in self.disks:
            vec[b * t + kind] += 1
        return tuple(vec)


def instantiate(T: Triangulation, vec) -> EmbeddedSurface:
    """Build the surface with the given coordinates and find its components."""
    lay = Layout(T, vec)
    n = len(lay.disks)
    disks = _DSU(n)
    arc_pairs = []
    interior_arcs_of = [0] * n
    boundary_arcs_of = [0] * n
    for (t, f), (t2, f2), perm in T.interior_face_pairs():
        arcs1 = lay.face_arcs(t, f)
        arcs2 = lay.face_arcs(t2, f2)
        for u, ids in arcs1.items():
            other = arcs2[perm[u]]
            if len(ids) != len(other):
                raise ValueError(f"vector fails the matching equations on face {(t, f)}")
            for r, (d1, d2) in enumerate(zip(ids, other)):
                disks.union(d1, d2)
                arc_pairs.append(((t, f, u, r), (t2, f2, perm[u], r)))
                interior_arcs_of[d1] += 1
    for (t, f) in T.boundary_facets():
        for ids in lay.face_arcs(t, f).values():
            for d in ids:
                boundary_arcs_of[d] += 1

    # edge points: identify across gluings and record their owning disk
    points = {}
    owner = []
    pdsu = _DSU()

    def point_id(p):
        if p not in points:
            points[p] = pdsu.add()
            owner.append(None)
        return points[p]

    for t in range(T.size):
        for f in range(4):
            for u, ids in lay.face_arcs(t, f).items():
                for r, d in enumerate(ids):
                    for p in lay.arc_endpoints(t, f, u, r):
                        pid = point_id(p)
                        if owner[pid] is None:
                            owner[pid] = d
                        elif owner[pid] != d:
                            raise AssertionError(f"inconsistent edge point {p}")
    for t in range(T.size):
        for f in range(4):
            if T.adjacent(t, f) is None:
                continue
            for a in range(4):
                for b in range(a + 1, 4):
                    if f in (a, b):
                        continue
                    for k in range(len(lay.edge_points(t, a, b))):
                        p = (t, (a, b), k)
                        q = lay.map_point(t, f, p)
                        pdsu.union(point_id(p), point_id(q))

    roots = {}
    components = []
    for d in range(n):
        r = disks.find(d)
        if r not in roots:
            roots[r] = len(components)
            components.append([])
        components[roots[r]].append(d)
    comp_of = [0] * n
    for ci, comp in enumerate(components):
        for d in comp:
            comp_of[d] = ci

    verts = [set() for _ in components]
    for p, pid in points.items():
        verts[comp_of[owner[pid]]].add(pdsu.find(pid))
    for pid in range(len(owner)):
        r = pdsu.find(pid)
        if comp_of[owner[r]] != comp_of[owner[pid]]:
            raise AssertionError("edge point shared by two components")

    b = lay.mode.block
    comp_vectors = []
    comp_euler = []
    comp_bd = []
    for ci, comp in enumerate(components):
        v = [0] * len(lay.vec)
        for d in comp:
            t, kind, _ = lay.disks[d]
            v[b * t + kind] += 1
        comp_vectors.append(tuple(v))
        F = len(comp)
        E = sum(interior_arcs_of[d] + boundary_arcs_of[d] for d in comp)
        comp_euler.append(len(verts[ci]) - E + F)
        comp_bd.append(sum(boundary_arcs_of[d] for d in comp))
    weight = len({pdsu.find(pid) for pid in range(len(owner))})
    return EmbeddedSurface(T, lay.vec, list(lay.disks), components, comp_vectors,
                           comp_euler, comp_bd, arc_pairs, weight)


def components(T: Triangulation, vec):
    """Coordinate vectors of the connected components, in a canonical order."""
    return sorted(instantiate(T, vec).component_vectors, reverse=True)


def is_two_sphere(T: Triangulation, vec):
    """Connected, closed and Euler characteristic 2."""
    if not any(vec):
        return False
    s = instantiate(T, vec)
    return s.is_connected() and s.component_euler[0] == 2 and s.component_boundary_arcs[0] == 0


def is_normal_two_sphere(T: Triangulation, vec):
    if mode_of(T, vec) is not Mode.NORMAL:
        raise ValueError("expected a normal (7t) vector")
    if not is_admissible(vec, Mode.NORMAL):
        raise NotAdmissible("vector violates the quad condition")
    return is_two_sphere(T, vec)


def is_almost_normal_two_sphere(T: Triangulation, vec):
    """A 10t vector with exactly one octagon that instantiates to a 2-sphere."""
    if mode_of(T, vec) is not Mode.ALMOST or not is_admissible(vec, Mode.ALMOST):
        return False
    return is_two_sphere(T, vec)


def are_disjoint(T: Triangulation, vectors):
    """True iff the given connected surfaces can be realised disjointly.

    The sum is instantiated; the surfaces are disjoint exactly when its
    components are the given surfaces again.
    """
    if not vectors:
        return True
    total = tuple(map(sum, zip(*vectors)))
    try:
        s = instantiate(T, total)
    except NotAdmissible:
        return False
    return sorted(s.component_vectors) == sorted(tuple(v) for v in vectors)


__all__ = ["Layout", "EmbeddedSurface", "instantiate", "components", "is_two_sphere",
           "is_normal_two_sphere", "is_almost_normal_two_sphere", "are_disjoint",
           "NotAdmissible", "QUAD_PAIRS", "KIND_ARCS"]
