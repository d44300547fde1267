"""
Generalised (semi-simplicial) triangulations of 3-manifolds and surfaces.

A triangulation is a list of simplices together with gluings of their
facets in pairs.  A gluing of facet ``f`` of simplex ``s`` is stored as
``(s2, perm)`` where ``perm`` is a tuple giving the image of every vertex of
``s`` in ``s2``; in particular ``perm[f]`` is the facet of ``s2`` that ``f``
is glued to.  This is the same convention used by Regina and SnapPea.

Skeleton classes (vertices, edges, ...) are computed when the object is
built and the object is never modified afterwards.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

# Edges of a tetrahedron, indexed 0..5.  Opposite edges are e and 5 - e.
EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_INDEX = {e: i for i, e in enumerate(EDGES)}

ALL_PERMS_4 = tuple(permutations(range(4)))


class TriangulationError(ValueError):
    pass


class NonInvolutiveGluing(TriangulationError):
    pass


class SelfGluedFace(TriangulationError):
    pass


class BadEdgeIdentification(TriangulationError):
    pass


def perm_sign(p):
    """Sign (+1 or -1) of a permutation given as a tuple of images."""
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def perm_inverse(p):
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def perm_compose(p, q):
    """The permutation ``p o q`` (apply q first)."""
    return tuple(p[q[i]] for i in range(len(q)))


def sort_sign(seq):
    """Sign of the permutation that sorts ``seq`` (distinct entries)."""
    order = sorted(range(len(seq)), key=lambda i: seq[i])
    return perm_sign(order)


class _UnionFind:
    """Union-find that also tracks a parity (orientation) relative to the root."""

    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.parity = {x: 1 for x in items}

    def find(self, x):
        root = x
        sign = 1
        while self.parent[root] != root:
            sign *= self.parity[root]
            root = self.parent[root]
        # path compression, keeping parities relative to the root
        cur, cur_sign = x, sign
        while self.parent[cur] != cur:
            nxt = self.parent[cur]
            nxt_sign = cur_sign * self.parity[cur]
            self.parent[cur] = root
            self.parity[cur] = cur_sign
            cur, cur_sign = nxt, nxt_sign
        return root, sign

    def union(self, a, b, rel=1):
        """Merge so that orientation(b) = rel * orientation(a).

        Returns False if a and b are already joined with the opposite parity.
        """
        ra, sa = self.find(a)
        rb, sb = self.find(b)
        if ra == rb:
            return sa * sb == rel
        self.parent[rb] = ra
        self.parity[rb] = sa * sb * rel
        return True


@dataclass(frozen=True)
class FaceGluing:
    """Facet ``source[1]`` of simplex ``source[0]`` glued to ``target``.

    ``perm`` maps the vertices of the source simplex to those of the target
    simplex; it must send the source facet number to the target facet number.
    """

    source: tuple
    target: tuple
    perm: tuple


class _GluedComplex:
    """Shared machinery for 2- and 3-dimensional gluing complexes."""

    dim = None

    def __init__(self, size, adjacency):
        self.size = size
        self._adj = tuple(tuple(row) for row in adjacency)
        self._check()
        self._classes = {}
        for k in range(self.dim):
            self._classes[k] = self._compute_classes(k)

    @classmethod
    def build(cls, size, gluings):
        """Build from a list of :class:`FaceGluing` (one or both directions)."""
        n = cls.dim + 1
        adj = [[None] * n for _ in range(size)]
        explicit = set()
        for g in gluings:
            s, f = g.source
            s2, f2 = g.target
            perm = tuple(g.perm)
            for (x, y) in (g.source, g.target):
                if not (0 <= x < size and 0 <= y < n):
                    raise TriangulationError(f"facet index {(x, y)} out of range")
            if sorted(perm) != list(range(n)):
                raise TriangulationError(f"{perm} is not a permutation of 0..{n - 1}")
            if perm[f] != f2:
                raise TriangulationError(
                    f"gluing {g.source}->{g.target}: permutation sends facet {f} to {perm[f]}")
            if (s, f) == (s2, f2):
                raise SelfGluedFace(f"facet {(s, f)} glued to itself")
            if (s, f) in explicit and adj[s][f] != (s2, perm):
                raise NonInvolutiveGluing(f"facet {(s, f)} glued twice")
            explicit.add((s, f))
            adj[s][f] = (s2, perm)
        # fill in reverse directions, checking they agree with anything explicit
        for s in range(size):
            for f in range(n):
                if adj[s][f] is None:
                    continue
                s2, perm = adj[s][f]
                f2 = perm[f]
                back = (s, perm_inverse(perm))
                if adj[s2][f2] is None:
                    if (s2, f2) in explicit:
                        raise NonInvolutiveGluing(f"facet {(s2, f2)} inconsistent")
                    adj[s2][f2] = back
                elif adj[s2][f2] != back:
                    raise NonInvolutiveGluing(
                        f"facet {(s, f)} -> {(s2, f2)} but {(s2, f2)} -> "
                        f"{(adj[s2][f2][0], adj[s2][f2][1][f2])}")
        return cls(size, adj)

    def _check(self):
        n = self.dim + 1
        if len(self._adj) != self.size:
            raise TriangulationError("adjacency length does not match simplex count")
        for s, row in enumerate(self._adj):
            if len(row) != n:
                raise TriangulationError(f"simplex {s} needs {n} facet entries")
            for f, glu in enumerate(row):
                if glu is None:
                    continue
                s2, perm = glu
                if not 0 <= s2 < self.size:
                    raise TriangulationError(f"simplex index {s2} out of range")
                if sorted(perm) != list(range(n)):
                    raise TriangulationError(f"{perm} is not a permutation")
                f2 = perm[f]
                if (s2, f2) == (s, f):
                    raise SelfGluedFace(f"facet {(s, f)} glued to itself")
                back = self._adj[s2][f2]
                if back is None or back[0] != s or tuple(back[1]) != perm_inverse(perm):
                    raise NonInvolutiveGluing(f"gluing at {(s, f)} is not involutive")

    def _compute_classes(self, k):
        """Equivalence classes of k-faces, with orientation signs.

        Returns (members, class_of, sign_of) where ``class_of[(s, face)]`` is the
        class index and ``sign_of[(s, face)]`` compares the sorted-vertex
        orientation of that face with the orientation of the class
        representative (its first member).
        """
        n = self.dim + 1
        faces = list(combinations(range(n), k + 1))
        items = [(s, fc) for s in range(self.size) for fc in faces]
        uf = _UnionFind(items)
        for s in range(self.size):
            for f in range(n):
                glu = self._adj[s][f]
                if glu is None:
                    continue
                s2, perm = glu
                for fc in faces:
                    if f in fc:
                        continue
                    image = tuple(perm[x] for x in fc)
                    ok = uf.union((s, fc), (s2, tuple(sorted(image))), sort_sign(image))
                    if not ok:
                        if k == 1:
                            raise BadEdgeIdentification(
                                f"edge {fc} of simplex {s} is identified with itself in reverse")
                        raise TriangulationError(f"{k}-face {fc} of simplex {s} reversed")
        roots = {}
        members = []
        class_of = {}
        sign_of = {}
        for it in items:
            root, sign = uf.find(it)
            if root not in roots:
                roots[root] = (len(members), sign)
                members.append([])
            idx, rep_sign = roots[root]
            members[idx].append(it)
            class_of[it] = idx
            sign_of[it] = sign * rep_sign
        return [tuple(m) for m in members], class_of, sign_of

    # -- queries ---------------------------------------------------------------

    def adjacent(self, s, f):
        """``(s2, perm)`` or ``None`` for a boundary facet."""
        return self._adj[s][f]

    @property
    def adjacency(self):
        return self._adj

    def class_members(self, k):
        return self._classes[k][0]

    def class_of(self, k, s, face):
        return self._classes[k][1][(s, tuple(face))]

    def class_sign(self, k, s, face):
        return self._classes[k][2][(s, tuple(face))]

    def count(self, k):
        if k == self.dim:
            return self.size
        if k == self.dim - 1:
            # facet classes: glued pairs count once
            return len(self._classes[k][0])
        return len(self._classes[k][0])

    def f_vector(self):
        return tuple(self.count(k) for k in range(self.dim + 1))

    def euler_characteristic(self):
        return sum((-1) ** k * c for k, c in enumerate(self.f_vector()))

    def boundary_facets(self):
        return [(s, f) for s in range(self.size) for f in range(self.dim + 1)
                if self._adj[s][f] is None]

    def is_closed(self):
        return not self.boundary_facets()

    def simplex_components(self):
        """Partition of the simplices into connected components."""
        seen = [None] * self.size
        comps = []
        for start in range(self.size):
            if seen[start] is not None:
                continue
            comp = [start]
            seen[start] = len(comps)
            stack = [start]
            while stack:
                s = stack.pop()
                for glu in self._adj[s]:
                    if glu is not None and seen[glu[0]] is None:
                        seen[glu[0]] = len(comps)
                        comp.append(glu[0])
                        stack.append(glu[0])
            comps.append(sorted(comp))
        return comps

    def is_connected(self):
        return len(self.simplex_components()) <= 1

    def is_orientable(self):
        """True iff the simplices can be oriented so every gluing reverses orientation."""
        orient = [0] * self.size
        for start in range(self.size):
            if orient[start]:
                continue
            orient[start] = 1
            stack = [start]
            while stack:
                s = stack.pop()
                for glu in self._adj[s]:
                    if glu is None:
                        continue
                    s2, perm = glu
                    want = -orient[s] * perm_sign(perm)
                    if orient[s2] == 0:
                        orient[s2] = want
                        stack.append(s2)
                    elif orient[s2] != want:
                        return False
        return True

    def relabel(self, order):
        """A copy with simplex ``order[i]`` renamed to ``i``.

        ``order`` may list a union of connected components only.
        """
        new_index = {old: new for new, old in enumerate(order)}
        adj = []
        for old in order:
            row = []
            for glu in self._adj[old]:
                row.append(None if glu is None else (new_index[glu[0]], glu[1]))
            adj.append(row)
        return type(self)(len(order), adj)

    def gluings(self):
        """Every gluing once, as :class:`FaceGluing` with source < target."""
        out = []
        for s in range(self.size):
            for f in range(self.dim + 1):
                glu = self._adj[s][f]
                if glu is None:
                    continue
                s2, perm = glu
                if (s, f) <= (s2, perm[f]):
                    out.append(FaceGluing((s, f), (s2, perm[f]), tuple(perm)))
        return out

    def __eq__(self, other):
        return type(self) is type(other) and self._adj == other._adj

    def __hash__(self):
        return hash(self._adj)

    def __repr__(self):
        return f"{type(self).__name__}(size={self.size}, f_vector={self.f_vector()})"


class SurfaceTriangulation(_GluedComplex):
    """Triangles glued along edges.  Edge ``i`` of a triangle is opposite vertex ``i``."""

    dim = 2

    def vertex_class(self, tri, corner):
        return self.class_of(0, tri, (corner,))

    def edge_class(self, tri, edge):
        """Class of the edge opposite ``edge``."""
        return self.class_of(1, tri, tuple(x for x in range(3) if x != edge))

    def num_vertices(self):
        return self.count(0)

    def num_edges(self):
        return self.count(1)

    def boundary_component_count(self):
        """Number of boundary circles."""
        bd = self.boundary_facets()
        if not bd:
            return 0
        # boundary edges meet at boundary vertices; join edges sharing a vertex class
        parent = {e: e for e in bd}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        by_vertex = {}
        for (s, e) in bd:
            for c in range(3):
                if c != e:
                    by_vertex.setdefault(self.vertex_class(s, c), []).append((s, e))
        for group in by_vertex.values():
            for other in group[1:]:
                parent[find(other)] = find(group[0])
        return len({find(e) for e in bd})

    def is_sphere(self):
        return self.size > 0 and self.is_closed() and self.is_connected() \
            and self.euler_characteristic() == 2

    def is_disk(self):
        return (self.size > 0 and self.is_connected() and self.euler_characteristic() == 1
                and self.boundary_component_count() == 1)


class Triangulation(_GluedComplex):
    """Tetrahedra glued along faces.  Face ``i`` of a tetrahedron is opposite vertex ``i``."""

    dim = 3

    def vertex_class(self, tet, v):
        return self.class_of(0, tet, (v,))

    def edge_class(self, tet, edge):
        """Class of edge ``edge`` (an index into :data:`EDGES` or a vertex pair)."""
        if isinstance(edge, int):
            edge = EDGES[edge]
        return self.class_of(1, tet, tuple(sorted(edge)))

    def edge_sign(self, tet, edge):
        if isinstance(edge, int):
            edge = EDGES[edge]
        return self.class_sign(1, tet, tuple(sorted(edge)))

    def face_class(self, tet, face):
        return self.class_of(2, tet, tuple(x for x in range(4) if x != face))

    def face_sign(self, tet, face):
        return self.class_sign(2, tet, tuple(x for x in range(4) if x != face))

    def num_vertices(self):
        return self.count(0)

    def num_edges(self):
        return self.count(1)

    def num_faces(self):
        return self.count(2)

    def vertex_corners(self, v):
        """The (tetrahedron, vertex) corners making up vertex class ``v``."""
        return [(s, fc[0]) for (s, fc) in self.class_members(0)[v]]

    def interior_face_pairs(self):
        """Glued face pairs ``((t, f), (t2, f2), perm)``, each listed once."""
        return [(g.source, g.target, g.perm) for g in self.gluings()]

    def vertex_link(self, v):
        """The triangulated surface linking vertex class ``v``.

        Triangle ``i`` of the result is the link of the i-th corner of
        :meth:`vertex_corners`; its local vertices 0,1,2 are the other three
        tetrahedron vertices in increasing order.
        """
        corners = self.vertex_corners(v)
        index = {c: i for i, c in enumerate(corners)}
        adj = []
        for (t, w) in corners:
            others = [x for x in range(4) if x != w]
            row = []
            for j in range(3):
                glu = self._adj[t][others[j]]
                if glu is None:
                    row.append(None)
                    continue
                t2, perm = glu
                w2 = perm[w]
                others2 = [x for x in range(4) if x != w2]
                local = tuple(others2.index(perm[others[i]]) for i in range(3))
                row.append((index[(t2, w2)], local))
            adj.append(row)
        return SurfaceTriangulation(len(corners), adj)

    def vertex_links(self):
        return [self.vertex_link(v) for v in range(self.num_vertices())]

    def is_closed_3_manifold(self):
        """Manifold gate.  Returns a :class:`ManifoldCheck`."""
        bd = self.boundary_facets()
        if bd:
            return ManifoldCheck(False, "BoundaryFace", {"face": list(bd[0])})
        # invalid edges are rejected at build time
        for v in range(self.num_vertices()):
            link = self.vertex_link(v)
            if not link.is_sphere():
                return ManifoldCheck(False, "BadVertexLink", {
                    "vertex": v, "euler": link.euler_characteristic(),
                    "connected": link.is_connected()})
        return ManifoldCheck(True, None, {})

    def local_manifold_check(self):
        """Like :meth:`is_closed_3_manifold` but boundary faces are allowed.

        Every vertex link must then be a sphere (interior vertex) or a disk
        (boundary vertex).
        """
        for v in range(self.num_vertices()):
            link = self.vertex_link(v)
            if not (link.is_sphere() or link.is_disk()):
                return ManifoldCheck(False, "BadVertexLink", {
                    "vertex": v, "euler": link.euler_characteristic(),
                    "connected": link.is_connected()})
        return ManifoldCheck(True, None, {})

    def boundary_surface(self):
        """The boundary as a (possibly disconnected) :class:`SurfaceTriangulation`.

        Triangle ``i`` is the i-th boundary face in :meth:`boundary_facets`
        order; its local vertices are the face's vertices in increasing order.
        """
        bd = self.boundary_facets()
        index = {b: i for i, b in enumerate(bd)}
        adj = []
        for (t, f) in bd:
            verts = [x for x in range(4) if x != f]
            row = []
            for j in range(3):
                # walk around the boundary edge opposite verts[j] inside the 3-manifold
                a, b = [verts[i] for i in range(3) if i != j]
                cur_t, cur_f, opp = t, f, verts[j]
                # the face through edge ab other than cur_f is face ``opp``
                va, vb = a, b
                while True:
                    nxt_face = opp
                    glu = self._adj[cur_t][nxt_face]
                    if glu is None:
                        target = (cur_t, nxt_face)
                        break
                    t2, perm = glu
                    # in t2 the face we arrived through is perm[nxt_face]; continue
                    # through the other face containing edge (perm[va], perm[vb])
                    came = perm[nxt_face]
                    va, vb = perm[va], perm[vb]
                    rest = [x for x in range(4) if x not in (va, vb, came)]
                    cur_t, opp = t2, rest[0]
                    cur_f = came
                tgt_t, tgt_f = target
                tverts = [x for x in range(4) if x != tgt_f]
                k = index[target]
                # local map: verts of (t,f) -> verts of target face
                mapping = {a: va, b: vb}
                third = [x for x in tverts if x not in (va, vb)][0]
                mapping[verts[j]] = third
                local = tuple(tverts.index(mapping[verts[i]]) for i in range(3))
                row.append((k, local))
            adj.append(row)
        return SurfaceTriangulation(len(bd), adj)


@dataclass(frozen=True)
class ManifoldCheck:
    ok: bool
    reason: str | None
    witness: dict

    def __bool__(self):
        return self.ok


def build(t, gluings):
    """Build a :class:`Triangulation` from ``t`` tetrahedra and face gluings."""
    return Triangulation.build(t, gluings)


def from_gluing_table(table):
    """Triangulation from a list of rows ``[(t2, perm) or None] * 4``."""
    return Triangulation(len(table), [[None if g is None else (g[0], tuple(g[1])) for g in row]
                                      for row in table])


def disjoint_union(*tris):
    adj = []
    offset = 0
    for T in tris:
        for row in T.adjacency:
            adj.append([None if g is None else (g[0] + offset, g[1]) for g in row])
        offset += T.size
    cls = type(tris[0])
    return cls(offset, adj)
