"""
Cutting a triangulation open along normal spheres.

The disks of a normal surface split every tetrahedron into cells: corner
layers between parallel triangles (``('C', v, i)``, with ``i = 0`` the tip
holding vertex ``v``) and middle slabs (``('M', s)``), which are separated by
parallel quads and numbered from the side of vertex 0.

Each cell is a polyhedron whose faces are pieces of tetrahedron faces and
sides of disks.  Points are labelled locally to a tetrahedron:
``('V', t, v)`` for a vertex and ``('P', t, (a, b), k)`` for the k-th surface
point on edge ab counted from ``a < b``.  A cell is triangulated by coning:
one new tetrahedron ``(cell centre, polygon centre, a, b)`` for every
boundary segment ``ab`` of every polygon.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .homology import homology
from .normal_coords import QUAD_PAIRS, Mode, linked_vertex, mode_of, partner, quad_side
from .surface_builder import Layout, _DSU, instantiate
from .triangulation import Triangulation


class NotASphere(ValueError):
    pass


class NotConnectedSurface(ValueError):
    pass


class CellDecomposition:
    """Cells, polygons and complementary regions of a normal surface."""

    def __init__(self, T: Triangulation, vec):
        if mode_of(T, vec) is not Mode.NORMAL:
            raise ValueError("cells are defined for normal (7t) vectors")
        self.T = T
        self.vec = tuple(vec)
        self.layout = lay = Layout(T, vec)
        self.surface = instantiate(T, vec)
        self.comp_of_disk = {}
        for ci, comp in enumerate(self.surface.components):
            for d in comp:
                self.comp_of_disk[d] = ci
        self.face_arcs = {(t, f): lay.face_arcs(t, f) for t in range(T.size) for f in range(4)}
        self.polygons = {}     # (t, key) -> list of point labels (a cycle)
        self.cell_of = {}      # (t, key) -> cell
        self.cells = []
        for t in range(T.size):
            self._build_tet(t)
        self._regions()

    # -- points --------------------------------------------------------
    def edge_len(self, t, a, b):
        return len(self.layout.edge_points(t, min(a, b), max(a, b)))

    def point(self, t, w, x, r):
        """The rank ``r`` surface point on edge wx counted from ``w``."""
        a, b = min(w, x), max(w, x)
        k = r if w == a else self.edge_len(t, a, b) - 1 - r
        return ("P", t, (a, b), k)

    def disk_points(self, d):
        t, kind, _ = self.layout.disks[d]
        if kind < 4:
            edges = [(kind, x) for x in range(4) if x != kind]
        else:
            p0, p1 = QUAD_PAIRS[kind - 4]
            # consecutive edges of the quad share a face
            edges = [(p0[0], p1[0]), (p0[0], p1[1]), (p0[1], p1[1]), (p0[1], p1[0])]
        out = []
        for a, b in edges:
            a, b = min(a, b), max(a, b)
            out.append(("P", t, (a, b), self.layout.edge_points(t, a, b).index(d)))
        return out

    # -- cells ---------------------------------------------------------
    def _middle_cell_near(self, t, v):
        q = self.layout.quad[t]
        if q is None:
            return ("M", 0)
        kind, n = q
        return ("M", 0) if quad_side(kind, v) == 0 else ("M", n)

    def _build_tet(self, t):
        lay = self.layout
        tri = lay.tri[t]
        q = lay.quad[t]
        cells = [("C", v, i) for v in range(4) for i in range(tri[v])]
        cells += [("M", s) for s in range((q[1] if q else 0) + 1)]
        self.cells += [(t, c) for c in cells]
        for f in range(4):
            arcs = self.face_arcs[(t, f)]
            corners = [w for w in range(4) if w != f]
            for w in corners:
                x, y = [c for c in corners if c != w]
                for i in range(len(arcs[w])):
                    if i == 0:
                        pts = [("V", t, w), self.point(t, w, x, 0), self.point(t, w, y, 0)]
                    else:
                        pts = [self.point(t, w, x, i - 1), self.point(t, w, x, i),
                               self.point(t, w, y, i), self.point(t, w, y, i - 1)]
                    key = ("F", f, (w, i))
                    self.polygons[(t, key)] = pts
                    if i < tri[w]:
                        cell = ("C", w, i)
                    else:
                        kind, n = q
                        r = i - tri[w]
                        cell = ("M", r if quad_side(kind, w) == 0 else n - r)
                    self.cell_of[(t, key)] = cell
            pts = []
            for j, w in enumerate(corners):
                prev, nxt = corners[j - 1], corners[(j + 1) % 3]
                na = len(arcs[w])
                if na:
                    pts += [self.point(t, w, prev, na - 1), self.point(t, w, nxt, na - 1)]
                else:
                    pts.append(("V", t, w))
            key = ("F", f, "center")
            self.polygons[(t, key)] = pts
            if q is None:
                self.cell_of[(t, key)] = ("M", 0)
            else:
                kind, n = q
                u = partner(kind, f)
                self.cell_of[(t, key)] = ("M", n) if quad_side(kind, u) == 0 else ("M", 0)
        for d, (t2, kind, c) in enumerate(lay.disks):
            if t2 != t:
                continue
            pts = self.disk_points(d)
            if kind < 4:
                inner = ("C", kind, c)
                outer = ("C", kind, c + 1) if c + 1 < tri[kind] else self._middle_cell_near(t, kind)
            else:
                inner, outer = ("M", c), ("M", c + 1)
            for side, cell in ((0, inner), (1, outer)):
                self.polygons[(t, ("D", d, side))] = pts
                self.cell_of[(t, ("D", d, side))] = cell

    def _regions(self):
        index = {c: i for i, c in enumerate(self.cells)}
        dsu = _DSU(len(self.cells))
        for (t, f), (t2, f2), perm in self.T.interior_face_pairs():
            for w, ids in self.face_arcs[(t, f)].items():
                for i in range(len(ids)):
                    a = self.cell_of[(t, ("F", f, (w, i)))]
                    b = self.cell_of[(t2, ("F", f2, (perm[w], i)))]
                    dsu.union(index[(t, a)], index[(t2, b)])
            a = self.cell_of[(t, ("F", f, "center"))]
            b = self.cell_of[(t2, ("F", f2, "center"))]
            dsu.union(index[(t, a)], index[(t2, b)])
        roots = {}
        self.region_of = {}
        for c in self.cells:
            r = dsu.find(index[c])
            if r not in roots:
                roots[r] = len(roots)
            self.region_of[c] = roots[r]
        n = len(roots)
        self.region_cells = [[] for _ in range(n)]
        for c in self.cells:
            self.region_cells[self.region_of[c]].append(c)
        # boundary: (component, side count) and vertex tips
        self.region_boundary = [dict() for _ in range(n)]
        self.region_sides = [[] for _ in range(n)]
        for (t, key), cell in self.cell_of.items():
            if key[0] != "D":
                continue
            _, d, side = key
            r = self.region_of[(t, cell)]
            self.region_sides[r].append((d, side))
        for r in range(n):
            counts = {}
            for d, side in self.region_sides[r]:
                ci = self.comp_of_disk[d]
                counts.setdefault(ci, set()).add(side)
            # a component seen from both local sides of some disk counts twice
            sides = set(self.region_sides[r])
            out = {}
            for ci in counts:
                both = any((d, 0) in sides and (d, 1) in sides
                           for d in self.surface.components[ci])
                out[ci] = 2 if both else 1
            self.region_boundary[r] = out
        self.region_tips = [set() for _ in range(n)]
        for t in range(self.T.size):
            for v in range(4):
                if self.layout.tri[t][v]:
                    cell = ("C", v, 0)
                else:
                    cell = self._middle_cell_near(t, v)
                self.region_tips[self.region_of[(t, cell)]].add(self.T.vertex_class(t, v))

    @property
    def num_regions(self):
        return len(self.region_cells)

    def region_containing(self, t, cell):
        return self.region_of[(t, cell)]

    def is_vertex_star(self, r):
        """Region ``r`` is the star of a vertex cut off by its link alone."""
        bd = self.region_boundary[r]
        if len(bd) != 1 or sum(bd.values()) != 1:
            return None
        (ci,) = bd
        v = linked_vertex(self.T, self.surface.component_vectors[ci])
        if v is None or self.region_tips[r] != {v}:
            return None
        # the star contains exactly the tip cells at corners of v
        for (t, c) in self.region_cells[r]:
            if c[0] != "C" or c[2] != 0 or self.T.vertex_class(t, c[1]) != v:
                return None
        return v


@dataclass
class CutResult:
    """Pieces of a triangulation cut along a normal surface."""

    components: list
    tags: list
    boundary_map: list
    whole: Triangulation = field(repr=False)
    labels: list = field(repr=False, default_factory=list)
    side_tets: dict = field(repr=False, default_factory=dict)
    tet_component: list = field(repr=False, default_factory=list)
    cell_piece: dict = field(repr=False, default_factory=dict)

    def boundary_surfaces(self, i):
        return boundary_surfaces(self.components[i])


def _retriangulate(cd: CellDecomposition):
    """Cone every cell; returns (triangulation, labels, side tets)."""
    T = cd.T
    tets = []           # labels (c, p, a, b)
    index = {}          # (t, polykey, i) -> new tet
    by_cell = {}
    for (t, key), pts in sorted(cd.polygons.items(), key=lambda kv: repr(kv[0])):
        cell = cd.cell_of[(t, key)]
        by_cell.setdefault((t, cell), []).append(key)
        for i in range(len(pts)):
            index[(t, key, i)] = len(tets)
            tets.append((("CC", t, cell), ("PC", t, key), pts[i], pts[(i + 1) % len(pts)]))
    # segments within a cell
    seg_owner = {}
    for (t, cell), keys in by_cell.items():
        for key in keys:
            pts = cd.polygons[(t, key)]
            for i in range(len(pts)):
                seg = (t, cell, frozenset((pts[i], pts[(i + 1) % len(pts)])))
                seg_owner.setdefault(seg, []).append((key, i))
    for seg, owners in seg_owner.items():
        if len(owners) != 2:
            raise AssertionError(f"segment {seg} bounds {len(owners)} polygons of its cell")

    adj = [[None] * 4 for _ in tets]
    side_tets = {}
    for (t, key, i), n in index.items():
        c, p, a, b = tets[n]
        cell = cd.cell_of[(t, key)]
        pts = cd.polygons[(t, key)]
        m = len(pts)
        # faces 2 and 3: neighbouring segments of the same polygon
        adj[n][2] = (index[(t, key, (i + 1) % m)], (0, 1, 3, 2))
        adj[n][3] = (index[(t, key, (i - 1) % m)], (0, 1, 3, 2))
        # face 1: the other polygon of the cell through segment ab
        owners = seg_owner[(t, cell, frozenset((a, b)))]
        key2, j = owners[0] if owners[0] != (key, i) else owners[1]
        n2 = index[(t, key2, j)]
        lab2 = tets[n2]
        adj[n][1] = (n2, (0, 1, lab2.index(a), lab2.index(b)))
        # face 0: across the original face, or a boundary
        if key[0] == "D":
            side_tets[(t, key[1], key[2], i)] = n
            continue
        f, region = key[1], key[2]
        if T.adjacent(t, f) is None:
            continue
        t2, perm = T.adjacent(t, f)
        f2 = perm[f]
        region2 = region if region == "center" else (perm[region[0]], region[1])
        key2 = ("F", f2, region2)
        a2, b2 = _map_label(cd, t, f, a), _map_label(cd, t, f, b)
        pts2 = cd.polygons[(t2, key2)]
        m2 = len(pts2)
        j = None
        for k in range(m2):
            if {pts2[k], pts2[(k + 1) % m2]} == {a2, b2}:
                j = k
                break
        if j is None:
            raise AssertionError(f"no matching segment for {(t, key, i)}")
        n2 = index[(t2, key2, j)]
        lab2 = tets[n2]
        adj[n][0] = (n2, (0, 1, lab2.index(a2), lab2.index(b2)))
    return Triangulation(len(tets), adj), tets, side_tets


def _map_label(cd, t, f, label):
    t2, perm = cd.T.adjacent(t, f)
    if label[0] == "V":
        return ("V", t2, perm[label[2]])
    _, _, edge, k = label
    t3, edge2, k2 = cd.layout.map_point(t, f, (t, edge, k))
    return ("P", t3, edge2, k2)


def _split(whole: Triangulation):
    comps = whole.simplex_components()
    pieces = [whole.relabel(c) for c in comps]
    tet_component = [0] * whole.size
    for i, c in enumerate(comps):
        for n in c:
            tet_component[n] = i
    return pieces, tet_component


def cut_along_surface(T: Triangulation, vec):
    """Cut along every component of a normal surface at once."""
    if not T.is_closed():
        raise ValueError("cutting expects a closed triangulation")
    cd = CellDecomposition(T, vec)
    whole, labels, side_tets = _retriangulate(cd)
    pieces, tet_component = _split(whole)
    # tags: a piece made of the tip cells of a vertex cut off by its link
    tags = [("Generic",)] * len(pieces)
    for r in range(cd.num_regions):
        v = cd.is_vertex_star(r)
        if v is None:
            continue
        t, cell = cd.region_cells[r][0]
        n = next(n for n, lab in enumerate(labels) if lab[0] == ("CC", t, cell))
        tags[tet_component[n]] = ("VertexStar", v)
    boundary_map = [[] for _ in pieces]
    for (t, d, side, i), n in side_tets.items():
        entry = (cd.comp_of_disk[d], d, side)
        if entry not in boundary_map[tet_component[n]]:
            boundary_map[tet_component[n]].append(entry)
    for bm in boundary_map:
        bm.sort()
    cell_piece = {}
    for n, lab in enumerate(labels):
        _, t, cell = lab[0]
        cell_piece[(t, cell)] = tet_component[n]
    return CutResult(pieces, tags, boundary_map, whole, labels, side_tets, tet_component,
                     cell_piece)


def cut_along(T: Triangulation, vec) -> CutResult:
    """Cut ``T`` open along a connected normal 2-sphere."""
    if not any(vec):
        raise NotASphere("the empty surface is not a sphere")
    surf = instantiate(T, vec)
    if not surf.is_connected():
        raise NotConnectedSurface(f"surface has {len(surf.components)} components")
    if surf.component_euler[0] != 2 or surf.component_boundary_arcs[0]:
        raise NotASphere(f"surface has Euler characteristic {surf.component_euler[0]}")
    res = cut_along_surface(T, vec)
    if len(res.components) not in (1, 2):
        raise AssertionError("cutting along one sphere gave more than two pieces")
    return res


def boundary_surfaces(component: Triangulation):
    """Connected boundary surfaces of a triangulation, as surface triangulations."""
    if component.is_closed():
        return []
    bd = component.boundary_surface()
    return [bd.relabel(c) for c in bd.simplex_components()]


def reglue(result: CutResult) -> Triangulation:
    """Identify the two sides of every cut disk again."""
    whole = result.whole
    labels = result.labels
    adj = [list(row) for row in whole.adjacency]
    for (t, d, side, i), n in result.side_tets.items():
        if side != 0:
            continue
        n2 = result.side_tets[(t, d, 1, i)]
        _, _, a, b = labels[n]
        lab2 = labels[n2]
        # face 0 is opposite the cell centre on both sides
        perm = (0, 1, lab2.index(a), lab2.index(b))
        adj[n][0] = (n2, perm)
        adj[n2][0] = (n, tuple(perm.index(x) for x in range(4)))
    return Triangulation(whole.size, adj)


def piece_homology(result: CutResult, i):
    return homology(result.components[i], allow_boundary=True)


__all__ = ["CellDecomposition", "CutResult", "cut_along", "cut_along_surface",
           "boundary_surfaces", "reglue", "NotASphere", "NotConnectedSurface"]
