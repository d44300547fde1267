"""
Normal curves on triangulated surfaces and PL geodesics.

A normal curve meets each triangle in arcs joining distinct edges.  Its
coordinates are three numbers per triangle, the number of arcs cutting off
each corner.  The weight is the number of points where the curve meets the
edges.

Deformations are vertex slides: a strand of the curve that runs innermost
around a vertex ``w`` (closest to ``w`` in every triangle it passes) is
pushed across ``w`` and replaced by the path around the other side of
``w``; arcs that then double back across an edge are cancelled in pairs.
A slide across ``w`` moves the curve into the side of the surface that
contained ``w``.

A curve is an unstable PL geodesic when both of its sides admit a weight
decreasing deformation, and a stable one when every single slide increases
weight.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from .surface_builder import _DSU
from .triangulation import SurfaceTriangulation


class NotNormal(ValueError):
    pass


class CurveStatus(Enum):
    STABLE = "StablePLGeodesic"
    UNSTABLE = "UnstablePLGeodesic"
    NORMAL_NOT_GEODESIC = "NormalNotGeodesic"
    NOT_NORMAL = "NotNormal"
    UNDETERMINED = "UndeterminedWithinDepth"


def _others(v):
    return [x for x in range(3) if x != v]


def _corner_of(e_in, e_out):
    """The corner cut off by an arc from edge ``e_in`` to edge ``e_out``."""
    return 3 - e_in - e_out


# -- coordinates ------------------------------------------------------

def edge_counts(F: SurfaceTriangulation, x, i, e):
    """Points of the curve on edge ``e`` (opposite corner ``e``) of triangle ``i``."""
    a, b = _others(e)
    return x[3 * i + a] + x[3 * i + b]


def matching_rows(F: SurfaceTriangulation):
    """One equation per glued edge pair: equal crossing counts on both sides."""
    rows = []
    for g in F.gluings():
        (i, e), (j, f) = g.source, g.target
        row = [0] * (3 * F.size)
        for v in _others(e):
            row[3 * i + v] += 1
        for v in _others(f):
            row[3 * j + v] -= 1
        rows.append(row)
    return rows


def check_vector(F: SurfaceTriangulation, x):
    x = tuple(int(v) for v in x)
    if len(x) != 3 * F.size:
        raise NotNormal(f"expected {3 * F.size} coordinates, got {len(x)}")
    if any(v < 0 for v in x):
        raise NotNormal("negative arc count")
    for row in matching_rows(F):
        if sum(a * v for a, v in zip(row, x)):
            raise NotNormal("crossing counts differ across a glued edge")
    return x


def edge_weights(F: SurfaceTriangulation, x):
    out = []
    for members in F.class_members(1):
        i, (a, b) = members[0]
        e = 3 - a - b
        out.append(edge_counts(F, x, i, e))
    return out


def curve_weight(F: SurfaceTriangulation, x):
    return sum(edge_weights(F, x))


def from_arcs(F: SurfaceTriangulation, arcs):
    """Coordinates from a list of arcs ``(triangle, entry edge, exit edge)``.

    An arc entering and leaving through the same edge doubles back and is
    rejected.
    """
    x = [0] * (3 * F.size)
    for i, e_in, e_out in arcs:
        if e_in == e_out:
            raise NotNormal(f"arc in triangle {i} doubles back on edge {e_in}")
        x[3 * i + _corner_of(e_in, e_out)] += 1
    return check_vector(F, x)


# -- tracing ----------------------------------------------------------

def _point_index(x, i, e, v, r):
    """Index (from the lower endpoint) of the rank ``r`` point from ``v`` on edge ``e``."""
    a, b = _others(e)
    n = x[3 * i + a] + x[3 * i + b]
    return r if v == a else n - 1 - r


def _arc_at_point(x, i, e, k):
    a, b = _others(e)
    n = x[3 * i + a] + x[3 * i + b]
    if k < x[3 * i + a]:
        return (i, a, k)
    return (i, b, n - 1 - k)


def _across(F, x, i, e, k):
    j, perm = F.adjacent(i, e)
    a, b = _others(e)
    f = perm[e]
    n = x[3 * i + a] + x[3 * i + b]
    k2 = k if perm[a] < perm[b] else n - 1 - k
    return j, f, k2


def trace_components(F: SurfaceTriangulation, x):
    """The curve as closed walks: lists of arcs ``(tri, corner, rank, e_in, e_out)``."""
    x = check_vector(F, x)
    seen = set()
    walks = []
    for i in range(F.size):
        for v in range(3):
            for r in range(x[3 * i + v]):
                if (i, v, r) in seen:
                    continue
                walk = []
                cur = (i, v, r)
                e_in, e_out = _others(v)
                while True:
                    ci, cv, cr = cur
                    seen.add(cur)
                    walk.append((ci, cv, cr, e_in, e_out))
                    k = _point_index(x, ci, e_out, cv, cr)
                    j, f, k2 = _across(F, x, ci, e_out, k)
                    nxt = _arc_at_point(x, j, f, k2)
                    n_in = f
                    n_out = 3 - nxt[1] - f
                    if nxt == (i, v, r):
                        break
                    cur, e_in, e_out = nxt, n_in, n_out
                walks.append(walk)
    return walks


def is_connected_curve(F, x):
    return any(x) and len(trace_components(F, x)) == 1


def sides(F: SurfaceTriangulation, x):
    """Vertex classes in each complementary region of the curve."""
    x = check_vector(F, x)
    regions = {}
    dsu = _DSU()

    def reg(key):
        if key not in regions:
            regions[key] = dsu.add()
        return regions[key]

    def segment_region(i, e, s):
        a, b = _others(e)
        n = x[3 * i + a] + x[3 * i + b]
        if s < x[3 * i + a]:
            return (i, a, s)
        if n - s < x[3 * i + b]:
            return (i, b, n - s)
        return (i, "c")

    for i in range(F.size):
        reg((i, "c"))
        for v in range(3):
            for r in range(x[3 * i + v]):
                reg((i, v, r))
    for g in F.gluings():
        (i, e), (j, f) = g.source, g.target
        perm = g.perm
        a, b = _others(e)
        n = x[3 * i + a] + x[3 * i + b]
        for s in range(n + 1):
            s2 = s if perm[a] < perm[b] else n - s
            dsu.union(reg(segment_region(i, e, s)), reg(segment_region(j, f, s2)))
    out = {}
    for i in range(F.size):
        for v in range(3):
            key = (i, v, 0) if x[3 * i + v] else (i, "c")
            root = dsu.find(reg(key))
            out.setdefault(root, set()).add(F.vertex_class(i, v))
    roots = sorted({dsu.find(r) for r in regions.values()})
    return [frozenset(out.get(r, ())) for r in roots]


# -- slides -----------------------------------------------------------

@dataclass(frozen=True)
class Move:
    """A slide of the curve across ``vertex``."""

    vertex: int
    before: tuple
    after: tuple
    delta: int

    def as_dict(self):
        return {"vertex": self.vertex, "after": list(self.after), "delta": self.delta}


def _darts_to_vector(F, darts):
    x = [0] * (3 * F.size)
    n = len(darts)
    for idx in range(n):
        pi, pe = darts[idx - 1]
        i, e = darts[idx]
        j, perm = F.adjacent(pi, pe)
        assert j == i
        e_in = perm[pe]
        if e_in == e:
            raise AssertionError("walk doubles back after reduction")
        x[3 * i + _corner_of(e_in, e)] += 1
    return tuple(x)


def _reduce(F, darts):
    """Cancel consecutive crossings of the same edge in opposite directions."""
    stack = []
    for d in darts:
        if stack:
            pi, pe = stack[-1]
            j, perm = F.adjacent(pi, pe)
            if d == (j, perm[pe]):
                stack.pop()
                continue
        stack.append(d)
    # cyclic reduction
    while len(stack) >= 2:
        pi, pe = stack[-1]
        j, perm = F.adjacent(pi, pe)
        if stack[0] == (j, perm[pe]):
            stack.pop()
            stack.pop(0)
        else:
            break
    return stack


def _around(F, start_tri, corner, edge, stop):
    """Darts walking around a vertex from ``start_tri`` leaving by ``edge``.

    Stops on entering ``stop = (tri, corner, entry edge)``.
    """
    out = []
    i, c, e = start_tri, corner, edge
    if (i, c, 3 - c - e) == stop:
        # the two ends already meet in this triangle
        return out
    for _ in range(3 * F.size + 1):
        out.append((i, e))
        j, perm = F.adjacent(i, e)
        c2, e_in = perm[c], perm[e]
        if (j, c2, e_in) == stop:
            return out
        i, c, e = j, c2, 3 - c2 - e_in
    raise AssertionError("walk around a vertex did not close")


def slide_moves(F: SurfaceTriangulation, x):
    """All single vertex slides of a connected normal curve."""
    x = check_vector(F, x)
    walks = trace_components(F, x)
    if len(walks) != 1:
        raise ValueError("slides are defined for connected curves")
    walk = walks[0]
    n = len(walk)
    darts = [(a[0], a[4]) for a in walk]
    w0 = n

    def cont(j):
        # does arc j+1 continue around the corner of arc j?
        i, v, _, _, e_out = walk[j]
        t2, perm = F.adjacent(i, e_out)
        return walk[(j + 1) % n][1] == perm[v]

    moves = []
    if all(cont(j) for j in range(n)):
        if all(a[2] == 0 for a in walk):
            w = F.vertex_class(walk[0][0], walk[0][1])
            moves.append(Move(w, x, (0,) * len(x), -w0))
        return moves

    # maximal runs of arcs around one vertex
    start = next(j for j in range(n) if not cont(j - 1))
    runs = []
    j = start
    while True:
        s = j
        while cont(j % n):
            j += 1
        runs.append((s % n, j % n))
        j += 1
        if j % n == start:
            break
    seen = set()
    for s, t in runs:
        if (s, t) in seen:
            continue
        seen.add((s, t))
        k = (t - s) % n + 1
        idx = [(s + q) % n for q in range(k)]
        if any(walk[q][2] != 0 for q in idx):
            continue
        p = (s - 1) % n
        P, e0 = darts[p]
        T1, perm1 = F.adjacent(P, e0)
        cP = perm1.index(walk[s][1])
        Tk, _, _, _, ek = walk[t]
        N, permk = F.adjacent(Tk, ek)
        cN, hN = permk[walk[t][1]], permk[ek]
        stop = (N, cN, 3 - cN - hN)
        new = _around(F, P, cP, 3 - cP - e0, stop)
        rest = [darts[(t + 1 + q) % n] for q in range(n - k - 1)]
        moves.append(_make_move(F, x, F.vertex_class(P, cP), new + rest, w0))

    # slides of a single crossing next to a vertex the curve does not turn around
    for j in range(n):
        i, v, r, _, e_out = walk[j]
        a, b = _others(e_out)
        nxt = walk[(j + 1) % n]
        N, perm = F.adjacent(i, e_out)
        npts = x[3 * i + a] + x[3 * i + b]
        k_from_low = _point_index(x, i, e_out, v, r)
        for w in (a, b):
            if w == v or nxt[1] == perm[w]:
                continue
            rank = k_from_low if w == a else npts - 1 - k_from_low
            if rank != 0:
                continue
            stop = (N, perm[w], 3 - perm[w] - perm[e_out])
            new = _around(F, i, w, 3 - w - e_out, stop)
            rest = [darts[(j + 1 + q) % n] for q in range(n - 1)]
            moves.append(_make_move(F, x, F.vertex_class(i, w), new + rest, w0))
    # deterministic order, no duplicates
    uniq = {}
    for m in moves:
        uniq.setdefault((m.vertex, m.after), m)
    return sorted(uniq.values(), key=lambda m: (m.delta, m.vertex, m.after))


def _make_move(F, x, w, darts, w0):
    red = _reduce(F, darts)
    after = _darts_to_vector(F, red) if red else (0,) * len(x)
    return Move(w, tuple(x), after, len(red) - w0)


def replay(F: SurfaceTriangulation, x, moves):
    """Re-apply recorded moves; returns the list of weights along the way.

    Raises ValueError when a move is not available from the current curve.
    """
    cur = check_vector(F, x)
    weights = [curve_weight(F, cur)]
    for m in moves:
        vertex, after = (m.vertex, m.after) if isinstance(m, Move) else (m["vertex"], tuple(m["after"]))
        if not any(cur):
            raise ValueError("no moves from the empty curve")
        options = {(mv.vertex, mv.after) for mv in slide_moves(F, cur)}
        if (vertex, after) not in options:
            raise ValueError(f"slide across {vertex} to {list(after)} is not available")
        cur = after
        weights.append(curve_weight(F, cur))
    return weights


# -- classification ---------------------------------------------------

@dataclass
class CurveClassification:
    status: CurveStatus
    weight: int
    sides: list
    witnesses: dict = field(default_factory=dict)
    depth: int = 0
    undetermined: bool = False
    one_step: list = field(default_factory=list)

    def as_dict(self):
        return {
            "status": self.status.value,
            "weight": self.weight,
            "sides": [sorted(s) for s in self.sides],
            "witnesses": {str(k): [m.as_dict() for m in v] for k, v in self.witnesses.items()},
            "depth": self.depth,
            "undetermined": self.undetermined,
            "one_step_deltas": [m.delta for m in self.one_step],
        }


def _decreasing_witness(F, x, target, depth):
    """BFS for slides into the side holding ``target`` that end below weight(x).

    Every intermediate curve has weight at most weight(x).  Returns
    (moves or None, exhausted).
    """
    w0 = curve_weight(F, x)
    start = (x, frozenset(target))
    parent = {start: None}
    queue = deque([(start, 0)])
    exhausted = True
    while queue:
        (cur, tgt), d = queue.popleft()
        if d >= depth:
            exhausted = False
            continue
        if not any(cur):
            continue
        for m in slide_moves(F, cur):
            if m.vertex not in tgt:
                continue
            w = curve_weight(F, m.after)
            if w > w0:
                continue
            state = (m.after, tgt - {m.vertex})
            if state in parent:
                continue
            parent[state] = ((cur, tgt), m)
            if w < w0:
                path = []
                s = state
                while parent[s] is not None:
                    prev, mv = parent[s]
                    path.append(mv)
                    s = prev
                return path[::-1], True
            queue.append((state, d + 1))
    return None, exhausted


def classify(F: SurfaceTriangulation, x, depth=None) -> CurveClassification:
    """Stable / unstable PL geodesic, or neither, for a connected normal curve."""
    x = check_vector(F, x)
    if not F.is_closed():
        raise ValueError("classification needs a closed surface")
    if not is_connected_curve(F, x):
        raise ValueError("classification needs a connected non-empty curve")
    parts = sides(F, x)
    if len(parts) != 2:
        raise ValueError("only separating curves are supported")
    w = curve_weight(F, x)
    if depth is None:
        depth = w
    one_step = slide_moves(F, x)
    res = CurveClassification(CurveStatus.NORMAL_NOT_GEODESIC, w, parts, {}, depth,
                              False, one_step)
    complete = True
    for k, side in enumerate(parts):
        path, exhausted = _decreasing_witness(F, x, side, depth)
        if path is not None:
            res.witnesses[k] = path
        elif not exhausted:
            complete = False
    if len(res.witnesses) == 2:
        res.status = CurveStatus.UNSTABLE
    elif all(m.delta > 0 for m in one_step):
        res.status = CurveStatus.STABLE
    elif not complete and len(res.witnesses) == 1:
        # the other side might still decrease beyond the depth bound
        res.status = CurveStatus.UNDETERMINED
        res.undetermined = True
    return res


# -- enumeration ------------------------------------------------------

def enumerate_normal_curves(F: SurfaceTriangulation, max_weight):
    """Connected normal curves of weight at most ``max_weight``.

    Curves are generated from their edge weights: inside a triangle the arc
    counts are determined by the three crossing numbers.
    """
    if not F.is_closed():
        raise ValueError("enumeration needs a closed surface")
    ne = F.num_edges()
    tri_edges = [[F.edge_class(i, e) for e in range(3)] for i in range(F.size)]
    found = []

    def to_vector(wts):
        x = []
        for i in range(F.size):
            we = [wts[c] for c in tri_edges[i]]
            for v in range(3):
                twice = sum(we[e] for e in range(3) if e != v) - we[v]
                if twice < 0 or twice % 2:
                    return None
                x.append(twice // 2)
        return tuple(x)

    def rec(k, wts, budget):
        if k == ne:
            if not any(wts):
                return
            x = to_vector(wts)
            if x is not None and is_connected_curve(F, x):
                found.append(x)
            return
        for val in range(budget + 1):
            wts.append(val)
            rec(k + 1, wts, budget - val)
            wts.pop()

    rec(0, [], max_weight)
    return sorted(found, key=lambda x: (curve_weight(F, x), x))


def is_vertex_link_curve(F, x):
    """True iff the curve is the link of a single vertex."""
    walks = trace_components(F, x)
    if len(walks) != 1:
        return False
    verts = {F.vertex_class(a[0], a[1]) for a in walks[0]}
    return len(verts) == 1 and len(walks[0]) == len(F.class_members(0)[next(iter(verts))])
