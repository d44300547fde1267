"""
Exact enumeration of the solution cone of the matching equations.

Admissibility is handled cell by cell: a cell fixes, for every tetrahedron,
which quad kind (or, in almost normal mode, which octagon) may be non-zero.
Inside a cell the admissible solutions form the monoid
``{x >= 0 : A x = 0}`` on the cell's columns, and an element is irreducible
in the cell exactly when it is irreducible among all admissible solutions,
so the union of the cell bases is the set of fundamental solutions.

Two routines work on a single cell:

* :func:`cone_hilbert_basis` adds one equation at a time.  For each new
  equation the current basis is split by the sign of the equation and sums of
  positive and negative elements are generated in order of increasing total
  degree, keeping only elements that are irreducible in their half-space.
* :func:`cone_extreme_rays` is the double description method.
"""
from __future__ import annotations

import hashlib
import heapq
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from itertools import product
from math import gcd

from .normal_coords import Mode, MatchingSystem, is_admissible, matching_matrix, weight
from .surface_builder import instantiate, is_two_sphere
from .triangulation import Triangulation

DEFAULT_BUDGET = 10 ** 6


class ResourceBudgetExceeded(RuntimeError):
    pass


class SolutionKind(Enum):
    VERTEX = "vertex"
    HILBERT = "hilbert"


class SphereKind(Enum):
    NORMAL = "normal"
    OCTAGONAL = "octagonal"


@dataclass(frozen=True)
class SolutionSet:
    basis: tuple
    kind: SolutionKind
    mode: Mode | None
    provenance: str
    cells: int = 1

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def __contains__(self, vec):
        return tuple(vec) in set(self.basis)


def system_hash(rows, ncols):
    h = hashlib.sha256(repr((ncols, [list(r) for r in rows])).encode())
    return h.hexdigest()[:16]


def _primitive(vec):
    g = 0
    for x in vec:
        g = gcd(g, x)
    return tuple(x // g for x in vec) if g > 1 else tuple(vec)


def _merge_equal_variables(rows, n):
    """Substitute x_i = x_j for equations with one +1 and one -1 entry.

    Returns (reduced rows, number of reduced variables, lift) where
    ``lift[i]`` is the reduced variable carrying original variable ``i``.
    """
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for row in rows:
        nz = [(j, a) for j, a in enumerate(row) if a]
        if len(nz) == 2 and nz[0][1] == -nz[1][1]:
            a, b = find(nz[0][0]), find(nz[1][0])
            if a != b:
                parent[max(a, b)] = min(a, b)
    reps = sorted({find(i) for i in range(n)})
    index = {r: k for k, r in enumerate(reps)}
    lift = [index[find(i)] for i in range(n)]
    m = len(reps)
    new_rows = set()
    for row in rows:
        nr = [0] * m
        for j, a in enumerate(row):
            if a:
                nr[lift[j]] += a
        if any(nr):
            g = 0
            for x in nr:
                g = gcd(g, x)
            nr = tuple(x // g for x in nr)
            if nr[next(i for i, x in enumerate(nr) if x)] < 0:
                nr = tuple(-x for x in nr)
            new_rows.add(nr)
    return sorted(new_rows), m, lift


def _leq(a, b):
    return all(x <= y for x, y in zip(a, b))


def _hyperplane_section(gens, a, budget):
    """Hilbert basis of ``{x in M : a.x = 0}`` from a Hilbert basis of M."""
    def val(x):
        return sum(c * y for c, y in zip(a, x) if c)

    pos, neg, zero = [], [], []
    for g in gens:
        v = val(g)
        (pos if v > 0 else neg if v < 0 else zero).append((g, v))
    if not pos or not neg:
        return [g for g, _ in zero]
    heap = []
    seen = set(g for g in gens)
    counter = 0

    def push(x, y):
        nonlocal counter
        z = tuple(p + q for p, q in zip(x, y))
        if z not in seen:
            seen.add(z)
            counter += 1
            heapq.heappush(heap, (sum(z), z))

    for p, _ in pos:
        for q, _ in neg:
            push(p, q)
    while heap:
        if len(pos) + len(neg) + len(zero) + len(heap) > budget:
            raise ResourceBudgetExceeded(
                f"more than {budget} intermediate vectors in Hilbert basis completion")
        _, z = heapq.heappop(heap)
        v = val(z)
        if v > 0:
            reducers = pos + zero
            reducible = any(w <= v and _leq(x, z) for x, w in reducers)
        elif v < 0:
            reducers = neg + zero
            reducible = any(w >= v and _leq(x, z) for x, w in reducers)
        else:
            reducible = any(_leq(x, z) for x, _ in zero)
        if reducible:
            continue
        if v > 0:
            pos.append((z, v))
            for q, _ in neg:
                push(z, q)
        elif v < 0:
            neg.append((z, v))
            for p, _ in pos:
                push(p, z)
        else:
            zero.append((z, v))
    return [g for g, _ in zero]


def cone_hilbert_basis(rows, n, budget=DEFAULT_BUDGET):
    """Hilbert basis of ``{x in Z^n : x >= 0, rows . x = 0}``."""
    red_rows, m, lift = _merge_equal_variables(rows, n)
    gens = [tuple(1 if j == i else 0 for j in range(m)) for i in range(m)]
    # sparse rows first keeps the intermediate sets small
    for row in sorted(red_rows, key=lambda r: (sum(1 for x in r if x), r)):
        gens = _hyperplane_section(gens, row, budget)
        if not gens:
            break
    out = {tuple(g[lift[i]] for i in range(n)) for g in gens}
    return sorted(out)


def cone_extreme_rays(rows, n):
    """Extreme rays of ``{x >= 0, rows . x = 0}`` as primitive integer vectors."""
    red_rows, m, lift = _merge_equal_variables(rows, n)
    rays = [tuple(1 if j == i else 0 for j in range(m)) for i in range(m)]
    for a in sorted(red_rows, key=lambda r: (sum(1 for x in r if x), r)):
        vals = [sum(c * y for c, y in zip(a, r) if c) for r in rays]
        pos = [r for r, v in zip(rays, vals) if v > 0]
        neg = [r for r, v in zip(rays, vals) if v < 0]
        new = [r for r, v in zip(rays, vals) if v == 0]
        zsets = [frozenset(i for i, x in enumerate(r) if not x) for r in rays]
        pv = {r: v for r, v in zip(rays, vals)}
        for p in pos:
            zp = frozenset(i for i, x in enumerate(p) if not x)
            for q in neg:
                common = zp & frozenset(i for i, x in enumerate(q) if not x)
                # adjacency: no third ray vanishes on all of ``common``
                adjacent = True
                for r, zr in zip(rays, zsets):
                    if r is p or r is q:
                        continue
                    if common <= zr:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vp, vq = pv[p], pv[q]
                ray = tuple(-vq * x + vp * y for x, y in zip(p, q))
                new.append(_primitive(ray))
        rays = sorted(set(new))
        if not rays:
            break
    out = {_primitive(tuple(r[lift[i]] for i in range(n))) for r in rays}
    return sorted(out)


def _cells(sys: MatchingSystem, ntets):
    """Column subsets, one per admissibility cell."""
    mode = sys.mode
    if mode is None:
        yield tuple(range(sys.ncols))
        return
    b = mode.block
    tris = [[b * t + v for v in range(4)] for t in range(ntets)]
    if mode is Mode.NORMAL:
        for choice in product(range(3), repeat=ntets):
            cols = []
            for t, q in enumerate(choice):
                cols += tris[t] + [b * t + 4 + q]
            yield tuple(cols)
        return
    for oct_tet in range(ntets):
        for k in range(3):
            others = [t for t in range(ntets) if t != oct_tet]
            for choice in product(range(3), repeat=len(others)):
                cols = list(tris[oct_tet]) + [b * oct_tet + 7 + k]
                for t, q in zip(others, choice):
                    cols += tris[t] + [b * t + 4 + q]
                yield tuple(sorted(cols))


def _solve_cell(args):
    rows, ncols, cols, what, budget = args
    sub = []
    for row in rows:
        r = [row[c] for c in cols]
        if any(r):
            sub.append(r)
    # columns never constrained by an equation in this cell are free unit rays
    if what == "hilbert":
        local = cone_hilbert_basis(sub, len(cols), budget)
    else:
        local = cone_extreme_rays(sub, len(cols))
    out = []
    for x in local:
        full = [0] * ncols
        for c, val in zip(cols, x):
            full[c] = val
        out.append(tuple(full))
    return out


def _enumerate(sys: MatchingSystem, what, budget, workers):
    ncols = sys.ncols
    ntets = ncols // sys.mode.block if sys.mode else 0
    cells = list(_cells(sys, ntets))
    tasks = [(sys.rows, ncols, cols, what, budget) for cols in cells]
    results = set()
    if workers and workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_solve_cell, tasks, chunksize=max(1, len(tasks) // (4 * workers))):
                results.update(part)
    else:
        for task in tasks:
            results.update(_solve_cell(task))
    if sys.mode is Mode.ALMOST:
        results = {x for x in results if is_admissible(x, Mode.ALMOST)}
    results.discard(tuple([0] * ncols))
    return tuple(sorted(results)), len(cells)


def vertex_solutions(sys: MatchingSystem, budget=DEFAULT_BUDGET, workers=1):
    """Admissible extremal rays, scaled to primitive integer vectors."""
    basis, ncells = _enumerate(sys, "vertex", budget, workers)
    return SolutionSet(basis, SolutionKind.VERTEX, sys.mode,
                       system_hash(sys.rows, sys.ncols), ncells)


def hilbert_basis(sys: MatchingSystem, budget=DEFAULT_BUDGET, workers=1):
    """Admissible fundamental solutions (irreducible admissible solutions)."""
    basis, ncells = _enumerate(sys, "hilbert", budget, workers)
    return SolutionSet(basis, SolutionKind.HILBERT, sys.mode,
                       system_hash(sys.rows, sys.ncols), ncells)


def plain_system(rows, ncols=None):
    """A system with no admissibility cells (the whole non-negative orthant)."""
    if ncols is None:
        ncols = len(rows[0])
    return MatchingSystem(rows, ncols, mode=None)


def find_spheres(T: Triangulation, basis, kind=SphereKind.NORMAL):
    """2-spheres among the members of ``basis`` (and their components).

    Sorted by weight, then by coordinates.
    """
    found = set()
    for vec in basis:
        if kind is SphereKind.NORMAL:
            if len(vec) != 7 * T.size:
                continue
            surf = instantiate(T, vec)
            for cv, chi, bd in zip(surf.component_vectors, surf.component_euler,
                                   surf.component_boundary_arcs):
                if chi == 2 and bd == 0:
                    found.add(cv)
        else:
            if len(vec) != 10 * T.size or not is_admissible(vec, Mode.ALMOST):
                continue
            if is_two_sphere(T, vec):
                found.add(tuple(vec))
    return sorted(found, key=lambda v: (weight(T, v), v))


def normal_hilbert_basis(T: Triangulation, budget=DEFAULT_BUDGET, workers=1):
    return hilbert_basis(matching_matrix(T, Mode.NORMAL), budget, workers)


def almost_normal_hilbert_basis(T: Triangulation, budget=DEFAULT_BUDGET, workers=1):
    return hilbert_basis(matching_matrix(T, Mode.ALMOST), budget, workers)
