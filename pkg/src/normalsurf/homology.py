"""
Exact integer homology of a triangulation.

Chains live on the skeleton classes of a :class:`Triangulation`; the
boundary of a tetrahedron lists its four faces with signed multiplicity, so
a face class may appear twice in one boundary after self-gluings.
All arithmetic is on Python integers.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .triangulation import Triangulation


class NotClosed(ValueError):
    pass


class NotOrientable(ValueError):
    pass


@dataclass(frozen=True)
class SmithForm:
    """``left * A * right == diag`` with ``left`` and ``right`` unimodular."""

    diagonal: tuple
    rows: int
    cols: int
    left: list | None = None
    right: list | None = None

    def matrix(self):
        D = [[0] * self.cols for _ in range(self.rows)]
        for i, d in enumerate(self.diagonal):
            D[i][i] = d
        return D

    @property
    def rank(self):
        return sum(1 for d in self.diagonal if d)

    @property
    def torsion(self):
        return [d for d in self.diagonal if d > 1]


def matmul(A, B):
    n = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [0] * n
        for k, a in enumerate(row):
            if a:
                for j, b in enumerate(B[k]):
                    if b:
                        acc[j] += a * b
        out.append(acc)
    return out


def _ext_gcd(a, b):
    """(g, s, t) with a*s + b*t = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _axpy(dst, src, q):
    """dst -= q * src for sparse dict rows."""
    for k, v in src.items():
        nv = dst.get(k, 0) - q * v
        if nv:
            dst[k] = nv
        else:
            dst.pop(k, None)


def smith_normal_form(A, witness=True):
    """Smith normal form of an integer matrix given as a list of rows.

    Pivots on an entry of smallest absolute value.  With ``witness`` the
    unimodular ``left`` and ``right`` matrices are returned as dense lists.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    rows = [{j: int(x) for j, x in enumerate(r) if x} for r in A]
    cols = [set() for _ in range(n)]
    for i, r in enumerate(rows):
        for j in r:
            cols[j].add(i)
    U = [{i: 1} for i in range(m)] if witness else None
    Vt = [{j: 1} for j in range(n)] if witness else None

    def row_op(dst, src, q):
        # row dst -= q * row src
        before = set(rows[dst])
        _axpy(rows[dst], rows[src], q)
        after = set(rows[dst])
        for j in before - after:
            cols[j].discard(dst)
        for j in after - before:
            cols[j].add(dst)
        if witness:
            _axpy(U[dst], U[src], q)

    def col_op(dst, src, q):
        # col dst -= q * col src
        for i in list(cols[src]):
            v = rows[i][src]
            nv = rows[i].get(dst, 0) - q * v
            if nv:
                if dst not in rows[i]:
                    cols[dst].add(i)
                rows[i][dst] = nv
            elif dst in rows[i]:
                del rows[i][dst]
                cols[dst].discard(i)
        if witness:
            _axpy(Vt[dst], Vt[src], q)

    active_rows = set(range(m))
    active_cols = set(range(n))
    pivots = []
    while True:
        best = None
        for i in active_rows:
            for j, v in rows[i].items():
                if j in active_cols:
                    a = abs(v)
                    if best is None or a < best[0]:
                        best = (a, i, j)
                        if a == 1:
                            break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, r, c = best
        while True:
            p = rows[r][c]
            clean = True
            for i in list(cols[c]):
                if i == r or i not in active_rows:
                    continue
                q = rows[i][c] // p
                row_op(i, r, q)
                if c in rows[i]:
                    clean = False
            for j in [j for j in rows[r] if j != c and j in active_cols]:
                q = rows[r][j] // p
                col_op(j, c, q)
                if j in rows[r]:
                    clean = False
            if clean:
                break
            # a remainder survived: move to a smaller pivot in this row/column
            cand = [(abs(rows[i][c]), i, c) for i in cols[c] if i in active_rows]
            cand += [(abs(v), r, j) for j, v in rows[r].items() if j in active_cols]
            _, r, c = min(cand)
        pivots.append((r, c))
        active_rows.discard(r)
        active_cols.discard(c)

    # permutation bringing pivots onto the diagonal
    row_order = [r for r, _ in pivots] + sorted(active_rows)
    col_order = [c for _, c in pivots] + sorted(active_cols)
    diag = [rows[r][c] for r, c in pivots]
    if witness:
        U = [U[r] for r in row_order]
        Vt = [Vt[c] for c in col_order]

    k = len(diag)
    # enforce d_i | d_{i+1}
    for i in range(k):
        for j in range(i + 1, k):
            a, b = diag[i], diag[j]
            if b % a == 0:
                continue
            g, s, t = _ext_gcd(a, b)
            if witness:
                # row i += row j; cols (i, j) <- (s*ci + t*cj, -(b/g)*ci + (a/g)*cj);
                # row j -= (b*t/g) row i
                _axpy(U[i], U[j], -1)
                ci, cj = Vt[i], Vt[j]
                new_i = {}
                _axpy(new_i, ci, -s)
                _axpy(new_i, cj, -t)
                new_j = {}
                _axpy(new_j, ci, b // g)
                _axpy(new_j, cj, -(a // g))
                Vt[i], Vt[j] = new_i, new_j
                _axpy(U[j], U[i], b * t // g)
            diag[i], diag[j] = g, a * b // g
    for i in range(k):
        if diag[i] < 0:
            diag[i] = -diag[i]
            if witness:
                U[i] = {x: -y for x, y in U[i].items()}
    if not witness:
        return SmithForm(tuple(diag), m, n)
    left = [[U[i].get(j, 0) for j in range(m)] for i in range(m)]
    right = [[0] * n for _ in range(n)]
    for j in range(n):
        for i, v in Vt[j].items():
            right[i][j] = v
    return SmithForm(tuple(diag), m, n, left, right)


def invariant_factors(A):
    """Nonzero Smith diagonal of ``A`` (no witness)."""
    return smith_normal_form(A, witness=False).diagonal


def is_smith_normal_form(D):
    diag = []
    for i, row in enumerate(D):
        for j, x in enumerate(row):
            if i != j and x:
                return False
            if i == j:
                diag.append(x)
    nz = [d for d in diag if d]
    if any(d < 0 for d in diag):
        return False
    if diag and nz != diag[:len(nz)]:
        return False
    return all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))


def boundary_matrices(T: Triangulation):
    """Class-level boundary matrices ``[d1, d2, d3]`` (d_k: C_k -> C_{k-1}).

    Each matrix is a list of rows indexed by (k-1)-classes.
    """
    nv, ne, nf, nt = T.num_vertices(), T.num_edges(), T.num_faces(), T.size
    d1 = [[0] * ne for _ in range(nv)]
    for e, members in enumerate(T.class_members(1)):
        t, (a, b) = members[0]
        d1[T.vertex_class(t, b)][e] += 1
        d1[T.vertex_class(t, a)][e] -= 1
    d2 = [[0] * nf for _ in range(ne)]
    for f, members in enumerate(T.class_members(2)):
        t, (a, b, c) = members[0]
        for sign, edge in ((1, (b, c)), (-1, (a, c)), (1, (a, b))):
            d2[T.edge_class(t, edge)][f] += sign * T.edge_sign(t, edge)
    d3 = [[0] * nt for _ in range(nf)]
    for t in range(nt):
        for i in range(4):
            d3[T.face_class(t, i)][t] += (-1) ** i * T.face_sign(t, i)
    return [d1, d2, d3]


@dataclass(frozen=True)
class HomologyGroups:
    """Free ranks and torsion coefficients of H_0 .. H_3."""

    ranks: tuple
    torsion: tuple

    def group(self, k):
        return self.ranks[k], list(self.torsion[k])

    def describe(self, k):
        parts = []
        if self.ranks[k] == 1:
            parts.append("Z")
        elif self.ranks[k] > 1:
            parts.append(f"Z^{self.ranks[k]}")
        parts += [f"Z/{d}" for d in self.torsion[k]]
        return " + ".join(parts) if parts else "0"

    def is_sphere_homology(self):
        return self.ranks == (1, 0, 0, 1) and not any(self.torsion)

    def euler_characteristic(self):
        return sum((-1) ** k * r for k, r in enumerate(self.ranks))

    def as_dict(self):
        return {f"H{k}": {"rank": self.ranks[k], "torsion": list(self.torsion[k])}
                for k in range(4)}


def homology(T: Triangulation, allow_boundary=False):
    """Integer homology H_0..H_3 of ``T``.

    Raises :class:`NotClosed` unless ``T`` is closed or ``allow_boundary``.
    """
    if not allow_boundary and not T.is_closed():
        raise NotClosed("homology gate requires a closed triangulation")
    dims = [T.num_vertices(), T.num_edges(), T.num_faces(), T.size]
    snfs = [smith_normal_form(d, witness=False) if d and d[0] else None
            for d in boundary_matrices(T)]
    ranks_d = [0] + [s.rank if s else 0 for s in snfs] + [0]
    ranks = []
    torsion = []
    for k in range(4):
        ranks.append(dims[k] - ranks_d[k] - ranks_d[k + 1])
        tors = snfs[k].torsion if k < 3 and snfs[k] else []
        torsion.append(tuple(tors))
    return HomologyGroups(tuple(ranks), tuple(torsion))


def is_homology_sphere(T: Triangulation):
    if not T.is_closed():
        raise NotClosed("homology sphere test requires a closed triangulation")
    if not T.is_orientable():
        raise NotOrientable("homology sphere test requires an orientable triangulation")
    return homology(T).is_sphere_homology()
