"""
Acceptance criteria.  Each test prints one PASS/FAIL line with its timing.

Run on its own with ``python tests/test_acceptance.py`` or through pytest.
"""
import random
import sys
import time
from contextlib import contextmanager
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from sympy import Matrix  # noqa: E402

from normalsurf.cli import corpus_names, corpus_path, load  # noqa: E402
from normalsurf.cutting import cut_along, reglue  # noqa: E402
from normalsurf.enumeration import _cells, hilbert_basis, plain_system  # noqa: E402
from normalsurf.homology import (boundary_matrices, homology, is_homology_sphere,  # noqa: E402
                                 is_smith_normal_form, matmul, smith_normal_form)
from normalsurf.normal_coords import (Mode, euler_characteristic, is_admissible,  # noqa: E402
                                      matching_matrix, vertex_linking_vector)
from normalsurf.plcurve import (CurveStatus, classify, curve_weight,  # noqa: E402
                                enumerate_normal_curves, is_vertex_link_curve)
from normalsurf.recognition import Verdict, recognize, verify_certificate  # noqa: E402
from normalsurf.surface_builder import instantiate  # noqa: E402
from normalsurf.triangulation import Triangulation  # noqa: E402
from oracles import brute_force_hilbert_basis, cell_kernel_points  # noqa: E402


# result lines; under pytest they are printed in the terminal summary
RESULTS = []


def _out(line):
    RESULTS.append(line)
    if __name__ == "__main__":
        print(line, flush=True)


@contextmanager
def criterion(n, text, limit=None):
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        _out(f"FAIL criterion {n}: {text} ({time.perf_counter() - start:.2f}s): {exc!r}")
        raise
    took = time.perf_counter() - start
    if limit is not None and took >= limit:
        _out(f"FAIL criterion {n}: {text} ({took:.2f}s, limit {limit}s)")
        raise AssertionError(f"criterion {n} took {took:.2f}s, limit {limit}s")
    _out(f"PASS criterion {n}: {text} ({took:.2f}s)")


def bundled():
    return {name: load(corpus_path(name)) for name in corpus_names()}


def bundled_3d():
    return {k: T for k, T in bundled().items() if isinstance(T, Triangulation)}


def test_1_recognize_boundary_4_simplex():
    T = load(corpus_path("s3_boundary4simplex"))
    with criterion(1, "boundary of the 4-simplex is YesSphere with a verified certificate", 60):
        assert T.size == 5
        r = recognize(T)
        assert r.verdict is Verdict.YES_SPHERE, r.reason
        assert verify_certificate(T, r)
        assert verify_certificate(T, r.to_dict())


def test_2_recognize_lens_space():
    T = load(corpus_path("lens_3_1"))
    with criterion(2, "2-tetrahedron L(3,1) is NoSphere with H1 = Z/3", 5):
        assert T.size == 2
        r = recognize(T)
        assert r.verdict is Verdict.NO_SPHERE
        assert r.reason == "homology: H1 = Z/3"
        assert r.step("homology")["groups"]["H1"] == {"rank": 0, "torsion": [3]}
        assert verify_certificate(T, r)


def test_3_matching_matrix_shape():
    with criterion(3, "matching matrix is 6t x 7t and contains every vertex link"):
        closed = {k: T for k, T in bundled_3d().items() if T.is_closed()}
        assert len(closed) >= 10
        for name, T in closed.items():
            M = matching_matrix(T)
            assert M.shape == (6 * T.size, 7 * T.size), name
            for v in range(T.num_vertices()):
                assert M.contains(vertex_linking_vector(T, v)), (name, v)


def random_systems(count, seed=2024):
    """Random systems with <= 8 variables and <= 4 equations whose box oracle is feasible.

    Sizes cycle through 3..8 variables and 1..4 equations.
    """
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        k = len(out)
        n = 3 + k % 6
        m = min(1 + k % 4, n - 1)
        rows = [[rng.choice([-2, -1, 0, 0, 1, 1, 2]) for _ in range(n)] for _ in range(m)]
        if not all(any(r) for r in rows):
            continue
        hb = hilbert_basis(plain_system(rows, n)).basis
        if not hb:
            continue
        bound = max(max(h) for h in hb) + 1
        if (bound + 1) ** n > 3 * 10 ** 6:
            continue
        out.append((rows, n, hb, bound))
    return out


def test_4_hilbert_basis_oracle():
    with criterion(4, "Hilbert basis equals the brute-force minimal solutions", 600):
        systems = random_systems(24)
        assert len(systems) >= 20
        assert any(n == 8 for _, n, _, _ in systems)
        assert any(len(rows) == 4 for rows, _, _, _ in systems)
        for rows, n, hb, bound in systems:
            assert list(hb) == brute_force_hilbert_basis(rows, n, bound), rows


def test_5_euler_and_round_trip_sweep():
    with criterion(5, "linear and instantiated Euler characteristics agree, coordinates <= 3",
                   600):
        checked = 0
        for name, T in bundled_3d().items():
            if T.size > 3:
                continue
            for mode in (Mode.NORMAL, Mode.ALMOST):
                M = matching_matrix(T, mode)
                for x in cell_kernel_points(M.rows, M.ncols, list(_cells(M, T.size)), 3):
                    if not is_admissible(x, mode):
                        continue
                    s = instantiate(T, x)
                    assert s.euler_characteristic == euler_characteristic(T, x), (name, x)
                    assert s.recovered_vector() == tuple(x), (name, x)
                    checked += 1
        assert checked > 1000


def test_6_pl_geodesics_on_tetrahedron_boundary():
    F = load(corpus_path("tetra_boundary"))
    with criterion(6, "tetrahedron boundary: 4 vertex links, 3 unstable quadrilaterals", 10):
        curves = enumerate_normal_curves(F, 4)
        links = [c for c in curves if curve_weight(F, c) == 3]
        quads = [c for c in curves if curve_weight(F, c) == 4]
        assert len(curves) == 7
        assert len(links) == 4 and all(is_vertex_link_curve(F, c) for c in links)
        assert len(quads) == 3
        for c in quads:
            assert classify(F, c).status is CurveStatus.UNSTABLE
        for c in links:
            assert classify(F, c).status is CurveStatus.NORMAL_NOT_GEODESIC


def test_7_cut_along_vertex_links():
    T = load(corpus_path("s3_boundary4simplex"))
    with criterion(7, "cutting the 4-simplex boundary along each vertex link", 60):
        for v in range(5):
            res = cut_along(T, vertex_linking_vector(T, v))
            assert len(res.components) == 2
            assert sorted(t[0] for t in res.tags) == ["Generic", "VertexStar"]
            assert ("VertexStar", v) in res.tags
            for i in range(2):
                bd = res.boundary_surfaces(i)
                assert [b.euler_characteristic() for b in bd] == [2]
            H = homology(reglue(res))
            assert H.is_sphere_homology()


def check_snf(A):
    snf = smith_normal_form(A)
    D = snf.matrix()
    assert matmul(matmul(snf.left, A), snf.right) == D
    assert is_smith_normal_form(D)
    assert abs(Matrix(snf.left).det(method="bareiss")) == 1
    assert abs(Matrix(snf.right).det(method="bareiss")) == 1


def test_8_homology_gates():
    with criterion(8, "S2 x S1 fails the homology sphere test with H1 = Z; SNF witnesses"):
        T = load(corpus_path("s2xs1"))
        assert not is_homology_sphere(T)
        H = homology(T)
        assert H.group(1) == (1, [])
        count = 0
        for name, U in bundled_3d().items():
            for d in boundary_matrices(U):
                if d and d[0]:
                    check_snf(d)
                    count += 1
            for mode in (Mode.NORMAL, Mode.ALMOST):
                M = matching_matrix(U, mode)
                if M.rows:
                    check_snf(M.rows)
                    count += 1
        for rows, _, _, _ in random_systems(24):
            check_snf(rows)
            count += 1
        assert count > 50


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except BaseException:
                failed += 1
    sys.exit(1 if failed else 0)
