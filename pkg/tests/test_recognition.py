import copy
import json

import pytest

from normalsurf import census
from normalsurf.normal_coords import Mode, matching_matrix
from normalsurf.recognition import (ALMOST_NORMAL_BALL, PUNCTURED_BALL, RecognitionReport,
                                    Verdict, check_certificate, recognize, verify_certificate)
from normalsurf.surface_builder import (are_disjoint, is_almost_normal_two_sphere,
                                        is_normal_two_sphere)

SPHERES = ["s3_boundary4simplex", "s3_one_tet", "s3_one_tet_one_vertex", "s3_two_tet"]
NOT_SPHERES = {
    "lens_3_1": "homology: H1 = Z/3",
    "lens_3_1_two_vertex": "homology: H1 = Z/3",
    "lens_4_1": "homology: H1 = Z/4",
    "rp3_rp3": "homology: H1 = Z/2 + Z/2",
    "s2xs1": "homology: H1 = Z",
    "s2_twisted_s1": "non-orientable",
    "one_tet_open": "not a closed 3-manifold: BoundaryFace",
    "torus_cusp_pseudo": "not a closed 3-manifold: BadVertexLink",
}
_cache = {}


def report(name, **kw):
    key = (name, tuple(sorted(kw.items())))
    if key not in _cache:
        _cache[key] = recognize(census.get(name), **kw)
    return _cache[key]


@pytest.mark.parametrize("name", SPHERES)
def test_three_spheres(name):
    r = report(name)
    assert r.verdict is Verdict.YES_SPHERE, r.reason
    assert verify_certificate(census.get(name), r)
    assert r.step("homology")["sphere"]


@pytest.mark.parametrize("name", sorted(NOT_SPHERES))
def test_not_spheres(name):
    r = report(name)
    assert r.verdict is Verdict.NO_SPHERE
    assert r.reason == NOT_SPHERES[name]
    assert verify_certificate(census.get(name), r)


def test_boundary_4_simplex_trace():
    T = census.get("s3_boundary4simplex")
    r = report("s3_boundary4simplex")
    assert [s["step"] for s in r.trace] == ["manifold", "orientability", "homology",
                                            "enumeration", "normal_spheres", "family",
                                            "regions", "verdict"]
    family = [tuple(v) for v in r.step("family")["vectors"]]
    assert all(is_normal_two_sphere(T, f) for f in family)
    assert are_disjoint(T, family)
    regions = r.step("regions")["regions"]
    kinds = sorted(rec["certificate"]["type"] for rec in regions)
    assert kinds.count("vertex_star") == 5
    assert "uncertified" not in kinds
    # every trusted step is listed
    assert r.trust_points()
    assert {why for _, why in r.trust_points()} == {PUNCTURED_BALL}
    for rec in regions:
        assert rec["piece"]["boundary_euler"] == [2] * len(rec["boundary"])


def test_almost_normal_witness():
    T = census.get("s3_one_tet_one_vertex")
    r = report("s3_one_tet_one_vertex")
    certs = [rec["certificate"] for rec in r.step("regions")["regions"]]
    (wit,) = [c for c in certs if c["type"] == "almost_normal"]
    assert wit["trusted"] == ALMOST_NORMAL_BALL
    assert is_almost_normal_two_sphere(T, tuple(wit["witness"]))
    assert matching_matrix(T, Mode.ALMOST).contains(wit["witness"])


def test_json_round_trip():
    for name in SPHERES + ["lens_3_1"]:
        r = report(name)
        d = json.loads(r.to_json())
        assert RecognitionReport.from_dict(d).to_dict() == r.to_dict()
        assert check_certificate(census.get(name), d)


def _tamper(d, fn):
    d = copy.deepcopy(d)
    fn(d)
    return d


def _step(d, name):
    return next(s for s in d["trace"] if s["step"] == name)


def test_tampered_certificates_are_rejected():
    T = census.get("s3_boundary4simplex")
    good = report("s3_boundary4simplex").to_dict()

    def bump_family(d):
        _step(d, "family")["vectors"][-1][0] += 1

    def drop_sphere(d):
        _step(d, "family")["vectors"].pop()

    def forge_star(d):
        for rec in _step(d, "regions")["regions"]:
            if rec["certificate"]["type"] == "punctured_ball":
                rec["certificate"] = {"type": "vertex_star", "vertex": 0}
                break

    def wrong_homology(d):
        _step(d, "homology")["groups"]["H1"]["torsion"] = [3]

    for fn in (bump_family, drop_sphere, forge_star, wrong_homology):
        res = check_certificate(T, _tamper(good, fn))
        assert not res, fn.__name__
        assert res.step

    # a NoSphere report flipped to YesSphere
    L = census.get("lens_3_1")
    flipped = _tamper(report("lens_3_1").to_dict(), lambda d: d.update(verdict="YesSphere"))
    assert not check_certificate(L, flipped)
    # a report for another triangulation
    assert check_certificate(L, good).step == "fingerprint"
    assert check_certificate(T, {"schema": 99}).step == "schema"


def test_tampered_almost_normal_witness():
    T = census.get("s3_one_tet_one_vertex")
    good = report("s3_one_tet_one_vertex").to_dict()

    def bump(d):
        for rec in _step(d, "regions")["regions"]:
            if rec["certificate"]["type"] == "almost_normal":
                rec["certificate"]["witness"][0] += 1

    assert not check_certificate(T, _tamper(good, bump))


def test_search_without_the_homology_gate():
    # the sphere search alone must not certify these
    for name in ["lens_3_1", "lens_4_1", "rp3_rp3", "s2xs1", "lens_3_1_two_vertex"]:
        r = report(name, homology_gate=False)
        assert r.verdict is Verdict.NO_SPHERE, name
        assert not r.reason.startswith("homology")
        assert verify_certificate(census.get(name), r)
    assert report("s2xs1", homology_gate=False).reason.startswith("non-separating")


def test_budget_and_determinism():
    T = census.get("s3_boundary4simplex")
    small = recognize(T, budget=10)
    assert small.verdict is Verdict.INCONCLUSIVE
    assert verify_certificate(T, small)
    assert recognize(T, budget=10 ** 5).verdict is Verdict.YES_SPHERE
    assert recognize(T).to_json() == report("s3_boundary4simplex").to_json()
    assert recognize(T, workers=2).verdict is Verdict.YES_SPHERE


def test_vertex_solutions_variant_and_relabelling():
    T = census.get("s3_boundary4simplex")
    assert recognize(T, solutions="vertex").verdict is Verdict.YES_SPHERE
    for order in ([4, 3, 2, 1, 0], [2, 0, 4, 1, 3]):
        U = T.relabel(order)
        r = recognize(U, cut_pieces=False)
        assert r.verdict is Verdict.YES_SPHERE
        assert verify_certificate(U, r)

