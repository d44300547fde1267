"""
Recognising the 3-sphere.

The pipeline:

1. manifold gate (vertex links are spheres, no boundary);
2. orientability and homology gate;
3. fundamental normal solutions and the 2-spheres among them;
4. a maximal family of pairwise disjoint normal spheres, built greedily
   from those spheres (vertex links first, then by weight);
5. the complementary regions of the family.  A region is certified when it
   is the star of a vertex, when it is bounded by two or more spheres (a
   punctured ball; this is a trusted theorem, recorded in the trace), or
   when it contains an octagonal almost normal sphere disjoint from the
   family.

The manifold is reported as a 3-sphere when every region is certified.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum

from .cutting import CellDecomposition, boundary_surfaces, cut_along_surface
from .enumeration import (DEFAULT_BUDGET, ResourceBudgetExceeded, SphereKind, find_spheres,
                          hilbert_basis, vertex_solutions)
from .homology import homology
from .normal_coords import (Mode, is_admissible, is_vertex_linking, linked_vertex,
                            matching_matrix, to_almost, vertex_linking_vector, weight)
from .surface_builder import are_disjoint, is_almost_normal_two_sphere, is_normal_two_sphere
from .triangulation import Triangulation

SCHEMA_VERSION = 1

PUNCTURED_BALL = "a region bounded by two or more normal spheres is a punctured ball"
ALMOST_NORMAL_BALL = ("a region bounded by one normal sphere and containing an almost normal "
                      "sphere is a ball")


class Verdict(Enum):
    YES_SPHERE = "YesSphere"
    NO_SPHERE = "NoSphere"
    INCONCLUSIVE = "Inconclusive"


def fingerprint(T: Triangulation):
    """Short hash of the gluing data."""
    data = json.dumps([[None if g is None else [g[0], list(g[1])] for g in row]
                       for row in T.adjacency])
    return hashlib.sha256(data.encode()).hexdigest()[:16]


@dataclass
class RecognitionReport:
    verdict: Verdict
    reason: str | None
    trace: list = field(default_factory=list)
    fingerprint: str = ""
    budget: int = DEFAULT_BUDGET

    def step(self, name):
        for s in self.trace:
            if s["step"] == name:
                return s
        return None

    def trust_points(self):
        out = []
        for s in self.trace:
            for r in s.get("regions", []):
                if r["certificate"].get("trusted"):
                    out.append((r["index"], r["certificate"]["trusted"]))
        return out

    def to_dict(self):
        return {
            "schema": SCHEMA_VERSION,
            "kind": "recognition",
            "verdict": self.verdict.value,
            "reason": self.reason,
            "fingerprint": self.fingerprint,
            "budget": self.budget,
            "trace": self.trace,
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), sort_keys=True, **kw)

    @classmethod
    def from_dict(cls, d):
        if d.get("schema") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema {d.get('schema')!r}")
        return cls(Verdict(d["verdict"]), d.get("reason"), d["trace"],
                   d.get("fingerprint", ""), d.get("budget", DEFAULT_BUDGET))


def _tuples(vectors):
    return [tuple(v) for v in vectors]


def maximal_family(T, spheres):
    """Greedy family of disjoint normal spheres.

    Vertex links come first (they are disjoint from everything), then the
    other spheres by weight and coordinates.
    """
    links = [vertex_linking_vector(T, v) for v in range(T.num_vertices())]
    rest = sorted((s for s in spheres if s not in links), key=lambda v: (weight(T, v), v))
    family = []
    for s in links + rest:
        if s in family:
            continue
        if are_disjoint(T, family + [s]):
            family.append(s)
    return family


def _family_sum(T, family):
    return tuple(map(sum, zip(*family))) if family else (0,) * (7 * T.size)


def locate_almost_normal(T, family, cd, vec):
    """Region of ``cd`` containing an almost normal sphere disjoint from ``family``.

    Returns ``None`` when the sphere meets the family.
    """
    if not is_almost_normal_two_sphere(T, vec):
        return None
    if not are_disjoint(T, [to_almost(f) for f in family] + [tuple(vec)]):
        return None
    t = next(i // 10 for i, x in enumerate(vec) if i % 10 >= 7 and x)
    # the family has no quads in the octagon's tetrahedron, so the octagon
    # sits in the single middle cell there
    return cd.region_containing(t, ("M", 0))


def _region_record(cd, r):
    return {"index": r, "boundary": sorted(cd.region_boundary[r]),
            "sides": sum(cd.region_boundary[r].values())}


def recognize(T: Triangulation, budget=DEFAULT_BUDGET, workers=1, solutions="hilbert",
              cut_pieces=True, homology_gate=True) -> RecognitionReport:
    """Decide whether ``T`` triangulates the 3-sphere.

    ``homology_gate=False`` runs the sphere search even when the homology
    already rules out S^3; it exists for testing the search on its own.
    """
    rep = RecognitionReport(Verdict.INCONCLUSIVE, None, [], fingerprint(T), budget)
    trace = rep.trace

    mc = T.is_closed_3_manifold()
    trace.append({"step": "manifold", "ok": mc.ok, "reason": mc.reason,
                  "witness": mc.witness})
    if not mc.ok:
        rep.verdict, rep.reason = Verdict.NO_SPHERE, f"not a closed 3-manifold: {mc.reason}"
        return rep
    orientable = T.is_orientable()
    trace.append({"step": "orientability", "ok": orientable})
    if not orientable:
        rep.verdict, rep.reason = Verdict.NO_SPHERE, "non-orientable"
        return rep
    H = homology(T)
    trace.append({"step": "homology", "groups": H.as_dict(),
                  "H1": H.describe(1), "sphere": H.is_sphere_homology()})
    if homology_gate and not H.is_sphere_homology():
        rep.verdict = Verdict.NO_SPHERE
        rep.reason = f"homology: H1 = {H.describe(1)}" if H.ranks[1] or H.torsion[1] \
            else "homology: not a homology sphere"
        return rep

    enum = hilbert_basis if solutions == "hilbert" else vertex_solutions
    try:
        basis = enum(matching_matrix(T, Mode.NORMAL), budget=budget, workers=workers)
    except ResourceBudgetExceeded as exc:
        trace.append({"step": "enumeration", "mode": "normal", "kind": solutions,
                      "error": str(exc)})
        rep.reason = "budget exhausted in normal enumeration"
        return rep
    trace.append({"step": "enumeration", "mode": "normal", "kind": solutions,
                  "count": len(basis), "cells": basis.cells, "provenance": basis.provenance})
    spheres = find_spheres(T, basis)
    trace.append({"step": "normal_spheres", "vectors": [list(s) for s in spheres],
                  "vertex_linking": [is_vertex_linking(T, s) for s in spheres]})
    family = maximal_family(T, spheres)
    trace.append({"step": "family", "vectors": [list(f) for f in family],
                  "vertex_links": [linked_vertex(T, f) for f in family]})

    cd = CellDecomposition(T, _family_sum(T, family))
    regions = [_region_record(cd, r) for r in range(cd.num_regions)]
    pending = []
    for rec in regions:
        r = rec["index"]
        v = cd.is_vertex_star(r)
        twice = [ci for ci, n in cd.region_boundary[r].items() if n == 2]
        if v is not None:
            rec["certificate"] = {"type": "vertex_star", "vertex": v}
        elif twice:
            # the region meets both sides of a sphere, which does not separate
            rec["certificate"] = {"type": "nonseparating", "sphere": min(twice)}
        elif len(cd.region_boundary[r]) >= 2:
            rec["certificate"] = {"type": "punctured_ball", "spheres": len(cd.region_boundary[r]),
                                  "trusted": PUNCTURED_BALL}
        else:
            rec["certificate"] = {"type": "uncertified"}
            pending.append(rec)

    if pending:
        try:
            almost = hilbert_basis(matching_matrix(T, Mode.ALMOST), budget=budget,
                                   workers=workers)
        except ResourceBudgetExceeded as exc:
            trace.append({"step": "almost_enumeration", "error": str(exc)})
            trace.append({"step": "regions", "regions": regions})
            rep.reason = "budget exhausted in almost normal enumeration"
            return rep
        candidates = find_spheres(T, almost, SphereKind.OCTAGONAL)
        trace.append({"step": "almost_enumeration", "count": len(almost),
                      "cells": almost.cells, "provenance": almost.provenance,
                      "octagonal_spheres": len(candidates)})
        for a in candidates:
            r = locate_almost_normal(T, family, cd, a)
            if r is None:
                continue
            rec = regions[r]
            if rec["certificate"]["type"] == "uncertified":
                rec["certificate"] = {"type": "almost_normal", "witness": list(a),
                                      "trusted": ALMOST_NORMAL_BALL}
    if cut_pieces:
        cut = cut_along_surface(T, _family_sum(T, family))
        for rec in regions:
            t, cell = cd.region_cells[rec["index"]][0]
            piece = cut.components[cut.cell_piece[(t, cell)]]
            rec["piece"] = {"tetrahedra": piece.size,
                            "boundary_euler": sorted(s.euler_characteristic()
                                                     for s in boundary_surfaces(piece))}
    trace.append({"step": "regions", "regions": regions})

    bad = [rec["index"] for rec in regions if rec["certificate"]["type"] == "uncertified"]
    nonsep = [rec["certificate"]["sphere"] for rec in regions
              if rec["certificate"]["type"] == "nonseparating"]
    if nonsep:
        rep.verdict = Verdict.NO_SPHERE
        rep.reason = f"non-separating normal sphere {min(nonsep)}"
    elif bad:
        rep.verdict = Verdict.NO_SPHERE
        rep.reason = f"uncertified region(s) {bad} with a single boundary sphere"
    else:
        rep.verdict = Verdict.YES_SPHERE
    trace.append({"step": "verdict", "verdict": rep.verdict.value, "reason": rep.reason})
    return rep


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    step: str | None = None
    message: str = ""

    def __bool__(self):
        return self.ok


def _fail(step, msg):
    return CertificateCheck(False, step, msg)


def check_certificate(T: Triangulation, report) -> CertificateCheck:
    """Re-validate every claim in a report; returns the first failing step."""
    if isinstance(report, dict):
        try:
            report = RecognitionReport.from_dict(report)
        except (KeyError, ValueError) as exc:
            return _fail("schema", str(exc))
    if report.fingerprint and report.fingerprint != fingerprint(T):
        return _fail("fingerprint", "report was produced for a different triangulation")
    if report.verdict is Verdict.INCONCLUSIVE:
        return CertificateCheck(True, None, "inconclusive reports carry no claim")

    mc = T.is_closed_3_manifold()
    step = report.step("manifold")
    if step is None or step["ok"] != mc.ok or step["reason"] != mc.reason:
        return _fail("manifold", "manifold gate disagrees")
    if not mc.ok:
        ok = report.verdict is Verdict.NO_SPHERE
        return CertificateCheck(ok, None if ok else "verdict", "")
    step = report.step("orientability")
    if step is None or step["ok"] != T.is_orientable():
        return _fail("orientability", "orientability disagrees")
    if not step["ok"]:
        ok = report.verdict is Verdict.NO_SPHERE
        return CertificateCheck(ok, None if ok else "verdict", "")
    H = homology(T)
    step = report.step("homology")
    if step is None or step["groups"] != H.as_dict():
        return _fail("homology", "homology groups disagree")
    if not H.is_sphere_homology() and report.reason and report.reason.startswith("homology"):
        ok = report.verdict is Verdict.NO_SPHERE and report.reason.startswith("homology")
        return CertificateCheck(ok, None if ok else "verdict", "homology obstruction")

    fam_step = report.step("family")
    if fam_step is None:
        return _fail("family", "missing family")
    family = _tuples(fam_step["vectors"])
    M = matching_matrix(T, Mode.NORMAL)
    for f in family:
        if len(f) != M.ncols or not M.contains(f):
            return _fail("family", f"vector {list(f)} is not in the kernel")
        if not is_admissible(f, Mode.NORMAL):
            return _fail("family", f"vector {list(f)} is not admissible")
        if not is_normal_two_sphere(T, f):
            return _fail("family", f"vector {list(f)} is not a connected 2-sphere")
    for v in range(T.num_vertices()):
        if vertex_linking_vector(T, v) not in family:
            return _fail("family", f"link of vertex {v} missing")
    if not are_disjoint(T, family):
        return _fail("family", "family members intersect")
    sph_step = report.step("normal_spheres")
    if sph_step is not None:
        for s in _tuples(sph_step["vectors"]):
            if s not in family and are_disjoint(T, family + [s]):
                return _fail("family", f"sphere {list(s)} could be added: family not maximal")

    cd = CellDecomposition(T, _family_sum(T, family))
    reg_step = report.step("regions")
    if reg_step is None or len(reg_step["regions"]) != cd.num_regions:
        return _fail("regions", "region count disagrees")
    uncertified = []
    nonsep = False
    for rec in reg_step["regions"]:
        r = rec["index"]
        if rec["boundary"] != sorted(cd.region_boundary[r]):
            return _fail("regions", f"boundary of region {r} disagrees")
        cert = rec["certificate"]
        kind = cert["type"]
        if kind == "vertex_star":
            if cd.is_vertex_star(r) != cert["vertex"]:
                return _fail("regions", f"region {r} is not the star of vertex {cert['vertex']}")
        elif kind == "nonseparating":
            if cd.region_boundary[r].get(cert["sphere"]) != 2:
                return _fail("regions", f"sphere {cert['sphere']} does not meet region {r} twice")
            nonsep = True
        elif kind == "punctured_ball":
            if len(cd.region_boundary[r]) < 2 or any(
                    n != 1 for n in cd.region_boundary[r].values()):
                return _fail("regions", f"region {r} has fewer than two boundary spheres")
        elif kind == "almost_normal":
            a = tuple(cert["witness"])
            Ma = matching_matrix(T, Mode.ALMOST)
            if len(a) != Ma.ncols or not Ma.contains(a):
                return _fail("witness", f"almost normal witness of region {r} not in the kernel")
            if not is_admissible(a, Mode.ALMOST):
                return _fail("witness", f"witness of region {r} is not admissible")
            if locate_almost_normal(T, family, cd, a) != r:
                return _fail("witness", f"witness does not lie in region {r}")
        elif kind == "uncertified":
            uncertified.append(r)
        else:
            return _fail("regions", f"unknown certificate {kind!r}")
    if report.verdict is Verdict.YES_SPHERE:
        if uncertified or nonsep:
            return _fail("verdict", "YesSphere with an uncertified region")
        return CertificateCheck(True)
    if nonsep:
        return CertificateCheck(True, None, "non-separating sphere")
    if not uncertified:
        return _fail("verdict", "NoSphere without an uncertified region")
    # the negative claim: no fundamental octagonal sphere lies in those regions
    almost = hilbert_basis(matching_matrix(T, Mode.ALMOST), budget=report.budget)
    for a in find_spheres(T, almost, SphereKind.OCTAGONAL):
        if locate_almost_normal(T, family, cd, a) in uncertified:
            return _fail("regions", "an almost normal sphere certifies a region")
    return CertificateCheck(True)


def verify_certificate(T: Triangulation, report) -> bool:
    return bool(check_certificate(T, report))
