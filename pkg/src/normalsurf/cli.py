"""
Command line front end.

Triangulations are read from gluing-table files::

    # comment
    dim 3
    count 2
    simplex 0: f0=(1,0123) f1=(1,0123) f2=- f3=(0,1023)
    simplex 1: ...

``f3=(0,1023)`` glues facet 3 to simplex 0 by the vertex map written as a
permutation word; ``-`` marks a boundary facet.  ``dim 2`` files describe
triangulated surfaces with three facets per triangle.

Exit codes: 0 success or YesSphere, 1 negative answer, 2 inconclusive or
budget exhausted, 3 bad input.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from importlib import resources

from .enumeration import (DEFAULT_BUDGET, ResourceBudgetExceeded, SphereKind, find_spheres,
                          hilbert_basis, vertex_solutions)
from .homology import homology
from .normal_coords import Mode, euler_characteristic, is_vertex_linking, matching_matrix, weight
from .plcurve import classify, curve_weight, enumerate_normal_curves, sides
from .recognition import SCHEMA_VERSION, RecognitionReport, Verdict, check_certificate, recognize
from .triangulation import SurfaceTriangulation, Triangulation, TriangulationError

EXIT_OK, EXIT_NO, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3


class ParseError(ValueError):
    def __init__(self, line, col, msg):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col
        self.msg = msg


_HEADER = re.compile(r"(dim|count)\s+(\S+)\s*$")
_SIMPLEX = re.compile(r"simplex\s+(\d+)\s*:")
_FACET = re.compile(r"f(\d+)=(-|\((\d+),([0-9]+)\))")


def parse_table(text):
    """Parse a gluing-table file into a Triangulation or SurfaceTriangulation."""
    dim = count = None
    rows = {}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        body = line.lstrip()
        if not body:
            continue
        col0 = len(line) - len(body) + 1
        m = _HEADER.match(body)
        if m:
            key, val = m.groups()
            if not val.isdigit():
                raise ParseError(ln, col0 + m.start(2), f"{key} needs a non-negative integer")
            val = int(val)
            if key == "dim":
                if val not in (2, 3):
                    raise ParseError(ln, col0 + m.start(2), "dim must be 2 or 3")
                dim = val
            else:
                count = val
            continue
        m = _SIMPLEX.match(body)
        if not m:
            raise ParseError(ln, col0, "expected 'dim', 'count' or 'simplex'")
        if dim is None or count is None:
            raise ParseError(ln, col0, "'dim' and 'count' must come before the simplices")
        s = int(m.group(1))
        if s >= count:
            raise ParseError(ln, col0 + m.start(1), f"simplex {s} out of range (count {count})")
        if s in rows:
            raise ParseError(ln, col0 + m.start(1), f"simplex {s} listed twice")
        row = [None] * (dim + 1)
        seen = set()
        pos = m.end()
        rest = body[pos:]
        for tok in re.finditer(r"\S+", rest):
            col = col0 + pos + tok.start()
            fm = _FACET.fullmatch(tok.group())
            if not fm:
                raise ParseError(ln, col, f"cannot read facet entry {tok.group()!r}")
            f = int(fm.group(1))
            if f > dim:
                raise ParseError(ln, col, f"facet f{f} out of range for dim {dim}")
            if f in seen:
                raise ParseError(ln, col, f"facet f{f} given twice")
            seen.add(f)
            if fm.group(2) != "-":
                t2, word = int(fm.group(3)), fm.group(4)
                perm = tuple(int(c) for c in word)
                if sorted(perm) != list(range(dim + 1)):
                    raise ParseError(ln, col, f"{word!r} is not a permutation of 0..{dim}")
                if t2 >= count:
                    raise ParseError(ln, col, f"simplex {t2} out of range (count {count})")
                row[f] = (t2, perm)
        if len(seen) != dim + 1:
            missing = sorted(set(range(dim + 1)) - seen)
            raise ParseError(ln, col0 + len(body), f"missing facet(s) {missing}")
        rows[s] = row
    if dim is None or count is None:
        raise ParseError(1, 1, "missing 'dim' or 'count' header")
    if len(rows) != count:
        missing = sorted(set(range(count)) - set(rows))
        raise ParseError(len(text.splitlines()) + 1, 1, f"missing simplices {missing}")
    cls = Triangulation if dim == 3 else SurfaceTriangulation
    return cls(count, [rows[s] for s in range(count)])


def serialize(T):
    """The gluing-table text for ``T``; ``parse_table`` reads it back."""
    dim = 3 if isinstance(T, Triangulation) else 2
    out = [f"dim {dim}", f"count {T.size}"]
    for s, row in enumerate(T.adjacency):
        parts = []
        for f, g in enumerate(row):
            parts.append(f"f{f}=-" if g is None else
                         f"f{f}=({g[0]},{''.join(map(str, g[1]))})")
        out.append(f"simplex {s}: " + " ".join(parts))
    return "\n".join(out) + "\n"


def corpus_path(name):
    """Path of a bundled triangulation file, e.g. ``corpus_path("lens_3_1")``."""
    return resources.files("normalsurf") / "corpus" / f"{name}.tri"


def corpus_names():
    return sorted(p.name[:-4] for p in (resources.files("normalsurf") / "corpus").iterdir()
                  if p.name.endswith(".tri"))


def load(path):
    with open(path) as fh:
        return parse_table(fh.read())


# -- commands ---------------------------------------------------------

class InputError(Exception):
    pass


def _need_dim(T, dim, command):
    if dim == 3 and not isinstance(T, Triangulation):
        raise InputError(f"{command} needs a 3-dimensional triangulation")
    if dim == 2 and not isinstance(T, SurfaceTriangulation):
        raise InputError(f"{command} needs a triangulated surface (dim 2)")


def _report(kind, **fields):
    return {"schema": SCHEMA_VERSION, "kind": kind, **fields}


def cmd_check(T, args):
    if isinstance(T, SurfaceTriangulation):
        closed = T.is_closed()
        rep = _report("check", dim=2, ok=closed, reason=None if closed else "BoundaryEdge",
                      euler=T.euler_characteristic(), orientable=T.is_orientable())
        text = (f"closed surface, euler characteristic {rep['euler']}" if closed
                else "surface has boundary")
        return (EXIT_OK if closed else EXIT_NO), rep, text
    mc = T.is_closed_3_manifold()
    rep = _report("check", dim=3, ok=mc.ok, reason=mc.reason, witness=mc.witness,
                  orientable=T.is_orientable())
    text = "closed 3-manifold" if mc.ok else f"not a closed 3-manifold: {mc.reason} {mc.witness}"
    return (EXIT_OK if mc.ok else EXIT_NO), rep, text


def cmd_homology(T, args):
    _need_dim(T, 3, "homology")
    H = homology(T, allow_boundary=True)
    rep = _report("homology", closed=T.is_closed(), groups=H.as_dict(),
                  homology_sphere=T.is_closed() and H.is_sphere_homology())
    text = "\n".join(f"H{k} = {H.describe(k)}" for k in range(4))
    return EXIT_OK, rep, text


def cmd_enumerate(T, args):
    _need_dim(T, 3, "enumerate")
    mode = Mode.NORMAL if args.mode == "normal" else Mode.ALMOST
    solve = vertex_solutions if args.kind == "vertex" else hilbert_basis
    sols = solve(matching_matrix(T, mode), budget=args.budget, workers=args.threads)
    kind = SphereKind.NORMAL if mode is Mode.NORMAL else SphereKind.OCTAGONAL
    spheres = set(find_spheres(T, sols.basis, kind))
    items = []
    for v in sols.basis:
        items.append({"vector": list(v), "weight": weight(T, v),
                      "euler": euler_characteristic(T, v),
                      "vertex_linking": mode is Mode.NORMAL and is_vertex_linking(T, v),
                      "sphere": v in spheres})
    rep = _report("enumeration", mode=args.mode, solutions=args.kind,
                  provenance=sols.provenance, count=len(items), members=items)
    lines = [f"{len(items)} {args.kind} solutions ({args.mode} coordinates)"]
    for it in items:
        tag = " sphere" if it["sphere"] else ""
        tag += " vertex-link" if it["vertex_linking"] else ""
        lines.append(f"  {it['vector']} weight {it['weight']} euler {it['euler']}{tag}")
    return EXIT_OK, rep, "\n".join(lines)


_VERDICT_EXIT = {Verdict.YES_SPHERE: EXIT_OK, Verdict.NO_SPHERE: EXIT_NO,
                 Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE}


def cmd_recognize(T, args):
    _need_dim(T, 3, "recognize")
    r = recognize(T, budget=args.budget, workers=args.threads)
    text = r.verdict.value + (f" ({r.reason})" if r.reason else "")
    return _VERDICT_EXIT[r.verdict], r.to_dict(), text


def cmd_plcurve(T, args):
    _need_dim(T, 2, "plcurve")
    if not T.is_closed():
        raise InputError("plcurve needs a closed surface")
    curves = []
    lines = []
    for c in enumerate_normal_curves(T, args.max_weight):
        if len(sides(T, c)) == 2:
            cls = classify(T, c).as_dict()
        else:
            cls = {"status": None, "weight": curve_weight(T, c), "note": "non-separating"}
        curves.append({"vector": list(c), **cls})
        lines.append(f"{list(c)} weight {cls['weight']}: {cls['status']}")
    rep = _report("plcurve", max_weight=args.max_weight, count=len(curves), curves=curves)
    return EXIT_OK, rep, "\n".join([f"{len(curves)} connected normal curves"] + lines)


def cmd_verify(T, args):
    _need_dim(T, 3, "verify")
    try:
        with open(args.report) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read report: {exc}") from None
    res = check_certificate(T, data)
    rep = _report("verification", ok=res.ok, step=res.step, message=res.message)
    text = "certificate verified" if res.ok else f"certificate rejected at {res.step}: {res.message}"
    return (EXIT_OK if res.ok else EXIT_NO), rep, text


COMMANDS = {"check": cmd_check, "homology": cmd_homology, "enumerate": cmd_enumerate,
            "recognize": cmd_recognize, "plcurve": cmd_plcurve, "verify": cmd_verify}


def build_parser():
    p = argparse.ArgumentParser(prog="normalsurf", description=__doc__.split("\n\n")[0].strip())
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="gluing-table file")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--threads", type=int, default=1, help="worker processes")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("check", parents=[common], help="closed 3-manifold gate")
    sub.add_parser("homology", parents=[common], help="integer homology")
    e = sub.add_parser("enumerate", parents=[common], help="fundamental normal solutions")
    e.add_argument("--mode", choices=["normal", "almost"], default="normal")
    e.add_argument("--kind", choices=["vertex", "hilbert"], default="hilbert")
    e.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    r = sub.add_parser("recognize", parents=[common], help="3-sphere recognition")
    r.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    c = sub.add_parser("plcurve", parents=[common], help="normal curves and PL geodesics")
    c.add_argument("--max-weight", type=int, default=4)
    v = sub.add_parser("verify", parents=[common], help="re-check a recognition report")
    v.add_argument("report", help="JSON report written by 'recognize --json'")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        T = load(args.file)
    except ParseError as exc:
        print(f"{args.file}:{exc.line}:{exc.col}: {exc.msg}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, TriangulationError) as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        code, rep, text = COMMANDS[args.command](T, args)
    except InputError as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceBudgetExceeded as exc:
        code = EXIT_INCONCLUSIVE
        rep = _report("error", error="ResourceBudgetExceeded", message=str(exc))
        text = f"budget exhausted: {exc}"
    if args.json:
        print(json.dumps(rep, sort_keys=True, indent=2))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
