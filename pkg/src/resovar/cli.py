"""Command-line front end.

Subcommands: validate, aomoto, resonance, holonomy, detect, raag, curves,
suite, builtin.  Each reads JSON documents, writes a JSON report plus a
human summary, and exits 0 on success, 1 when a mathematical counterexample
or axiom failure shows up, 2 on bad inputs or usage.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from importlib import metadata

from .cdga import cdga_from_json, cohomology_dims, validate_cdga
from .curves import fibration_from_json, qp_decomposition
from .errors import ResovarError
from .exactla import qq, qq_str
from .fixtures import builtin, fixture_names
from .flatres import (
    aomoto_cohomology,
    connection_from_json,
    detect_nonzero_resonance,
    holonomy_presentation,
    scalar_connection,
)
from .liealg import (
    representation_from_json,
    scalar_rep,
    standard_algebra,
    validate_lie,
    validate_representation,
)
from .raag import (
    LabeledGraph,
    flat_decomposition_sl2,
    graph_from_json,
    grid_verify,
    mask_vertices,
    odd_contraction,
    resonance_decomposition,
    semisimple_counterexample,
)
from .report import write_report
from .suite import run_suite

EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_USAGE = 2


def _version():
    try:
        return metadata.version("resovar")
    except metadata.PackageNotFoundError:  # pragma: no cover - dev checkouts
        return "unversioned"


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _input_hash(doc):
    return hashlib.sha256(
        json.dumps(doc, sort_keys=True).encode()
    ).hexdigest()[:16]


def _base_report(kind, inputs):
    return {
        "kind": kind,
        "version": _version(),
        "inputs": {name: _input_hash(doc) for name, doc in inputs.items()},
    }


def _say(args, message):
    if not args.quiet:
        print(message)


def _emit(args, doc):
    write_report(doc, json_out=args.json_out, report_dir=args.report_dir,
                 quiet=args.quiet)


def _load_rep(args):
    if getattr(args, "rep", None):
        return representation_from_json(_load_json(args.rep)), _load_json(args.rep)
    return scalar_rep(), {"builtin": "scalar"}


# -- subcommand handlers -------------------------------------------------------


def cmd_validate(args):
    inputs = {}
    reports = {}
    ok = True
    if args.cdga:
        doc = _load_json(args.cdga)
        inputs["cdga"] = doc
        rep = validate_cdga(cdga_from_json(doc))
        reports["cdga"] = {"ok": rep.ok, "failures": rep.failures}
        ok = ok and rep.ok
    if args.lie:
        doc = _load_json(args.lie)
        inputs["lie"] = doc
        from .liealg import lie_from_json

        rep = validate_lie(lie_from_json(doc))
        reports["lie"] = {"ok": rep.ok, "failures": rep.failures}
        ok = ok and rep.ok
    if args.rep:
        doc = _load_json(args.rep)
        inputs["rep"] = doc
        rep = validate_representation(representation_from_json(doc))
        reports["representation"] = {"ok": rep.ok, "failures": rep.failures}
        ok = ok and rep.ok
    if not inputs:
        print("validate: supply at least one of --cdga, --lie, --rep", file=sys.stderr)
        return EXIT_USAGE
    doc = _base_report("validate", inputs)
    doc["results"] = reports
    doc["ok"] = ok
    _emit(args, doc)
    _say(args, "all axioms pass" if ok else "axiom failures:\n" + "\n".join(
        f"  [{name}] {failure}"
        for name, r in reports.items()
        for failure in r["failures"]
    ))
    return EXIT_OK if ok else EXIT_COUNTEREXAMPLE


def cmd_aomoto(args):
    cdga_doc = _load_json(args.cdga)
    a = cdga_from_json(cdga_doc)
    theta, rep_doc = _load_rep(args)
    inputs = {"cdga": cdga_doc, "rep": rep_doc}

    if args.scan is not None:
        eta = [qq(x) for x in json.loads(args.eta)] if args.eta else None
        if eta is None:
            print("aomoto --scan needs --eta", file=sys.stderr)
            return EXIT_USAGE
        points = []
        for tok in args.scan.split(","):
            t = qq(tok.strip())
            omega = scalar_connection(a, [t * x for x in eta])
            rep = aomoto_cohomology(omega, scalar_rep())
            points.append({"t": qq_str(t), "dims_h": rep.dims_h,
                           "resonant_degree_1": rep.dims_h[1] >= 1 if len(rep.dims_h) > 1 else False})
        doc = _base_report("scan", inputs)
        doc["eta"] = [qq_str(x) for x in eta]
        doc["scan"] = points
        _emit(args, doc)
        _say(args, "\n".join(
            f"t = {p['t']}: dims {p['dims_h']}" for p in points))
        return EXIT_OK

    omega_doc = _load_json(args.omega)
    inputs["omega"] = omega_doc
    omega = connection_from_json(a, theta.lie, omega_doc)
    rep = aomoto_cohomology(omega, theta)
    doc = _base_report("aomoto", inputs)
    doc.update(
        {
            "flat": rep.flat,
            "dims_h": rep.dims_h,
            "euler_check": rep.euler_check,
            "h0_formula_check": rep.h0_formula_check,
            "top_degree_truncation_sensitive": rep.top_degree_truncation_sensitive,
        }
    )
    _emit(args, doc)
    _say(args, f"twisted cohomology dimensions: {rep.dims_h}")
    return EXIT_OK


def cmd_resonance(args):
    cdga_doc = _load_json(args.cdga)
    a = cdga_from_json(cdga_doc)
    theta, rep_doc = _load_rep(args)
    omega_doc = _load_json(args.omega)
    omega = connection_from_json(a, theta.lie, omega_doc)
    rep = aomoto_cohomology(omega, theta)
    member = (
        rep.dims_h[args.degree] >= args.depth
        if args.degree < len(rep.dims_h)
        else args.depth == 0
    )
    doc = _base_report(
        "resonance", {"cdga": cdga_doc, "rep": rep_doc, "omega": omega_doc}
    )
    doc.update(
        {
            "degree": args.degree,
            "depth": args.depth,
            "dims_h": rep.dims_h,
            "member": member,
            "top_degree_truncation_sensitive": (
                args.degree == a.top_degree and a.truncated
            ),
        }
    )
    _emit(args, doc)
    _say(args, f"in resonance (degree {args.degree}, depth {args.depth}): {member}")
    return EXIT_OK


def cmd_holonomy(args):
    cdga_doc = _load_json(args.cdga)
    a = cdga_from_json(cdga_doc)
    p = holonomy_presentation(a)
    names = a.basis_names.get(1) or [f"u{i}" for i in range(p.generator_count)]
    rel_docs = []
    for rel in p.relations:
        rel_docs.append(
            {
                "linear": [qq_str(c) for c in rel.linear],
                "bilinear": [
                    [i, j, qq_str(rel.bilinear.data[i][j])]
                    for i in range(p.generator_count)
                    for j in range(i + 1, p.generator_count)
                    if rel.bilinear.data[i][j] != 0
                ],
            }
        )
    doc = _base_report("holonomy", {"cdga": cdga_doc})
    doc.update({"generators": names, "relations": rel_docs})
    _emit(args, doc)
    if not args.quiet:
        print(f"generators: {', '.join(names)}")
        for rel in rel_docs:
            terms = [
                f"{c}*{names[i]}" for i, c in enumerate(rel["linear"]) if c != "0"
            ]
            terms += [
                f"{c}*[{names[i]},{names[j]}]" for i, j, c in rel["bilinear"]
            ]
            print("relation: " + (" + ".join(terms) if terms else "0") + " = 0")
    return EXIT_OK


def cmd_detect(args):
    cdga_doc = _load_json(args.cdga)
    a = cdga_from_json(cdga_doc)
    witness = detect_nonzero_resonance(
        a, f"{args.mode}_target", budget=args.budget, seed=args.seed
    )
    doc = _base_report("detect", {"cdga": cdga_doc})
    doc.update({"mode": args.mode, "budget": args.budget, "seed": args.seed})
    if witness is None:
        doc["witness"] = None
        _emit(args, doc)
        _say(args, "no witness within budget (not a proof of emptiness)")
        return EXIT_OK
    doc["witness"] = {
        "alpha": [qq_str(x) for x in witness.alpha],
        "beta": [qq_str(x) for x in witness.beta],
        "gamma": [qq_str(x) for x in witness.gamma] if witness.gamma else None,
        "verified": witness.verified,
    }
    _emit(args, doc)
    _say(args, f"witness found and reverified: {doc['witness']}")
    return EXIT_OK if witness.verified else EXIT_COUNTEREXAMPLE


def _graph_of(doc):
    parsed = graph_from_json(doc)
    if isinstance(parsed, LabeledGraph):
        return odd_contraction(parsed), True
    return parsed, False


def cmd_raag(args):
    graph_doc = _load_json(args.graph) if args.graph else None
    if args.raag_command == "decompose":
        g, contracted = _graph_of(graph_doc)
        if args.rep:
            theta = representation_from_json(_load_json(args.rep))
            comps = resonance_decomposition(g, theta)
            variety = "resonance"
        else:
            comps = flat_decomposition_sl2(g)
            variety = "flat"
        doc = _base_report("raag_decomposition", {"graph": graph_doc})
        doc.update(
            {
                "variety": variety,
                "odd_contraction_applied": contracted,
                "graph": g.to_json(),
                "components": [
                    {
                        "label": c.label,
                        "kind": c.kind,
                        "dim": c.dim,
                        "vertices": [g.vertex_names[v] for v in mask_vertices(c.subset)],
                        "parts": [
                            [g.vertex_names[v] for v in mask_vertices(p)]
                            for p in c.parts
                        ],
                    }
                    for c in comps
                ],
            }
        )
        _emit(args, doc)
        _say(args, "\n".join(
            f"{c['label']}  (dim {c['dim']})" for c in doc["components"]))
        return EXIT_OK
    if args.raag_command == "verify":
        g, _ = _graph_of(graph_doc)
        lie = standard_algebra(args.lie)
        grid = [qq(t) for t in args.grid.split(",")]
        rep = grid_verify(g, lie, grid=tuple(grid), budget=args.budget)
        doc = _base_report("grid_verify", {"graph": graph_doc})
        doc.update(
            {
                "lie": args.lie,
                "grid": [qq_str(t) for t in grid],
                "points": rep.points,
                "flat_points": rep.flat_points,
                "union_points": rep.union_points,
                "ok": rep.ok,
                "mismatches": [list(map(str, m)) for m in rep.mismatches],
            }
        )
        _emit(args, doc)
        _say(args, f"{rep.points} points, {rep.flat_points} flat, "
                   f"{'no mismatches' if rep.ok else 'MISMATCHES FOUND'}")
        return EXIT_OK if rep.ok else EXIT_COUNTEREXAMPLE
    if args.raag_command == "contract":
        parsed = graph_from_json(graph_doc)
        if not isinstance(parsed, LabeledGraph):
            print("contract needs a labeled graph", file=sys.stderr)
            return EXIT_USAGE
        tilde = odd_contraction(parsed)
        doc = _base_report("odd_contraction", {"graph": graph_doc})
        doc["contracted"] = tilde.to_json()
        _emit(args, doc)
        _say(args, json.dumps(tilde.to_json()))
        return EXIT_OK
    if args.raag_command == "witness":
        graph, omega = semisimple_counterexample(args.lie)
        doc = _base_report("semisimple_witness", {})
        doc.update(
            {
                "lie": args.lie,
                "graph": graph.to_json(),
                "omega": omega.to_json(),
                "verified": True,
            }
        )
        _emit(args, doc)
        _say(args, f"witness over {args.lie} verified on {graph.n} vertices")
        return EXIT_OK
    print("unknown raag subcommand", file=sys.stderr)
    return EXIT_USAGE


def cmd_curves(args):
    cdga_doc = _load_json(args.cdga)
    a = cdga_from_json(cdga_doc)
    fib_docs = _load_json(args.fibrations) if args.fibrations else []
    fibs = [fibration_from_json(d) for d in fib_docs]
    theta, rep_doc = _load_rep(args)
    decomp = qp_decomposition(a, fibs, theta)
    doc = _base_report(
        "qp_decomposition",
        {"cdga": cdga_doc, "fibrations": fib_docs, "rep": rep_doc},
    )
    doc.update(
        {
            "case": decomp.case,
            "flat_components": [c.label for c in decomp.flat_components],
            "resonance_components": [c.label for c in decomp.resonance_components],
        }
    )
    _emit(args, doc)
    _say(args, f"case {decomp.case}: "
               f"flat = {doc['flat_components']}, "
               f"resonance = {doc['resonance_components']}")
    return EXIT_OK


def cmd_suite(args):
    indices = (
        {int(tok) for tok in args.criteria.split(",")} if args.criteria else None
    )
    progress = None if args.quiet else (lambda r: print(r.line()))
    report = run_suite(seed=args.seed, indices=indices, progress=progress)
    report["version"] = _version()
    _emit(args, report)
    _say(args, f"suite {'PASSED' if report['passed'] else 'FAILED'} "
               f"in {report['timings']['total_seconds']}s")
    return EXIT_OK if report["passed"] else EXIT_COUNTEREXAMPLE


def cmd_builtin(args):
    if args.list:
        print("\n".join(fixture_names()))
        return EXIT_OK
    if not args.name:
        print("builtin: name required (or --list)", file=sys.stderr)
        return EXIT_USAGE
    doc = builtin(args.name)
    text = json.dumps(doc, indent=2, sort_keys=True)
    if args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(text + "\n")
        _say(args, f"wrote {args.json_out}")
    else:
        print(text)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42, help="master random seed")
    common.add_argument("--json-out", help="write the JSON report to this path")
    common.add_argument("--report-dir",
                        help="write report.json, report.csv, and figures here")
    common.add_argument("--quiet", action="store_true")

    parser = argparse.ArgumentParser(
        prog="resovar",
        description="Exact flat connections, resonance varieties, and holonomy.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common],
                       help="check cdga / Lie / representation axioms")
    p.add_argument("--cdga")
    p.add_argument("--lie")
    p.add_argument("--rep")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("aomoto", parents=[common],
                       help="twisted cohomology of a flat connection")
    p.add_argument("--cdga", required=True)
    p.add_argument("--rep")
    p.add_argument("--omega")
    p.add_argument("--scan", help="comma-separated scalars t for a t*eta scan")
    p.add_argument("--eta", help="JSON list of degree-1 coordinates for --scan")
    p.set_defaults(handler=cmd_aomoto)

    p = sub.add_parser("resonance", parents=[common],
                       help="depth membership in a resonance variety")
    p.add_argument("--cdga", required=True)
    p.add_argument("--rep")
    p.add_argument("--omega", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--depth", type=int, default=1)
    p.set_defaults(handler=cmd_resonance)

    p = sub.add_parser("holonomy", parents=[common],
                       help="holonomy Lie algebra presentation")
    p.add_argument("--cdga", required=True)
    p.set_defaults(handler=cmd_holonomy)

    p = sub.add_parser("detect", parents=[common],
                       help="semi-decision search for nonzero resonance")
    p.add_argument("--cdga", required=True)
    p.add_argument("--mode", choices=["sol2", "heis3"], required=True)
    p.add_argument("--budget", type=int, default=200)
    p.set_defaults(handler=cmd_detect)

    p = sub.add_parser("raag", help="graph decompositions and grid verification")
    rsub = p.add_subparsers(dest="raag_command", required=True)
    d = rsub.add_parser("decompose", parents=[common])
    d.add_argument("--graph", required=True)
    d.add_argument("--rep")
    d.set_defaults(handler=cmd_raag)
    v = rsub.add_parser("verify", parents=[common])
    v.add_argument("--graph", required=True)
    v.add_argument("--lie", default="sl2")
    v.add_argument("--grid", default="-1,0,1")
    v.add_argument("--budget", type=int, default=10_000_000)
    v.set_defaults(handler=cmd_raag)
    c = rsub.add_parser("contract", parents=[common])
    c.add_argument("--graph", required=True)
    c.set_defaults(handler=cmd_raag)
    w = rsub.add_parser("witness", parents=[common])
    w.add_argument("--lie", choices=["sl3", "sl2_x_sl2"], required=True)
    w.set_defaults(handler=cmd_raag, graph=None)

    p = sub.add_parser("curves", help="quasi-projective decompositions")
    csub = p.add_subparsers(dest="curves_command", required=True)
    d = csub.add_parser("decompose", parents=[common])
    d.add_argument("--cdga", required=True)
    d.add_argument("--fibrations")
    d.add_argument("--rep")
    d.set_defaults(handler=cmd_curves)

    p = sub.add_parser("suite", parents=[common], help="run the acceptance suite")
    p.add_argument("--criteria", help="comma-separated criterion indices")
    p.set_defaults(handler=cmd_suite)

    p = sub.add_parser("builtin", parents=[common],
                       help="emit a named built-in document")
    p.add_argument("name", nargs="?")
    p.add_argument("--list", action="store_true")
    p.set_defaults(handler=cmd_builtin)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.handler(args)
    except (ResovarError, FileNotFoundError, json.JSONDecodeError, KeyError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
