"""Command line surface over the toolkit.

Twelve subcommands cover lattice point enumeration, dimension and
smoothness reports, Birkhoff-von-Neumann decomposition, cell listings,
the 3 x 4 catalog, triangulations with regularity certificates,
generating sets, Groebner bases, the high degree family, rescuer
searches and the randomized property suites.

Output is deterministic for a fixed command line: JSON is printed with
sorted keys, and table rows follow the canonical orders of the owning
modules.  Tables use 1-based point numbers to match the usual x_i
notation; JSON keeps the 0-based indices of the library.  Exit codes
are 0 for success, 1 for a domain error and 2 for a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .cells import (
    OddDimension,
    SearchBoundExceeded,
    catalog_3x4,
    catalog_to_json,
    catalog_to_text,
    cell,
    enumerate_full_cells,
    high_degree_family,
    rescuer_search,
    verify_min_generator,
)
from .flowpoly import (
    DegenerateInput,
    EmptyPolytope,
    FlowPolytope,
    NotInDilate,
    NotTwoRows,
    SumMismatch,
    TransportSpec,
    chi,
    is_smooth_general,
    is_smooth_transport,
    transport_polytope,
)
from .graph import DirectedGraph
from .pconf import AffinelyDependent, NotAFacet
from .suites import SUITES, run_suites
from .toric import (
    Binomial,
    BoundExceeded,
    DegreeGuardExceeded,
    Exponent,
    NonIntegralRepresentation,
    TermOrder,
    buchberger_reduce,
    gb_from_triangulation,
    minimal_generating_set,
)
from .triang import (
    certified_pulling_triangulation,
    flow_triangulation,
    is_unimodular_triangulation,
    regular_subdivision,
)

DOMAIN_ERRORS = (
    ValueError,
    EmptyPolytope,
    NotInDilate,
    SumMismatch,
    NotTwoRows,
    DegenerateInput,
    NotAFacet,
    AffinelyDependent,
    OddDimension,
    SearchBoundExceeded,
    BoundExceeded,
    NonIntegralRepresentation,
    DegreeGuardExceeded,
)


# ---------------------------------------------------------------------------
# input parsing
# ---------------------------------------------------------------------------


def _parse_ints(text: str, what: str, parser) -> list:
    try:
        return [int(tok) for tok in text.split(",")]
    except ValueError:
        parser.error(f"{what} must be a comma separated list of integers")


def _parse_label(tok: str):
    tok = tok.strip()
    try:
        return int(tok)
    except ValueError:
        return tok


def add_polytope_arguments(parser) -> None:
    group = parser.add_argument_group("polytope input (exactly one source)")
    group.add_argument(
        "--transport",
        metavar="ROWS/COLS",
        help="transportation margins, e.g. 1,1,10/3,3,3,3",
    )
    group.add_argument(
        "--edges",
        metavar="LIST",
        help="directed edges tail>head, e.g. 1>2,1>3,2>3",
    )
    group.add_argument(
        "--demand",
        metavar="LIST",
        help="vertex demands for --edges, vertices in first appearance order",
    )
    group.add_argument(
        "--lower", metavar="LIST", help="edge lower bounds, default all 0"
    )
    group.add_argument(
        "--upper",
        metavar="LIST",
        help="edge upper bounds, 'inf' entries allowed, default all inf",
    )
    group.add_argument(
        "--unchecked-demand",
        action="store_true",
        help="allow the identically zero demand vector",
    )
    group.add_argument(
        "--polytope",
        metavar="SRC",
        help="flow polytope as JSON: a file path, - for stdin, or an inline object",
    )


def load_polytope(args, parser):
    """Build the flow polytope named on the command line.

    Returns the polytope together with its transportation margins when
    the input came from --transport, else None in that slot.
    """
    sources = [
        name
        for name in ("transport", "edges", "polytope")
        if getattr(args, name) is not None
    ]
    if len(sources) != 1:
        parser.error("exactly one of --transport, --edges, --polytope is required")
    if args.transport is not None:
        halves = args.transport.split("/")
        if len(halves) != 2:
            parser.error("--transport wants ROWS/COLS, e.g. 1,1,10/3,3,3,3")
        rows = _parse_ints(halves[0], "--transport rows", parser)
        cols = _parse_ints(halves[1], "--transport cols", parser)
        spec = TransportSpec(rows, cols)
        return transport_polytope(spec), spec
    if args.edges is not None:
        if args.demand is None:
            parser.error("--edges requires --demand")
        edges = []
        vertices = []
        seen = set()
        for tok in args.edges.split(","):
            ends = tok.split(">")
            if len(ends) != 2 or not ends[0].strip() or not ends[1].strip():
                parser.error("--edges entries must look like tail>head")
            tail, head = _parse_label(ends[0]), _parse_label(ends[1])
            edges.append((tail, head))
            for v in (tail, head):
                if v not in seen:
                    seen.add(v)
                    vertices.append(v)
        graph = DirectedGraph.make(vertices, edges)
        demand = _parse_ints(args.demand, "--demand", parser)
        if len(demand) != len(vertices):
            parser.error(
                f"--demand wants {len(vertices)} entries, one per vertex"
            )
        lower = None
        if args.lower is not None:
            lower = _parse_ints(args.lower, "--lower", parser)
            if len(lower) != len(edges):
                parser.error(f"--lower wants {len(edges)} entries, one per edge")
        upper = None
        if args.upper is not None:
            upper = []
            for tok in args.upper.split(","):
                if tok.strip() == "inf":
                    upper.append(None)
                else:
                    upper.append(_parse_ints(tok, "--upper", parser)[0])
            if len(upper) != len(edges):
                parser.error(f"--upper wants {len(edges)} entries, one per edge")
        poly = FlowPolytope(
            graph,
            demand,
            upper,
            lower,
            unchecked_demand=args.unchecked_demand,
        )
        return poly, None
    src = args.polytope
    if src == "-":
        text = sys.stdin.read()
    elif src.lstrip().startswith("{"):
        text = src
    else:
        with open(src, "r", encoding="utf-8") as handle:
            text = handle.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        parser.error(f"--polytope is not valid JSON: {exc}")
    poly = FlowPolytope.from_json(data)
    if args.unchecked_demand:
        poly = FlowPolytope(
            poly.graph, poly.d, poly.u, poly.l, unchecked_demand=True
        )
    return poly, None


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------


def _emit_json(obj) -> int:
    print(json.dumps(obj, indent=2, sort_keys=True))
    return 0


def _emit_table(lines) -> int:
    for line in lines:
        print(line)
    return 0


def _b(flag) -> str:
    return "true" if flag else "false"


def _row(vec) -> str:
    return " ".join(str(x) for x in vec)


def _sorted_binomials(gens) -> list:
    return sorted(gens, key=lambda g: (g.degree, g.lead.items, g.trail.items))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_points(args, parser) -> int:
    poly, _spec = load_polytope(args, parser)
    pts = poly.enumerate_lattice_points()
    if args.format == "json":
        return _emit_json({"count": len(pts), "points": [list(p) for p in pts]})
    return _emit_table(_row(p) for p in pts)


def cmd_dim(args, parser) -> int:
    poly, _spec = load_polytope(args, parser)
    rep = poly.dimension()
    if args.format == "json":
        return _emit_json(
            {
                "dimension": int(rep),
                "upper_bound": rep.upper_bound,
                "attained": rep.attained,
                "components": rep.components,
            }
        )
    return _emit_table(
        [
            f"dimension {int(rep)}",
            f"upper_bound {rep.upper_bound}",
            f"attained {_b(rep.attained)}",
            f"components {rep.components}",
        ]
    )


def cmd_smooth(args, parser) -> int:
    poly, spec = load_polytope(args, parser)
    report = is_smooth_general(poly.enumerate_lattice_points())
    transport_smooth = None
    pairs = None
    if spec is not None:
        transport_smooth = is_smooth_transport(spec)
        pairs = sorted((sorted(i), sorted(j)) for i, j in chi(spec))
    if args.format == "json":
        return _emit_json(
            {
                "general": {
                    "smooth": report.smooth,
                    "bad_vertex": None
                    if report.bad_vertex is None
                    else list(report.bad_vertex),
                    "reason": report.reason,
                },
                "transport": transport_smooth,
                "agree": None
                if transport_smooth is None
                else transport_smooth == report.smooth,
                "chi": None
                if pairs is None
                else [[list(i), list(j)] for i, j in pairs],
            }
        )
    lines = [f"general_smooth {_b(report.smooth)}"]
    if report.bad_vertex is not None:
        lines.append(f"bad_vertex {_row(report.bad_vertex)}")
    if report.reason:
        lines.append(f"reason {report.reason}")
    if transport_smooth is not None:
        lines.append(f"transport_smooth {_b(transport_smooth)}")
        lines.append(f"agree {_b(transport_smooth == report.smooth)}")
        for i, j in pairs:
            lines.append(
                "chi " + ",".join(map(str, i)) + " | " + ",".join(map(str, j))
            )
    return _emit_table(lines)


def cmd_decompose(args, parser) -> int:
    poly, _spec = load_polytope(args, parser)
    flow = _parse_ints(args.flow, "--flow", parser)
    if len(flow) != len(poly.graph.edges):
        parser.error(
            f"--flow wants {len(poly.graph.edges)} entries, one per edge"
        )
    parts = poly.bvn_decompose(tuple(flow), args.k)
    if args.format == "json":
        return _emit_json(
            {
                "k": args.k,
                "flow": list(flow),
                "members": [list(p) for p in parts],
            }
        )
    return _emit_table(_row(p) for p in parts)


def cmd_cells(args, parser) -> int:
    poly, _spec = load_polytope(args, parser)
    found = enumerate_full_cells(poly)
    rows = []
    for key, ctype in found:
        piece = cell(poly, key)
        rows.append((key, ctype, len(piece.enumerate_lattice_points())))
    if args.format == "json":
        return _emit_json(
            {
                "cells": [
                    {
                        "offsets": list(key.offsets),
                        "label": ctype.label(),
                        "type": ctype.to_json(),
                        "points": npts,
                    }
                    for key, ctype, npts in rows
                ]
            }
        )
    return _emit_table(
        f"{ctype.label()} offsets {_row(key.offsets)} points {npts}"
        for key, ctype, npts in rows
    )


def cmd_catalog(args, parser) -> int:
    rows = catalog_3x4()
    if args.format == "json":
        print(catalog_to_json(rows))
        return 0
    print(catalog_to_text(rows))
    return 0


def cmd_triangulate(args, parser) -> int:
    poly, _spec = load_polytope(args, parser)
    if args.weights is not None and args.method != "regular":
        parser.error("--weights only applies to --method regular")
    if args.method == "hyperplane":
        tri, cert = flow_triangulation(poly)
    elif args.method == "pulling":
        conf = poly.point_configuration()
        tri, cert = certified_pulling_triangulation(conf)
    else:
        if args.weights is None:
            parser.error("--method regular requires --weights")
        conf = poly.point_configuration()
        try:
            weights = [Fraction(tok) for tok in args.weights.split(",")]
        except (ValueError, ZeroDivisionError):
            parser.error("--weights must be comma separated rationals like 3/2")
        tri, cert = regular_subdivision(conf, weights)
    is_tri = tri.is_triangulation()
    unimod = is_unimodular_triangulation(tri)
    if args.format == "json":
        return _emit_json(
            {
                "method": args.method,
                "maximal_cells": [list(c) for c in tri.maximal_cells],
                "certificate": cert.to_json(),
                "is_triangulation": is_tri,
                "unimodular": unimod,
            }
        )
    lines = [
        "cell " + _row(i + 1 for i in c) for c in tri.maximal_cells
    ]
    lines.append(f"is_triangulation {_b(is_tri)}")
    lines.append(f"unimodular {_b(unimod)}")
    lines.append("weights " + _row(cert.weights))
    return _emit_table(lines)


def cmd_gens(args, parser) -> int:
    poly, _spec = load_polytope(args, parser)
    conf = poly.point_configuration()
    top, gens = minimal_generating_set(conf, args.dmax)
    gens = _sorted_binomials(gens)
    if args.format == "json":
        return _emit_json(
            {
                "top_degree": top,
                "count": len(gens),
                "generators": [g.to_json() for g in gens],
            }
        )
    return _emit_table(g.display() for g in gens)


def cmd_gb(args, parser) -> int:
    poly, _spec = load_polytope(args, parser)
    conf = poly.point_configuration()
    if args.method == "triangulation":
        tri, cert = flow_triangulation(poly)
        basis = gb_from_triangulation(conf, tri, cert)
        order = TermOrder.weight(cert.weights)
    else:
        _top, gens = minimal_generating_set(conf, args.dmax)
        order = TermOrder.grevlex(len(conf))
        basis = buchberger_reduce(gens, order, conf)
    basis = _sorted_binomials(basis)
    if args.format == "json":
        return _emit_json(
            {
                "method": args.method,
                "order": order.to_json(),
                "count": len(basis),
                "basis": [g.to_json() for g in basis],
            }
        )
    return _emit_table(g.display() for g in basis)


def cmd_family(args, parser) -> int:
    fam = high_degree_family(args.m, args.n)
    rhs = None
    for i, coeff in fam.relation.trail.items:
        mat = fam.involved[i]
        scaled = [[coeff * x for x in row] for row in mat]
        if rhs is None:
            rhs = scaled
        else:
            rhs = [
                [a + b for a, b in zip(ra, rb)] for ra, rb in zip(rhs, scaled)
            ]
    verified = None
    if args.verify:
        conf = fam.involved_config()
        verified = verify_min_generator(
            conf, fam.relation, fam.order_hint, search_bound=args.search_bound
        )
    if args.format == "json":
        out = {
            "m": fam.m,
            "n": fam.n,
            "rows": list(fam.spec.rows),
            "cols": list(fam.spec.cols),
            "degree": fam.degree,
            "relation": fam.relation.to_json(),
            "rhs": rhs,
            "involved": [[list(row) for row in mat] for mat in fam.involved],
            "shift": [list(row) for row in fam.shift],
        }
        if args.verify:
            out["verified_minimal"] = verified
        return _emit_json(out)
    lines = [
        f"m {fam.m}",
        f"n {fam.n}",
        "rows " + _row(fam.spec.rows),
        "cols " + _row(fam.spec.cols),
        f"degree {fam.degree}",
        f"relation {fam.relation.display()}",
        "rhs",
    ]
    lines.extend(_row(row) for row in rhs)
    if args.verify:
        lines.append(f"verified_minimal {_b(verified)}")
    return _emit_table(lines)


def _parse_relation_side(text: str, what: str, parser) -> Exponent:
    indices = _parse_ints(text, what, parser)
    if any(i < 1 for i in indices):
        parser.error(f"{what} uses 1-based point numbers")
    return Exponent.from_indices(i - 1 for i in indices)


def cmd_rescue(args, parser) -> int:
    poly, _spec = load_polytope(args, parser)
    lead = _parse_relation_side(args.lead, "--lead", parser)
    trail = _parse_relation_side(args.trail, "--trail", parser)
    relation = Binomial(lead, trail)
    found = rescuer_search(poly, relation)
    if args.format == "json":
        if found is None:
            return _emit_json({"found": False})
        return _emit_json(
            {
                "found": True,
                "kind": found.kind,
                "matrices": [list(m) for m in found.matrices],
                "anchor": list(found.anchor),
                "swapped": found.swapped,
            }
        )
    if found is None:
        return _emit_table(["found false"])
    lines = [
        "found true",
        f"kind {found.kind}",
        "anchor " + _row(i + 1 for i in found.anchor),
        f"swapped {_b(found.swapped)}",
    ]
    lines.extend(_row(m) for m in found.matrices)
    return _emit_table(lines)


def cmd_check(args, parser) -> int:
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    results = run_suites(names, args.seed)
    if args.format == "json":
        _emit_json(
            {"seed": args.seed, "results": [r.to_json() for r in results]}
        )
    else:
        _emit_table(
            f"{r.name} {'passed' if r.passed else 'FAILED'} "
            f"cases={r.cases} {r.detail}"
            for r in results
        )
    return 0 if all(r.passed for r in results) else 1


# ---------------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latticeflow",
        description="flow polytopes, their cells and their toric ideals",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text, polytope=True):
        p = sub.add_parser(name, help=help_text)
        p.add_argument(
            "--format",
            choices=("json", "table"),
            default="table",
            help="output format, default table",
        )
        if polytope:
            add_polytope_arguments(p)
        p.set_defaults(handler=handler)
        return p

    add("points", cmd_points, "enumerate the lattice points")
    add("dim", cmd_dim, "dimension and the graph upper bound")
    add("smooth", cmd_smooth, "smoothness by both tests with agreement flag")

    p = add("decompose", cmd_decompose, "write a point of k F as a sum of k points")
    p.add_argument("--flow", required=True, metavar="LIST", help="the point of k F")
    p.add_argument("--k", required=True, type=int, help="dilation factor")

    add("cells", cmd_cells, "full-dimensional cells with their types")
    add("catalog-3x4", cmd_catalog, "the 3 x 4 cell catalog", polytope=False)

    p = add("triangulate", cmd_triangulate, "triangulation with a regularity certificate")
    p.add_argument(
        "--method",
        choices=("pulling", "regular", "hyperplane"),
        default="hyperplane",
        help="construction, default hyperplane",
    )
    p.add_argument(
        "--weights",
        metavar="LIST",
        help="rational weights for --method regular",
    )

    p = add("gens", cmd_gens, "minimal generating set of the toric ideal")
    p.add_argument(
        "--dmax", type=int, default=4, help="degree cap for the search, default 4"
    )

    p = add("gb", cmd_gb, "reduced Groebner basis")
    p.add_argument(
        "--method",
        choices=("triangulation", "buchberger"),
        default="triangulation",
        help="construction, default triangulation",
    )
    p.add_argument(
        "--dmax",
        type=int,
        default=4,
        help="degree cap for the generators fed to buchberger, default 4",
    )

    p = add("family", cmd_family, "high degree Groebner family", polytope=False)
    p.add_argument("--m", required=True, type=int, help="even row count, at least 4")
    p.add_argument("--n", required=True, type=int, help="even column count, at least 4")
    p.add_argument(
        "--verify",
        action="store_true",
        help="verify the relation lead is a minimal initial ideal generator",
    )
    p.add_argument(
        "--search-bound",
        type=int,
        default=None,
        help="fiber size cap for --verify",
    )

    p = add("rescue", cmd_rescue, "search rescuers for a cubic relation")
    p.add_argument(
        "--lead",
        required=True,
        metavar="LIST",
        help="1-based point numbers of the lead side, e.g. 6,11,13",
    )
    p.add_argument(
        "--trail",
        required=True,
        metavar="LIST",
        help="1-based point numbers of the trail side",
    )

    p = add("check", cmd_check, "run randomized property suites", polytope=False)
    p.add_argument(
        "--suite",
        choices=tuple(sorted(SUITES)) + ("all",),
        default="all",
        help="which suite, default all",
    )
    p.add_argument("--seed", type=int, default=0, help="random seed, default 0")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args, parser)
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
