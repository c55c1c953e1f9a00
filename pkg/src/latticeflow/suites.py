"""Randomized property suites behind the ``check`` subcommand.

Each suite draws a reproducible corpus from a seeded generator, checks
one theorem-shaped property on every member, and reports a summary.
The suites are also imported by the test suite, so a failure here is a
failure of the build, not a warning.
"""

import itertools
from dataclasses import dataclass
from random import Random
from typing import List, Optional

from .exactmath import det, lattice_index
from .graph import DirectedGraph
from .flowpoly import FlowPolytope, TransportSpec, transport_polytope
from .pconf import PointConfiguration
from .triang import (
    flow_triangulation,
    is_unimodular_triangulation,
    pulling_triangulation,
)
from .toric import (
    BoundExceeded,
    TermOrder,
    buchberger_reduce,
    gb_from_triangulation,
    minimal_generating_set,
)
from .cells import feasible_cell_types, unit_cell_polytope


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    cases: int
    detail: str

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "detail": self.detail,
        }


# ---------------------------------------------------------------------------
# corpus generation
# ---------------------------------------------------------------------------


def _random_demand(rng: Random, n: int, bound: int) -> Optional[tuple]:
    d = [0] * n
    for _ in range(rng.randint(1, 4)):
        i = rng.randrange(n)
        j = rng.randrange(n)
        if i == j or d[i] >= bound or d[j] <= -bound:
            continue
        d[i] += 1
        d[j] -= 1
    if all(x == 0 for x in d):
        return None
    return tuple(d)


def random_flow_polytope(
    rng: Random,
    max_vertices: int = 6,
    max_edges: int = 8,
    demand_bound: int = 3,
    upper_bound: int = 3,
    with_lower: bool = False,
    max_points: int = 35,
):
    """A random nonempty flow polytope with 2..max_points lattice points.

    Returns (polytope, points) or None when the attempt budget runs out.
    """
    for _ in range(400):
        nv = rng.randint(2, max_vertices)
        ne = rng.randint(2, max_edges)
        edges = []
        for _ in range(ne):
            a = rng.randint(1, nv)
            b = rng.randint(1, nv)
            if a != b:
                edges.append((a, b))
        if len(edges) < 2:
            continue
        graph = DirectedGraph.make(tuple(range(1, nv + 1)), edges)
        d = _random_demand(rng, nv, demand_bound)
        if d is None:
            continue
        m = len(edges)
        l = tuple(rng.randint(0, 1) if with_lower else 0 for _ in range(m))
        u = tuple(rng.randint(max(l[e], 1), upper_bound) for e in range(m))
        poly = FlowPolytope(graph, d, u, l)
        pts = poly.enumerate_lattice_points()
        if 2 <= len(pts) <= max_points:
            return poly, pts
    return None


def _random_unimodular_map(rng: Random, n: int):
    """A random unimodular integer matrix built from shear steps."""
    mat = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(3):
        i = rng.randrange(n)
        j = rng.randrange(n)
        if i == j:
            continue
        c = rng.randint(-2, 2)
        for t in range(n):
            mat[i][t] += c * mat[j][t]
    return mat


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def suite_degree3(seed: int, count: int = 50) -> SuiteResult:
    """Generation in degree three for flow polytopes, degree two for 2 x n cells."""
    rng = Random(seed)
    done = 0
    while done < count:
        drawn = random_flow_polytope(rng)
        if drawn is None:
            return SuiteResult("degree3", False, done, "corpus generation starved")
        poly, pts = drawn
        conf = poly.point_configuration()
        try:
            top, _gens = minimal_generating_set(conf, 4)
        except BoundExceeded as exc:
            return SuiteResult(
                "degree3", False, done, f"fiber disconnected at degree 4: {exc}"
            )
        if top > 3:
            return SuiteResult(
                "degree3", False, done, f"generator of degree {top} appeared"
            )
        done += 1
    cells_checked = 0
    for n in range(2, 6):
        for ctype in feasible_cell_types(TransportSpec((1, n - 1), (1,) * n)):
            conf = unit_cell_polytope(ctype).point_configuration()
            try:
                top, _gens = minimal_generating_set(conf, 3)
            except BoundExceeded as exc:
                return SuiteResult(
                    "degree3", False, done, f"2x{n} cell needs degree 3: {exc}"
                )
            if top > 2:
                return SuiteResult(
                    "degree3", False, done, f"2x{n} cell generated in degree {top}"
                )
            cells_checked += 1
    return SuiteResult(
        "degree3", True, done + cells_checked,
        f"{done} random flow polytopes, {cells_checked} 2xn cells",
    )


def suite_gb_bound(seed: int, count: int = 20) -> SuiteResult:
    """Certified unimodular triangulations and the mn/2 Groebner degree bound."""
    rng = Random(seed)
    done = 0
    while done < count:
        m = rng.randint(2, 3)
        n = rng.randint(2, 4)
        matrix = [[rng.randint(0, 1) for _ in range(n)] for _ in range(m)]
        rows = tuple(sum(r) for r in matrix)
        cols = tuple(sum(matrix[i][j] for i in range(m)) for j in range(n))
        if min(rows) < 1 or min(cols) < 1:
            continue
        spec = TransportSpec(rows, cols)
        poly = transport_polytope(spec)
        pts = poly.enumerate_lattice_points()
        if not 2 <= len(pts) <= 36:
            continue
        tri, cert = flow_triangulation(poly)
        conf = tri.conf
        if not cert.verify(conf, tri):
            return SuiteResult("gb-bound", False, done, "certificate failed to verify")
        if not is_unimodular_triangulation(tri):
            return SuiteResult("gb-bound", False, done, "triangulation not unimodular")
        basis = gb_from_triangulation(conf, tri, cert)
        bound = (m * n) // 2
        for g in basis:
            if g.degree > bound:
                return SuiteResult(
                    "gb-bound", False, done,
                    f"basis degree {g.degree} above {bound} for {m}x{n}",
                )
            if any(c != 1 for _i, c in g.lead.items):
                return SuiteResult(
                    "gb-bound", False, done, f"leading term not squarefree: {g.display()}"
                )
        order = TermOrder.weight(cert.weights)
        again = buchberger_reduce(basis, order)
        if {g.pair() for g in again} != {g.pair() for g in basis}:
            return SuiteResult(
                "gb-bound", False, done, "Buchberger moved the reduced basis"
            )
        done += 1
    return SuiteResult("gb-bound", True, done, f"{done} random transport polytopes")


def _all_pulling_unimodular(conf: PointConfiguration, rng: Random, cap: int = 7):
    """Whether every pulling triangulation of conf is unimodular.

    Configurations with at most ``cap`` vertices are checked over all
    vertex orders; orders sharing a prefix share their intermediate
    subdivisions, so the walk memoizes on (state, remaining vertices)
    and collapses the factorial tree to its distinct states.  Larger
    configurations get twenty sampled orders.  Returns (verdict, number
    of distinct complete triangulations seen).
    """
    from .triang import pull, trivial_subdivision

    verts = conf.vertices()
    vol_cache: dict = {}

    def cells_unimodular(d) -> bool:
        for cell in d.maximal_cells:
            ok = vol_cache.get(cell)
            if ok is None:
                ok = (
                    conf.affine_rank(cell) == len(cell) - 1
                    and conf.normalized_volume(cell) == 1
                )
                vol_cache[cell] = ok
            if not ok:
                return False
        return True

    if len(verts) > cap:
        count = 0
        for _ in range(20):
            order = list(verts)
            rng.shuffle(order)
            if not cells_unimodular(pulling_triangulation(conf, order)):
                return False, count
            count += 1
        return True, count

    pull_memo: dict = {}
    seen: dict = {}
    leaves = set()

    def walk(state, remaining: frozenset) -> bool:
        key = (state.maximal_cells, remaining)
        if key in seen:
            return seen[key]
        if not remaining:
            leaves.add(state.maximal_cells)
            verdict = cells_unimodular(state)
        else:
            verdict = True
            for i in remaining:
                pkey = (state.maximal_cells, i)
                child = pull_memo.get(pkey)
                if child is None:
                    child = pull(state, i)
                    pull_memo[pkey] = child
                if not walk(child, remaining - {i}):
                    verdict = False
                    break
        seen[key] = verdict
        return verdict

    ok = walk(trivial_subdivision(conf), frozenset(verts))
    return ok, len(leaves)


def suite_paco(seed: int, count: int = 0) -> SuiteResult:
    """Facet width one if and only if every pulling triangulation is unimodular.

    The width-one side of the corpus is the transport cells of small
    shapes; the width-two-or-more side is stretched simplexes, run
    through a random unimodular change of coordinates.  ``count`` is
    accepted for interface uniformity; the corpus is exhaustive.
    """
    rng = Random(seed)
    checked = 0
    for shape in ((2, 2), (2, 3), (2, 4), (3, 3)):
        m, n = shape
        for ctype in feasible_cell_types(TransportSpec((n,) * m, (m,) * n)):
            conf = unit_cell_polytope(ctype).point_configuration()
            idx = conf.all_indices()
            for facet in conf.facets():
                if conf.facet_width(idx, facet.members) != 1:
                    return SuiteResult(
                        "paco", False, checked,
                        f"cell {ctype.label()} has a facet of width > 1",
                    )
            ok, distinct = _all_pulling_unimodular(conf, rng)
            if not ok:
                return SuiteResult(
                    "paco", False, checked,
                    f"cell {ctype.label()} has a non-unimodular pulling order",
                )
            checked += max(distinct, 1)
    for dim in (2, 3, 4):
        for k in (1, 2, 3):
            base = [(0,) * dim]
            base += [tuple(k if i == j else 0 for j in range(dim)) for i in range(dim)]
            mat = _random_unimodular_map(rng, dim)
            shift = tuple(rng.randint(-2, 2) for _ in range(dim))
            pts = [
                tuple(
                    sum(mat[r][t] * p[t] for t in range(dim)) + shift[r]
                    for r in range(dim)
                )
                for p in base
            ]
            conf = PointConfiguration(pts)
            idx = conf.all_indices()
            widths = [conf.facet_width(idx, f.members) for f in conf.facets()]
            if max(widths) != k:
                return SuiteResult(
                    "paco", False, checked, f"stretched simplex width came out {widths}"
                )
            unimodular, _distinct = _all_pulling_unimodular(conf, rng)
            if unimodular != (k == 1):
                return SuiteResult(
                    "paco", False, checked,
                    f"width {k} simplex broke the equivalence in dim {dim}",
                )
            checked += 1
    return SuiteResult("paco", True, checked, f"{checked} configurations")


def suite_bvn(seed: int, count: int = 100) -> SuiteResult:
    """Integer decomposition of dilate points into polytope points."""
    rng = Random(seed)
    done = 0
    lowered = 0
    while done < count:
        with_lower = done % 2 == 1
        drawn = random_flow_polytope(rng, with_lower=with_lower)
        if drawn is None:
            return SuiteResult("bvn", False, done, "corpus generation starved")
        poly, pts = drawn
        if any(le > 0 for le in poly.l):
            lowered += 1
        k = rng.randint(1, 5)
        picks = [rng.choice(pts) for _ in range(k)]
        target = tuple(sum(p[e] for p in picks) for e in range(len(pts[0])))
        parts = poly.bvn_decompose(target, k)
        if len(parts) != k:
            return SuiteResult("bvn", False, done, f"expected {k} parts, got {len(parts)}")
        if any(not poly.contains(part) for part in parts):
            return SuiteResult("bvn", False, done, "part left the polytope")
        back = tuple(sum(p[e] for p in parts) for e in range(len(target)))
        if back != target:
            return SuiteResult("bvn", False, done, "parts do not sum back")
        done += 1
    if lowered < count // 4:
        return SuiteResult(
            "bvn", False, done, "corpus has too few nonzero-lower-bound cases"
        )
    return SuiteResult(
        "bvn", True, done, f"{done} decompositions, {lowered} with nonzero lower bounds"
    )


def suite_volume(seed: int, count: int = 200) -> SuiteResult:
    """Volume identities on random simplexes of dimension up to four."""
    rng = Random(seed)
    done = 0
    while done < count:
        dim = rng.randint(1, 4)
        pts = [
            tuple(rng.randint(0, 3) for _ in range(dim)) for _ in range(dim + 1)
        ]
        if len(set(pts)) != dim + 1:
            continue
        base = pts[0]
        diffs = [[p[j] - base[j] for j in range(dim)] for p in pts[1:]]
        v_det = abs(det(diffs))
        if v_det == 0:
            continue
        conf = PointConfiguration(pts)
        simplex = conf.all_indices()
        v_norm = conf.normalized_volume(simplex)
        v_index = lattice_index(diffs)
        if not v_det == v_index == v_norm:
            return SuiteResult(
                "volume", False, done,
                f"definitions disagree: det {v_det}, index {v_index}, norm {v_norm}",
            )
        for b in range(1, dim + 1):
            other = [
                [pts[i][j] - pts[b][j] for j in range(dim)]
                for i in range(dim + 1)
                if i != b
            ]
            if abs(det(other)) != v_det:
                return SuiteResult(
                    "volume", False, done, "volume depends on the base vertex"
                )
        shift = tuple(rng.randint(-5, 5) for _ in range(dim))
        moved = PointConfiguration(
            [tuple(x + s for x, s in zip(p, shift)) for p in pts]
        )
        if moved.normalized_volume(moved.all_indices()) != v_norm:
            return SuiteResult("volume", False, done, "volume moved under translation")
        facets = conf.facets()
        facet = facets[rng.randrange(len(facets))]
        width = conf.facet_width(simplex, facet.members)
        v_facet = conf.normalized_volume(facet.members)
        if v_norm != width * v_facet:
            return SuiteResult(
                "volume", False, done,
                f"base-times-width failed: {v_norm} != {width} * {v_facet}",
            )
        done += 1
    return SuiteResult("volume", True, done, f"{done} random simplexes")


SUITES = {
    "degree3": suite_degree3,
    "gb-bound": suite_gb_bound,
    "paco": suite_paco,
    "bvn": suite_bvn,
    "volume": suite_volume,
}


def run_suites(names, seed: int, counts=None) -> List[SuiteResult]:
    out = []
    for name in names:
        fn = SUITES[name]
        kwargs = {}
        if counts and name in counts:
            kwargs["count"] = counts[name]
        out.append(fn(seed, **kwargs))
    return out
