"""Unit-window cells of flow polytopes and what they say about ideals.

Slicing a flow polytope along all integral coordinate hyperplanes breaks
it into cells on which every edge value varies by at most one.  The
pieces are small transportation-like polytopes in their own right, and
questions about the ambient toric ideal (generation degree, quadratic
expressibility of cubic relations) reduce to questions about the cells
plus a thin layer of glue between them.

This module extracts cells and their combinatorial types, enumerates
the types a shape can support, recomputes the catalog for the 3 x 4
transport case, walks cell adjacencies, searches for the auxiliary
points that express a cubic cell relation through quadrics, and builds
the block-matrix family whose reduced Groebner bases have high degree
under a deliberately bad term order.
"""

import itertools
import json
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .graph import DirectedGraph, incidence_matrix
from .flowpoly import (
    FlowPolytope,
    TransportSpec,
    transport_polytope,
)
from .pconf import PointConfiguration
from .triang import flow_triangulation, hyperplane_subdivision_flow
from .toric import (
    Binomial,
    DegreeTooLarge,
    Exponent,
    TermOrder,
    gb_from_triangulation,
    is_in_ideal,
    minimal_generating_set,
    fiber,
    pi,
)


class OddDimension(Exception):
    """The block construction needs even side lengths."""


class SearchBoundExceeded(Exception):
    """A bounded search ran out of budget before reaching an answer.

    Distinct from a negative result: the question is left open.
    """


# ---------------------------------------------------------------------------
# keys and types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CellKey:
    """Integer offset per edge; the cell is the window [k, k+1]."""

    offsets: tuple

    def __init__(self, offsets: Sequence[int]):
        offsets = tuple(offsets)
        for x in offsets:
            if not isinstance(x, int) or isinstance(x, bool):
                raise ValueError("offsets must be integers")
        object.__setattr__(self, "offsets", offsets)

    def to_json(self) -> dict:
        return {"offsets": list(self.offsets)}

    @staticmethod
    def from_json(data: dict) -> "CellKey":
        return CellKey(tuple(data["offsets"]))


@dataclass(frozen=True)
class CellType:
    """Combinatorial type of a shifted cell.

    ``demand`` is the demand vector of the cell after translation into
    the unit cube.  For transportation shapes the same data is carried
    as the positive row and column labels: a cell of type Z^r_c holds
    the 0/1 matrices with row sums r and column sums c.  ``canonical``
    marks instances whose labels have been sorted into normal form.
    """

    demand: tuple
    rows: Optional[tuple]
    cols: Optional[tuple]
    canonical: bool = False

    def __init__(self, demand, rows=None, cols=None, canonical=False):
        demand = tuple(int(x) for x in demand)
        if (rows is None) != (cols is None):
            raise ValueError("row and column labels come together")
        if rows is not None:
            rows = tuple(int(x) for x in rows)
            cols = tuple(int(x) for x in cols)
            expect = tuple(-r for r in rows) + cols
            if demand != expect:
                raise ValueError("labels do not match the demand vector")
        object.__setattr__(self, "demand", demand)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "canonical", bool(canonical))

    # -- labels ----------------------------------------------------------

    @property
    def is_transport(self) -> bool:
        return self.rows is not None

    def total(self) -> Optional[int]:
        """Sum of all matrix entries in the cell, for transport types."""
        if not self.is_transport:
            return None
        return sum(self.rows)

    def label(self) -> str:
        if self.is_transport:
            up = ",".join(str(r) for r in self.rows)
            lo = ",".join(str(c) for c in self.cols)
            return f"Z^{{{up}}}_{{{lo}}}"
        inner = ",".join(str(d) for d in self.demand)
        return f"Z_({inner})"

    # -- normal forms ------------------------------------------------------

    def sorted(self) -> "CellType":
        """Labels sorted ascending; the display form of the type."""
        if not self.is_transport:
            return CellType(self.demand, canonical=True)
        rows = tuple(sorted(self.rows))
        cols = tuple(sorted(self.cols))
        demand = tuple(-r for r in rows) + cols
        return CellType(demand, rows, cols, canonical=True)

    def complement(self) -> "CellType":
        """The type of the image under flipping zeros and ones."""
        if not self.is_transport:
            raise ValueError("complementation needs a transport type")
        n = len(self.cols)
        m = len(self.rows)
        rows = tuple(n - r for r in self.rows)
        cols = tuple(m - c for c in self.cols)
        demand = tuple(-r for r in rows) + cols
        return CellType(demand, rows, cols)

    def _pair_key(self) -> tuple:
        rows = tuple(sorted(self.rows, reverse=True))
        cols = tuple(sorted(self.cols, reverse=True))
        return (rows, cols)

    def representative(self) -> "CellType":
        """The smaller of the type and its complement, sorted.

        Complementary cells carry the same toric ideal, so tables are
        indexed by the lexicographically smaller member of each pair
        (compared on descending labels).
        """
        if not self.is_transport:
            return self.sorted() if not self.canonical else self
        mine = self.sorted()
        other = self.complement().sorted()
        return mine if mine._pair_key() <= other._pair_key() else other

    @property
    def is_representative(self) -> bool:
        return self.representative() == self.sorted() if self.is_transport else True

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "demand": list(self.demand),
            "rows": list(self.rows) if self.rows is not None else None,
            "cols": list(self.cols) if self.cols is not None else None,
            "canonical": self.canonical,
            "label": self.label(),
        }

    @staticmethod
    def from_json(data: dict) -> "CellType":
        rows = data.get("rows")
        cols = data.get("cols")
        return CellType(
            tuple(data["demand"]),
            tuple(rows) if rows is not None else None,
            tuple(cols) if cols is not None else None,
            data.get("canonical", False),
        )


# ---------------------------------------------------------------------------
# cell extraction
# ---------------------------------------------------------------------------


def cell(p: FlowPolytope, k) -> FlowPolytope:
    """The cell of p at offset k: all points with k <= f <= k + 1.

    The result lives on the same graph with the same demands; only the
    bounds are intersected with the unit window.  Shifting the cell by
    -k puts it inside the unit cube.  An offset far away from the
    polytope yields an empty cell, never an error.
    """
    offsets = k.offsets if isinstance(k, CellKey) else tuple(k)
    m = len(p.graph.edges)
    if len(offsets) != m:
        raise ValueError("offset vector must have one entry per edge")
    lower = tuple(max(p.l[e], offsets[e]) for e in range(m))
    upper = tuple(
        offsets[e] + 1 if p.u[e] is None else min(p.u[e], offsets[e] + 1)
        for e in range(m)
    )
    return FlowPolytope(p.graph, p.d, upper, lower, unchecked_demand=p.unchecked_demand)


def shifted_demand(p: FlowPolytope, k) -> tuple:
    """Demand vector of the cell at k after translating by -k."""
    offsets = k.offsets if isinstance(k, CellKey) else tuple(k)
    inc = incidence_matrix(p.graph)
    n = len(p.graph.vertices)
    m = len(p.graph.edges)
    return tuple(
        p.d[v] - sum(inc[v][e] * offsets[e] for e in range(m)) for v in range(n)
    )


def _transport_shape(graph: DirectedGraph) -> Optional[tuple]:
    """Recognize the complete bipartite row-major layout.

    Returns (m, n) when the graph is the transport graph on m row
    vertices followed by n column vertices with edges listed row-major,
    and None for anything else.
    """
    tails = []
    heads = []
    for (a, b) in graph.edges:
        if a not in tails:
            tails.append(a)
        if b not in heads:
            heads.append(b)
    m, n = len(tails), len(heads)
    if set(tails) & set(heads):
        return None
    if len(graph.vertices) != m + n or len(graph.edges) != m * n:
        return None
    if tuple(graph.vertices) != tuple(tails) + tuple(heads):
        return None
    expect = tuple((tails[i], heads[j]) for i in range(m) for j in range(n))
    if tuple(graph.edges) != expect:
        return None
    return (m, n)


def cell_type(p: FlowPolytope, k) -> CellType:
    """Raw type of the cell at k, with transport labels when they apply."""
    demand = shifted_demand(p, k)
    shape = _transport_shape(p.graph)
    if shape is None:
        return CellType(demand)
    m, n = shape
    rows = tuple(-demand[i] for i in range(m))
    cols = tuple(demand[m + j] for j in range(n))
    return CellType(demand, rows, cols)


def enumerate_full_cells(p: FlowPolytope) -> List[Tuple[CellKey, CellType]]:
    """All full-dimensional cells of p with their raw types.

    The coordinate hyperplane subdivision delivers candidate windows;
    each window is rebuilt as a flow polytope and kept when its
    dimension matches the ambient one.  Offsets are read off as the
    coordinate minima of the window's points, which is exact because
    the subdivision cuts at every integral level.
    """
    conf = p.point_configuration()
    ambient = conf.affine_rank()
    subdivision = hyperplane_subdivision_flow(p)
    out = []
    for indices in subdivision.maximal_cells:
        pts = [conf.points[i] for i in indices]
        key = CellKey(tuple(min(col) for col in zip(*pts)))
        piece = cell(p, key)
        if int(piece.dimension()) != ambient:
            continue
        window = set(piece.enumerate_lattice_points())
        if window != set(pts):
            raise RuntimeError("subdivision cell disagrees with its window")
        out.append((key, cell_type(p, key)))
    out.sort(key=lambda item: item[0].offsets)
    return out


# ---------------------------------------------------------------------------
# feasible types
# ---------------------------------------------------------------------------


def feasible_cell_types(shape) -> List[CellType]:
    """Every type a full-dimensional cell of the given shape can have.

    For an m x n transport shape the labels of a full cell satisfy
    1 <= r_i <= n - 1 and 1 <= c_j <= m - 1 with equal totals; the
    survivors are sorted into canonical form and deduplicated.  For a
    directed graph the demand at each vertex lying on an undirected
    cycle is strictly between -outdegree and indegree, weakly between
    them elsewhere, and the demands sum to zero.
    """
    if isinstance(shape, TransportSpec):
        m, n = shape.shape
        found = {}
        for rows in itertools.product(range(1, n), repeat=m):
            for cols in itertools.product(range(1, m), repeat=n):
                if sum(rows) != sum(cols):
                    continue
                key = (tuple(sorted(rows)), tuple(sorted(cols)))
                if key in found:
                    continue
                rs, cs = key
                demand = tuple(-r for r in rs) + cs
                found[key] = CellType(demand, rs, cs, canonical=True)
        out = list(found.values())
        out.sort(
            key=lambda t: (
                t.total(),
                tuple(sorted(t.rows, reverse=True)),
                tuple(sorted(t.cols, reverse=True)),
            )
        )
        return out
    if isinstance(shape, DirectedGraph):
        bridges = shape.bridge_edges()
        nverts = len(shape.vertices)
        on_cycle = [False] * nverts
        indeg = [0] * nverts
        outdeg = [0] * nverts
        for e, (a, b) in enumerate(shape.edges):
            ia = shape.vertex_index(a)
            ib = shape.vertex_index(b)
            outdeg[ia] += 1
            indeg[ib] += 1
            if e not in bridges:
                on_cycle[ia] = True
                on_cycle[ib] = True
        ranges = []
        for v in range(nverts):
            if on_cycle[v]:
                ranges.append(range(-outdeg[v] + 1, indeg[v]))
            else:
                ranges.append(range(-outdeg[v], indeg[v] + 1))
        out = [
            CellType(d, canonical=True)
            for d in itertools.product(*ranges)
            if sum(d) == 0
        ]
        out.sort(key=lambda t: t.demand)
        return out
    raise TypeError("shape must be a TransportSpec or a DirectedGraph")


# ---------------------------------------------------------------------------
# the 3 x 4 catalog
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogRow:
    """One ideal class of 3 x 4 cells: its members and its generators."""

    cell_type: CellType
    members: tuple
    points: int
    degree: Optional[int]
    generators: tuple


def unit_cell_polytope(ctype: CellType) -> FlowPolytope:
    """The 0/1 transport polytope realizing a transport cell type."""
    if not ctype.is_transport:
        raise ValueError("only transport types have a standard realization")
    base = transport_polytope(TransportSpec(ctype.rows, ctype.cols))
    m = len(base.graph.edges)
    return FlowPolytope(base.graph, base.d, (1,) * m, (0,) * m)


def catalog_3x4() -> List[CatalogRow]:
    """Recompute the generator table for 3 x 4 transport cells.

    One row per complementary pair of feasible types; the ideal of each
    representative is generated from scratch, so the table is evidence
    rather than a transcript.
    """
    types = feasible_cell_types(TransportSpec((4, 4, 4), (3, 3, 3, 3)))
    rows = []
    for t in types:
        if not t.is_representative:
            continue
        partner = t.complement().sorted()
        members = (t,) if partner == t else (t, partner)
        poly = unit_cell_polytope(t)
        conf = poly.point_configuration()
        top, gens = minimal_generating_set(conf, 4)
        rows.append(
            CatalogRow(
                cell_type=t,
                members=members,
                points=len(conf),
                degree=top if gens else None,
                generators=tuple(gens),
            )
        )
    return rows


def catalog_to_json(rows: Sequence[CatalogRow]) -> str:
    data = []
    for r in rows:
        data.append(
            {
                "type": r.cell_type.label(),
                "members": [m.label() for m in r.members],
                "points": r.points,
                "degree": r.degree,
                "generator_count": len(r.generators),
                "generators": [g.display() for g in r.generators],
            }
        )
    return json.dumps({"rows": data}, indent=2, sort_keys=True)


def catalog_to_text(rows: Sequence[CatalogRow]) -> str:
    header = ("type", "points", "degree", "generators", "partner")
    table = [header]
    for r in rows:
        partner = r.members[1].label() if len(r.members) > 1 else "-"
        table.append(
            (
                r.cell_type.label(),
                str(r.points),
                str(r.degree) if r.degree is not None else "-",
                str(len(r.generators)),
                partner,
            )
        )
    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    lines = []
    for row in table:
        lines.append(
            "  ".join(row[i].ljust(widths[i]) for i in range(len(header))).rstrip()
        )
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# adjacency
# ---------------------------------------------------------------------------


def neighbor_cells(p: FlowPolytope, key: CellKey) -> List[CellKey]:
    """Full cells behind the cell-facets that do not support p.

    A facet of the cell either lies in a supporting hyperplane of the
    whole polytope (then nothing is behind it) or it is one of the
    interior cuts, and the full cells on the far side that contain the
    entire facet are the neighbors.
    """
    full = enumerate_full_cells(p)
    keys = [k for k, _t in full]
    if key not in keys:
        raise ValueError("offset does not name a full-dimensional cell")
    piece = cell(p, key)
    conf = piece.point_configuration()
    ambient_points = p.enumerate_lattice_points()
    others = []
    for other in keys:
        if other == key:
            continue
        others.append((other, set(cell(p, other).enumerate_lattice_points())))
    found = []
    for facet in conf.facets():
        members = set(conf.points[i] for i in facet.members)
        psi = facet.functional
        level = facet.level
        supports = all(
            sum(f * x for f, x in zip(psi, pt)) >= level for pt in ambient_points
        )
        if supports:
            continue
        for other, pts in others:
            if other in found:
                continue
            if not members <= pts:
                continue
            below = any(
                sum(f * x for f, x in zip(psi, pt)) < level for pt in pts
            )
            if below:
                found.append(other)
    found.sort(key=lambda k: k.offsets)
    return found


# ---------------------------------------------------------------------------
# rescuers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Rescuer:
    """Auxiliary lattice points expressing a cubic relation by quadrics.

    For a relation A + B + C = D + E + F a single point R works when
    R + A = E + F and R + D = B + C.  A triple (R1, R2, R3) works when
    B + C = R1 + R2, A + R1 = D + R3 and R2 + R3 = E + F.  ``anchor``
    records the ambient indices of the points playing A and D, and
    ``swapped`` says whether the roles of the two sides were exchanged.
    """

    kind: str
    matrices: tuple
    anchor: tuple
    swapped: bool = False

    def __init__(self, kind, matrices, anchor, swapped=False):
        if kind not in ("one", "three"):
            raise ValueError("kind must be 'one' or 'three'")
        matrices = tuple(tuple(m) for m in matrices)
        if (kind == "one") != (len(matrices) == 1):
            raise ValueError("a 1-rescuer has one matrix, a 3-rescuer three")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "matrices", matrices)
        object.__setattr__(self, "anchor", tuple(anchor))
        object.__setattr__(self, "swapped", bool(swapped))


def _vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _expand(exp: Exponent) -> list:
    out = []
    for i, c in exp.items:
        out.extend([i] * c)
    return out


def rescuer_search(p: FlowPolytope, relation: Binomial) -> Optional[Rescuer]:
    """Look for a rescuer of a degree-three relation among p's points.

    Candidates are tried in a deterministic order with the points of
    the neighboring cells first, single rescuers before triples; every
    identity is re-checked exactly before anything is returned.  None
    means no rescuer exists among the lattice points of p.
    """
    conf = p.point_configuration()
    pts = conf.points
    index = {pt: i for i, pt in enumerate(pts)}
    lead = _expand(relation.lead)
    trail = _expand(relation.trail)
    if len(lead) != 3 or len(trail) != 3:
        raise ValueError("rescuers are defined for degree-three relations")
    total = (0,) * conf.ambient_dim
    for i in lead:
        total = _vadd(total, pts[i])
    check = (0,) * conf.ambient_dim
    for i in trail:
        check = _vadd(check, pts[i])
    if total != check:
        raise ValueError("the binomial is not a relation of the configuration")

    near = set()
    involved = set(lead) | set(trail)
    for key, _t in enumerate_full_cells(p):
        window = set(cell(p, key).enumerate_lattice_points())
        if all(pts[i] in window for i in involved):
            for other in neighbor_cells(p, key):
                for pt in cell(p, other).enumerate_lattice_points():
                    near.add(index[pt])
            break
    candidates = sorted(range(len(pts)), key=lambda i: (i not in near, i))

    lead_set = sorted(set(lead))
    trail_set = sorted(set(trail))
    for r in candidates:
        for a in lead_set:
            for d in trail_set:
                if pts[r] != _vsub(_vsub(total, pts[a]), pts[d]):
                    continue
                if _vadd(pts[r], pts[a]) != _vsub(total, pts[d]):
                    raise RuntimeError("single identity lost")
                if _vadd(pts[r], pts[d]) != _vsub(total, pts[a]):
                    raise RuntimeError("single identity lost")
                return Rescuer("one", (pts[r],), anchor=(a, d))
    for r1 in candidates:
        for swapped in (False, True):
            side_a = trail_set if swapped else lead_set
            side_b = lead_set if swapped else trail_set
            for a in side_a:
                r2 = _vsub(_vsub(total, pts[a]), pts[r1])
                j2 = index.get(r2)
                if j2 is None:
                    continue
                for d in side_b:
                    r3 = _vsub(_vadd(pts[a], pts[r1]), pts[d])
                    j3 = index.get(r3)
                    if j3 is None:
                        continue
                    if _vadd(pts[r1], r2) != _vsub(total, pts[a]):
                        raise RuntimeError("triple identity lost")
                    if _vadd(pts[a], pts[r1]) != _vadd(pts[d], r3):
                        raise RuntimeError("triple identity lost")
                    if _vadd(r2, r3) != _vsub(total, pts[d]):
                        raise RuntimeError("triple identity lost")
                    return Rescuer(
                        "three",
                        (pts[r1], r2, r3),
                        anchor=(a, d),
                        swapped=swapped,
                    )
    return None


# ---------------------------------------------------------------------------
# the high-degree family
# ---------------------------------------------------------------------------


def _block(p, q, fill):
    return [[fill(i, j) for j in range(q)] for i in range(p)]


def _compose(tl, tr, bl, br):
    rows = [tuple(a + b) for a, b in zip(tl, tr)]
    rows += [tuple(a + b) for a, b in zip(bl, br)]
    return tuple(rows)


def _matrix_sum(mats, coeffs=None):
    coeffs = coeffs if coeffs is not None else [1] * len(mats)
    rows = len(mats[0])
    cols = len(mats[0][0])
    out = [[0] * cols for _ in range(rows)]
    for mat, c in zip(mats, coeffs):
        for i in range(rows):
            for j in range(cols):
                out[i][j] += c * mat[i][j]
    return tuple(tuple(r) for r in out)


@dataclass(frozen=True)
class HighDegreeFamily:
    """Block matrices witnessing a Groebner basis of high degree.

    The matrices listed in ``involved`` are lattice points of a smooth
    transport polytope after translating by ``shift``; the single
    ``relation`` between them has degree m(n-2)/2 and stays in the
    reduced Groebner basis under any graded reverse lexicographic
    order refining ``order_hint``.
    """

    m: int
    n: int
    spec: TransportSpec
    shift: tuple
    a_one: tuple
    a_two: tuple
    c: tuple
    d: tuple
    e: tuple
    involved: tuple
    relation: Binomial
    degree: int
    order_hint: TermOrder

    def ambient_matrix(self, mat) -> tuple:
        """Translate a family matrix back into the transport polytope."""
        return tuple(
            tuple(x - s for x, s in zip(row, srow))
            for row, srow in zip(mat, self.shift)
        )

    def involved_config(self) -> PointConfiguration:
        """The involved matrices, flattened, as a point configuration."""
        return PointConfiguration(
            [tuple(x for row in mat for x in row) for mat in self.involved]
        )

    def ambient_order(self, conf: PointConfiguration) -> TermOrder:
        """A compliant reverse lexicographic order on the full polytope.

        The smallest variables are, in increasing order of rank from
        the bottom: e, then the first family, then the second; every
        other lattice point of ``conf`` ranks above them.
        """
        flat = {}
        for mat in self.involved:
            amb = self.ambient_matrix(mat)
            flat[tuple(x for row in amb for x in row)] = mat
        located = {}
        for i, pt in enumerate(conf.points):
            mat = flat.get(tuple(pt))
            if mat is not None:
                located[mat] = i
        if len(located) != len(self.involved):
            raise ValueError("configuration is missing family points")
        tail = (
            [located[mat] for mat in self.a_two]
            + [located[mat] for mat in self.a_one]
            + [located[self.e]]
        )
        rest = [i for i in range(len(conf)) if i not in set(tail)]
        return TermOrder.grevlex(tuple(rest + tail))


def high_degree_family(m: int, n: int) -> HighDegreeFamily:
    """Build the even-by-even block family and its defining relation.

    The construction produces 0/1 block matrices A_ij, B_ij and the
    three special matrices c, d, e; summing all A_ij and B_ij equals a
    fixed combination of c, d and e, which is the high-degree relation.
    The identity is verified entry by entry before returning.
    """
    if m % 2 or n % 2:
        raise OddDimension("both side lengths must be even")
    if m < 4 or n < 4:
        raise ValueError("the construction needs m, n >= 4")
    p, q = m // 2, n // 2

    def unit(i, j):
        return _block(p, q, lambda a, b: 1 if (a, b) == (i, j) else 0)

    def co_unit(i, j):
        return _block(p, q, lambda a, b: 0 if (a, b) == (i, j) else 1)

    ones = _block(p, q, lambda a, b: 1)
    zeros = _block(p, q, lambda a, b: 0)

    def mat_a(i, j):
        return _compose(unit(i, 0), co_unit(i, j), co_unit(i, 0), unit(i, j))

    def mat_b(i, j):
        return _compose(unit(i, j), co_unit(i, 0), co_unit(i, j), unit(i, 0))

    e = _compose(ones, zeros, zeros, ones)
    d = _compose(zeros, ones, ones, zeros)
    c_top = [(1,) + (0,) * (q - 1) + (0,) + (1,) * (q - 1) for _ in range(p)]
    c_bot = [(0,) + (1,) * (q - 1) + (1,) + (0,) * (q - 1) for _ in range(p)]
    c = tuple(c_top + c_bot)

    a_one = tuple(mat_a(i, j) for i in range(p) for j in range(1, q - 1))
    a_one += tuple(mat_b(i, j) for i in range(p) for j in range(1, q))
    a_two = tuple(mat_a(i, q - 1) for i in range(p))

    lead_mats = [mat_a(i, j) for i in range(p) for j in range(1, q)]
    lead_mats += [mat_b(i, j) for i in range(p) for j in range(1, q)]
    d_coeff = (m * (n - 2) - n) // 2 + 1
    rhs = _matrix_sum([c, d, e], [q - 2, d_coeff, 1])
    lhs = _matrix_sum(lead_mats)
    if lhs != rhs:
        raise RuntimeError("block relation failed to balance")

    involved = tuple(a_one) + tuple(a_two) + (c, d, e)
    pos = {mat: i for i, mat in enumerate(involved)}
    lead = Exponent({pos[mat]: 1 for mat in a_one + a_two})
    trail_counts = {pos[d]: d_coeff, pos[e]: 1}
    if q - 2 > 0:
        trail_counts[pos[c]] = q - 2
    trail = Exponent(trail_counts)
    relation = Binomial(lead, trail)

    tail = (
        [pos[mat] for mat in a_two]
        + [pos[mat] for mat in a_one]
        + [pos[e]]
    )
    rest = [i for i in range(len(involved)) if i not in set(tail)]
    order_hint = TermOrder.grevlex(tuple(rest + tail))

    shift = tuple(
        tuple(0 if j < n - 1 else -m * n for j in range(n)) for _ in range(m)
    )
    spec = TransportSpec(
        (q + m * n,) * m, (p,) * (n - 1) + (m * m * n + p,)
    )
    return HighDegreeFamily(
        m=m,
        n=n,
        spec=spec,
        shift=shift,
        a_one=a_one,
        a_two=a_two,
        c=c,
        d=d,
        e=e,
        involved=involved,
        relation=relation,
        degree=m * (n - 2) // 2,
        order_hint=order_hint,
    )


# ---------------------------------------------------------------------------
# minimal generator verification
# ---------------------------------------------------------------------------


def verify_min_generator(
    a: PointConfiguration,
    b: Binomial,
    order: TermOrder,
    search_bound: Optional[int] = None,
) -> bool:
    """Is the lead of b a minimal generator of the initial ideal?

    Checks every proper divisor of the leading monomial for a fiber
    partner that would make the divisor itself a lead.  Finding one
    settles the question negatively; exhausting all divisors settles it
    positively, because leads of binomials generate the whole initial
    ideal.  If a fiber is too large for ``search_bound`` the question
    is left open via SearchBoundExceeded.
    """
    lead = b.lead
    trail = b.trail
    if order.compare(lead, trail) <= 0:
        raise ValueError("the lead of b must be the larger side")
    if not is_in_ideal(a, b):
        raise ValueError("b is not a relation of the configuration")

    items = lead.items
    spans = [range(c + 1) for (_i, c) in items]
    for combo in itertools.product(*spans):
        deg = sum(combo)
        if deg == 0 or combo == tuple(c for (_i, c) in items):
            continue
        sub = Exponent({items[t][0]: combo[t] for t in range(len(items)) if combo[t]})
        try:
            partners = fiber(a, pi(a, sub), deg, guard=search_bound)
        except DegreeTooLarge as exc:
            raise SearchBoundExceeded(str(exc)) from exc
        for v in partners:
            if v != sub and order.compare(sub, v) > 0:
                return False
    return True


# ---------------------------------------------------------------------------
# gluing cells back together
# ---------------------------------------------------------------------------


def composed_generators(p: FlowPolytope):
    """Generators of the ambient ideal assembled from the cells.

    Takes the union of the per-cell minimal generating sets, reindexed
    into the ambient configuration, plus the quadratic elements of the
    pulled-triangulation basis whose leads join points of different
    cells.  Returns the list together with the ambient configuration.
    """
    conf = p.point_configuration()
    pindex = {pt: i for i, pt in enumerate(conf.points)}
    cellsets = []
    gens = []
    seen = set()
    for key, _t in enumerate_full_cells(p):
        piece = cell(p, key)
        cconf = piece.point_configuration()
        remap = [pindex[pt] for pt in cconf.points]
        cellsets.append(set(remap))
        _top, cgens = minimal_generating_set(cconf, 4)
        for g in cgens:
            lifted = Binomial(
                Exponent({remap[i]: c for i, c in g.lead.items}),
                Exponent({remap[i]: c for i, c in g.trail.items}),
            )
            if lifted.pair() not in seen:
                seen.add(lifted.pair())
                gens.append(lifted)
    tri, cert = flow_triangulation(p)
    basis = gb_from_triangulation(conf, tri, cert)
    for g in basis:
        if g.degree != 2:
            continue
        support = set(g.lead.support)
        if any(support <= cs for cs in cellsets):
            continue
        if g.pair() not in seen:
            seen.add(g.pair())
            gens.append(g)
    return gens, conf
