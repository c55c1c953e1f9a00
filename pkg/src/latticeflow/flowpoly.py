"""Flow polytopes: feasibility, lattice points, dimension, decompositions.

A flow polytope is the set of flows on a directed graph that satisfy
vertex demands together with lower and upper capacity bounds on the
edges.  Transportation polytopes are the special case of complete
bipartite graphs with row supplies and column demands.

All arithmetic is exact.  Upper bounds may be ``None`` (unbounded),
which is only allowed on acyclic graphs so the polytope stays bounded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .exactmath import (
    hnf_rank,
    int_matrix,
)
from .graph import (
    DirectedGraph,
    eliminate_lower_bounds,
    incidence_matrix,
)
from . import _enum


class EmptyPolytope(Exception):
    """The polytope contains no points at all."""


class NotInDilate(Exception):
    """The given vector is not a lattice point of the k-th dilate."""


class SumMismatch(Exception):
    """Row sums and column sums of a transportation problem disagree."""


class NotTwoRows(Exception):
    """The transportation polytope does not have exactly two rows."""


class DegenerateInput(Exception):
    """Too little data to decide the question."""


# ---------------------------------------------------------------------------
# infeasibility certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CutCertificate:
    """Witness that a flow polytope is empty.

    For ``kind == "cut"`` the vertex set ``u_set`` violates the cut
    condition: the total capacity of edges entering ``u_set`` minus the
    lower bounds of edges leaving it is smaller than the net demand of
    ``u_set``.  For ``kind == "imbalance"`` the demands do not sum to
    zero, so no flow can exist; ``u_set`` is the full vertex set and
    ``demand_side`` is the absolute total imbalance.  For
    ``kind == "box"`` a single edge window is inverted (lower bound on
    the demand side, upper bound on the capacity side) and ``u_set`` is
    empty.

    In all cases ``demand_side > capacity_side`` holds.
    """

    kind: str
    u_set: frozenset
    capacity_side: int
    demand_side: int

    def __post_init__(self):
        if self.kind not in ("cut", "imbalance", "box"):
            raise ValueError("kind must be 'cut', 'imbalance' or 'box'")
        if not self.demand_side > self.capacity_side:
            raise ValueError("certificate does not certify anything")


# ---------------------------------------------------------------------------
# the polytope type
# ---------------------------------------------------------------------------


_INF = None  # upper bound marker for "no constraint"


def _check_bounds(graph: DirectedGraph, u, l) -> None:
    """Validate bound vectors.

    Inverted windows (l_e > u_e) are permitted and denote an empty box,
    so that slicing operations can always hand back a polytope on the
    same graph.  Emptiness is reported through ``is_empty`` rather than
    at construction time.
    """
    m = len(graph.edges)
    if len(u) != m or len(l) != m:
        raise ValueError("bound vectors must have one entry per edge")
    for e in range(m):
        le = l[e]
        ue = u[e]
        if not isinstance(le, int) or isinstance(le, bool):
            raise ValueError("lower bounds must be integers")
        if ue is not None and (not isinstance(ue, int) or isinstance(ue, bool)):
            raise ValueError("upper bounds must be integers or None")


@dataclass(frozen=True)
class FlowPolytope:
    """Flows f with I_G f = d and l <= f <= u, edgewise.

    ``d`` assigns a demand to every vertex (positive = sink).  ``u``
    entries may be ``None`` for "unbounded", which requires the graph
    to be acyclic.  The all-zero demand vector is rejected because the
    resulting polytope is a cone vertex at best; internal callers that
    legitimately need it (shifted cells whose demand cancels) pass
    ``unchecked_demand=True``.
    """

    graph: DirectedGraph
    d: tuple
    u: tuple
    l: tuple
    unchecked_demand: bool = field(default=False, compare=False, repr=False)

    def __init__(self, graph, d, u=None, l=None, unchecked_demand=False):
        n = len(graph.vertices)
        m = len(graph.edges)
        d = tuple(d)
        if len(d) != n:
            raise ValueError("demand vector must have one entry per vertex")
        for dv in d:
            if not isinstance(dv, int) or isinstance(dv, bool):
                raise ValueError("demands must be integers")
        if u is None:
            u = (None,) * m
        else:
            u = tuple(u)
        if l is None:
            l = (0,) * m
        else:
            l = tuple(l)
        _check_bounds(graph, u, l)
        if any(ue is None for ue in u) and not graph.is_acyclic():
            raise ValueError("unbounded edges require an acyclic graph")
        if not unchecked_demand and all(dv == 0 for dv in d):
            raise ValueError("demand vector must not be identically zero")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "unchecked_demand", unchecked_demand)

    # -- basic data ----------------------------------------------------

    def effective_upper(self) -> tuple:
        """Upper bounds with every ``None`` replaced by a finite value.

        Replacing u_e = None by l_e + sum_v |d'_v|, where d' is the
        demand left after routing the lower bounds, changes no lattice
        point: on an acyclic graph any feasible flow decomposes into
        paths, so no edge can carry more than the total residual demand
        on top of its lower bound.
        """
        inc = incidence_matrix(self.graph)
        n = len(self.graph.vertices)
        m = len(self.graph.edges)
        residual = [
            self.d[v] - sum(inc[v][e] * self.l[e] for e in range(m)) for v in range(n)
        ]
        slack = sum(abs(rv) for rv in residual)
        return tuple(
            self.l[e] + slack if self.u[e] is None else self.u[e] for e in range(m)
        )

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {
            "graph": self.graph.to_json(),
            "demand": list(self.d),
            "lower": list(self.l),
            "upper": ["inf" if ue is None else ue for ue in self.u],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FlowPolytope":
        graph = DirectedGraph.from_json(data["graph"])
        u = tuple(None if ue == "inf" else int(ue) for ue in data["upper"])
        return cls(graph, tuple(data["demand"]), u, tuple(data["lower"]))

    # -- feasibility -----------------------------------------------------

    def feasible_flow(self):
        """Return an integer feasible flow, or a CutCertificate.

        Runs the excess-balancing augmentation: start at the lower
        bounds, then push the positive excesses toward the negative
        ones through the residual graph.  When a positive excess cannot
        reach any negative one, the vertices that *can* reach the
        deficit set form a violated cut.
        """
        ueff = self.effective_upper()
        for e in range(len(self.graph.edges)):
            if ueff[e] < self.l[e]:
                return CutCertificate(
                    kind="box",
                    u_set=frozenset(),
                    capacity_side=ueff[e],
                    demand_side=self.l[e],
                )
        return _feasible(self.graph, self.d, ueff, self.l)

    def is_empty(self) -> bool:
        return isinstance(self.feasible_flow(), CutCertificate)

    # -- lattice points ----------------------------------------------------

    def enumerate_lattice_points(self) -> list:
        """All integer points, in descending lexicographic edge order."""
        if sum(self.d) != 0:
            return []
        ueff = self.effective_upper()
        if any(ueff[e] < self.l[e] for e in range(len(ueff))):
            return []
        tails = []
        heads = []
        for (a, b) in self.graph.edges:
            tails.append(self.graph.vertex_index(a))
            heads.append(self.graph.vertex_index(b))
        return _enum.enumerate_flows(tails, heads, list(self.l), list(ueff), list(self.d))

    def contains(self, f: Sequence[int]) -> bool:
        """Exact membership test for an integer vector."""
        m = len(self.graph.edges)
        if len(f) != m:
            return False
        for e in range(m):
            if f[e] < self.l[e]:
                return False
            if self.u[e] is not None and f[e] > self.u[e]:
                return False
        inc = incidence_matrix(self.graph)
        n = len(self.graph.vertices)
        for v in range(n):
            if sum(inc[v][e] * f[e] for e in range(m)) != self.d[v]:
                return False
        return True

    # -- dimension -----------------------------------------------------

    def dimension(self) -> "DimensionReport":
        points = self.enumerate_lattice_points()
        if not points:
            if self.is_empty():
                raise EmptyPolytope("polytope has no points")
            raise EmptyPolytope("polytope has no lattice points to span it")
        base = points[0]
        diffs = [
            [p[e] - base[e] for e in range(len(base))] for p in points[1:]
        ]
        rank = hnf_rank(int_matrix(diffs)) if diffs else 0
        k = len(self.graph.undirected_components())
        upper = len(self.graph.edges) - len(self.graph.vertices) + k
        return DimensionReport(rank, upper_bound=upper, components=k)

    # -- decomposition ----------------------------------------------------

    def bvn_decompose(self, f: Sequence[int], k: int) -> list:
        """Split a point of the k-th dilate into k polytope points.

        Works by peeling one summand at a time; the peel bounds keep
        the remainder inside the (k-1)-st dilate, so induction never
        gets stuck.  Nonzero lower bounds are shifted away first.
        """
        if k < 1:
            raise ValueError("k must be at least 1")
        f = tuple(f)
        if not self._in_dilate(f, k):
            raise NotInDilate(f"vector is not a lattice point of the {k}-th dilate")
        if all(le == 0 for le in self.l):
            return _bvn_zero_lower(self.graph, self.d, self.u, f, k)
        g2, d2, u2, l2, phi = eliminate_lower_bounds(
            self.graph, list(self.d), list(self.u), list(self.l)
        )
        shifted = phi.forward(list(f), k)
        parts = _bvn_zero_lower(g2, tuple(d2), tuple(u2), shifted, k)
        out = [phi.inverse(list(part), 1) for part in parts]
        for piece in out:
            if not self.contains(piece):
                raise RuntimeError("internal error: decomposition left the polytope")
        m = len(self.graph.edges)
        total = tuple(sum(p[e] for p in out) for e in range(m))
        if total != f:
            raise RuntimeError("internal error: decomposition does not sum back")
        return out

    def _in_dilate(self, f: tuple, k: int) -> bool:
        m = len(self.graph.edges)
        if len(f) != m:
            return False
        if any(not isinstance(x, int) or isinstance(x, bool) for x in f):
            return False
        for e in range(m):
            if f[e] < k * self.l[e]:
                return False
            if self.u[e] is not None and f[e] > k * self.u[e]:
                return False
        inc = incidence_matrix(self.graph)
        for v in range(len(self.graph.vertices)):
            if sum(inc[v][e] * f[e] for e in range(m)) != k * self.d[v]:
                return False
        return True

    # -- bridges to point configurations ----------------------------------

    def point_configuration(self):
        """The lattice points as a PointConfiguration with certificate.

        The functional summing inflow over the sinks is constant on the
        polytope (it equals the total positive demand), which certifies
        homogeneity whenever that total is nonzero.
        """
        from .pconf import PointConfiguration

        points = self.enumerate_lattice_points()
        if not points:
            raise EmptyPolytope("no lattice points")
        inc = incidence_matrix(self.graph)
        n = len(self.graph.vertices)
        m = len(self.graph.edges)
        phi = [0] * m
        c = 0
        for v in range(n):
            if self.d[v] > 0:
                c += self.d[v]
                for e in range(m):
                    phi[e] += inc[v][e]
        cert = (tuple(phi), c) if c > 0 else None
        return PointConfiguration(points, homogeneity=cert, box_like=True)


@dataclass(frozen=True)
class SmoothnessReport:
    """Outcome of a vertexwise smoothness test."""

    smooth: bool
    bad_vertex: Optional[tuple] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.smooth


class DimensionReport(int):
    """Dimension of the polytope, annotated with the graph bound.

    Behaves as the plain integer dimension; ``upper_bound`` carries
    |E| - |V| + (number of weakly connected components) and
    ``attained`` records whether the bound is met.
    """

    def __new__(cls, value: int, upper_bound: int, components: int):
        obj = super().__new__(cls, value)
        obj._upper = upper_bound
        obj._components = components
        return obj

    @property
    def upper_bound(self) -> int:
        return self._upper

    @property
    def attained(self) -> bool:
        return int(self) == self._upper

    @property
    def components(self) -> int:
        return self._components


# ---------------------------------------------------------------------------
# feasibility core (raw arrays; zero demand allowed here)
# ---------------------------------------------------------------------------


def _feasible(graph: DirectedGraph, d, u, l):
    """Integer feasible flow for I f = d, l <= f <= u, or a certificate.

    ``u`` must be finite here.  The zero demand vector is allowed; the
    answer is then the lower-bound flow when it balances.
    """
    n = len(graph.vertices)
    m = len(graph.edges)
    tails = [graph.vertex_index(a) for (a, b) in graph.edges]
    heads = [graph.vertex_index(b) for (a, b) in graph.edges]

    total = sum(d)
    if total != 0:
        return CutCertificate(
            kind="imbalance",
            u_set=frozenset(graph.vertices),
            capacity_side=0,
            demand_side=abs(total),
        )

    f = list(l)

    def excess(v: int) -> int:
        inflow = sum(f[e] for e in range(m) if heads[e] == v)
        outflow = sum(f[e] for e in range(m) if tails[e] == v)
        return inflow - outflow - d[v]

    ex = [excess(v) for v in range(n)]

    while True:
        sources = [v for v in range(n) if ex[v] > 0]
        sinks = set(v for v in range(n) if ex[v] < 0)
        if not sources:
            assert not sinks
            return tuple(f)
        s = sources[0]

        # BFS from s through the residual graph.
        parent = {s: None}
        queue = [s]
        reached = None
        while queue and reached is None:
            v = queue.pop(0)
            if v in sinks and v != s:
                reached = v
                break
            for e in range(m):
                if tails[e] == v and f[e] < u[e] and heads[e] not in parent:
                    parent[heads[e]] = (e, +1)
                    if heads[e] in sinks:
                        reached = heads[e]
                        queue.append(heads[e])
                        break
                    queue.append(heads[e])
                if heads[e] == v and f[e] > l[e] and tails[e] not in parent:
                    parent[tails[e]] = (e, -1)
                    if tails[e] in sinks:
                        reached = tails[e]
                        queue.append(tails[e])
                        break
                    queue.append(tails[e])

        if reached is None:
            # No deficit vertex reachable from s.  The set of vertices
            # that can reach the deficit set in the residual graph is a
            # violated cut.
            deficit = list(sinks)
            can_reach = set(deficit)
            frontier = list(deficit)
            while frontier:
                v = frontier.pop()
                for e in range(m):
                    # tail -> head usable forward: tail can reach whatever head reaches
                    if heads[e] in can_reach and f[e] < u[e] and tails[e] not in can_reach:
                        can_reach.add(tails[e])
                        frontier.append(tails[e])
                    if tails[e] in can_reach and f[e] > l[e] and heads[e] not in can_reach:
                        can_reach.add(heads[e])
                        frontier.append(heads[e])
            u_idx = can_reach
            cap = 0
            dem = 0
            for e in range(m):
                if heads[e] in u_idx and tails[e] not in u_idx:
                    cap += u[e]
                if tails[e] in u_idx and heads[e] not in u_idx:
                    cap -= l[e]
            dem = sum(d[v] for v in u_idx)
            cert = CutCertificate(
                kind="cut",
                u_set=frozenset(graph.vertices[v] for v in sorted(u_idx)),
                capacity_side=cap,
                demand_side=dem,
            )
            return cert

        # Trace the path back and push the bottleneck amount.
        path = []
        v = reached
        while parent[v] is not None:
            e, sign = parent[v]
            path.append((e, sign))
            v = tails[e] if sign > 0 else heads[e]
        path.reverse()
        delta = min(ex[s], -ex[reached])
        for e, sign in path:
            room = u[e] - f[e] if sign > 0 else f[e] - l[e]
            delta = min(delta, room)
        assert delta > 0
        for e, sign in path:
            f[e] += sign * delta
        ex[s] -= delta
        ex[reached] += delta


def feasible_raw(graph: DirectedGraph, d, u, l):
    """Feasibility on raw data without constructing a FlowPolytope."""
    return _feasible(graph, list(d), list(u), list(l))


# ---------------------------------------------------------------------------
# Birkhoff-von-Neumann style decomposition (zero lower bounds)
# ---------------------------------------------------------------------------


def _bvn_zero_lower(graph: DirectedGraph, d, u, f: tuple, k: int) -> list:
    """Peel a point of the k-th dilate into k summands; l = 0 assumed."""
    m = len(graph.edges)
    parts = []
    rest = list(f)
    for level in range(k, 0, -1):
        if level == 1:
            parts.append(tuple(rest))
            break
        lo = []
        hi = []
        for e in range(m):
            if u[e] is None:
                lo.append(0)
                hi.append(rest[e])
            else:
                lo.append(max(0, rest[e] - (level - 1) * u[e]))
                hi.append(min(u[e], rest[e]))
        piece = _feasible(graph, d, hi, lo)
        if isinstance(piece, CutCertificate):
            raise RuntimeError(
                "internal error: dilate point admits no summand, which contradicts "
                "the decomposition theorem"
            )
        parts.append(piece)
        rest = [rest[e] - piece[e] for e in range(m)]
    return parts


# ---------------------------------------------------------------------------
# transportation polytopes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransportSpec:
    """Row sums and column sums of a transportation problem."""

    rows: tuple
    cols: tuple

    def __init__(self, rows: Sequence[int], cols: Sequence[int]):
        rows = tuple(rows)
        cols = tuple(cols)
        if not rows or not cols:
            raise ValueError("need at least one row and one column")
        for x in rows + cols:
            if not isinstance(x, int) or isinstance(x, bool) or x <= 0:
                raise ValueError("margins must be positive integers")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)

    @property
    def shape(self) -> tuple:
        return (len(self.rows), len(self.cols))

    def total(self) -> int:
        return sum(self.rows)


def transport_polytope(spec: TransportSpec) -> FlowPolytope:
    """The transportation polytope T(rows | cols) as a flow polytope.

    Vertices are "r1".."rm" then "c1".."cn"; edges run row-major from
    each row vertex to each column vertex with l = 0 and no upper
    bound.  Demands are -rows on the row side and +cols on the column
    side.
    """
    if sum(spec.rows) != sum(spec.cols):
        raise SumMismatch(
            f"row total {sum(spec.rows)} differs from column total {sum(spec.cols)}"
        )
    mrows, ncols = spec.shape
    vertices = [f"r{i + 1}" for i in range(mrows)] + [f"c{j + 1}" for j in range(ncols)]
    edges = [
        (f"r{i + 1}", f"c{j + 1}") for i in range(mrows) for j in range(ncols)
    ]
    graph = DirectedGraph.make(vertices, edges)
    d = tuple(-ri for ri in spec.rows) + tuple(spec.cols)
    return FlowPolytope(graph, d)


def flow_to_matrix(spec: TransportSpec, f: Sequence[int]) -> list:
    """Reshape a transport flow vector into its m x n matrix."""
    mrows, ncols = spec.shape
    if len(f) != mrows * ncols:
        raise ValueError("flow length does not match the spec shape")
    return [list(f[i * ncols: (i + 1) * ncols]) for i in range(mrows)]


def matrix_to_flow(matrix: Sequence[Sequence[int]]) -> tuple:
    """Flatten an m x n matrix row-major into a flow vector."""
    return tuple(x for row in matrix for x in row)


# ---------------------------------------------------------------------------
# the combinatorial singularity indicator chi
# ---------------------------------------------------------------------------


def chi(spec: TransportSpec) -> frozenset:
    """Pairs (I, J) flagging potentially singular vertices.

    A pair of proper nonempty subsets I of the rows and J of the
    columns belongs to chi when the submatrix structure forces a vertex
    with more facets than the dimension: one of the two complementary
    blocks is a single cell and the I-rows total equals the J-columns
    total.  Indices are 1-based and reported sorted.
    """
    mrows, ncols = spec.shape
    rows = spec.rows
    cols = spec.cols
    out = set()
    for imask in range(1, (1 << mrows) - 1):
        iset = [i for i in range(mrows) if imask >> i & 1]
        isize = len(iset)
        ri = sum(rows[i] for i in iset)
        for jmask in range(1, (1 << ncols) - 1):
            jset = [j for j in range(ncols) if jmask >> j & 1]
            jsize = len(jset)
            if isize * (ncols - jsize) != 1 and (mrows - isize) * jsize != 1:
                continue
            if ri == sum(cols[j] for j in jset):
                out.add(
                    (
                        tuple(i + 1 for i in iset),
                        tuple(j + 1 for j in jset),
                    )
                )
    return frozenset(out)


def normalize_transport(spec: TransportSpec):
    """Translate away every chi pair; returns (spec', shift matrix).

    Repeatedly picks the lexicographically smallest offending pair and
    adds a large constant G to one row margin, one column margin, and
    the corresponding cell of the shift matrix.  G is so large that the
    pair's equality can never re-occur, and each step removes at least
    the chosen pair, so the loop terminates.  The resulting polytope is
    a lattice translate of the original: subtracting the shift matrix
    maps its points bijectively onto the original's points.
    """
    mrows, ncols = spec.shape
    shift = [[0] * ncols for _ in range(mrows)]
    rows = list(spec.rows)
    cols = list(spec.cols)
    while True:
        cur = TransportSpec(rows, cols)
        bad = sorted(chi(cur))
        if not bad:
            return cur, shift
        iset, jset = bad[0]
        iset0 = [i - 1 for i in iset]
        jset0 = [j - 1 for j in jset]
        big = mrows * ncols * sum(rows)
        if len(iset0) * (ncols - len(jset0)) == 1:
            i0 = iset0[0]
            j0 = next(j for j in range(ncols) if j not in jset0)
        else:
            i0 = next(i for i in range(mrows) if i not in iset0)
            j0 = jset0[0]
        rows[i0] += big
        cols[j0] += big
        shift[i0][j0] += big


def is_smooth_transport(spec: TransportSpec) -> bool:
    """Smoothness of the toric variety of a transportation polytope.

    Decided purely from the margins: after normalization the polytope
    is smooth exactly when no pair of proper subsets with both
    complementary blocks larger than a single cell balances.
    """
    cur, _ = normalize_transport(spec)
    mrows, ncols = cur.shape
    rows = cur.rows
    cols = cur.cols
    for imask in range(1, (1 << mrows) - 1):
        iset = [i for i in range(mrows) if imask >> i & 1]
        isize = len(iset)
        ri = sum(rows[i] for i in iset)
        for jmask in range(1, (1 << ncols) - 1):
            jset = [j for j in range(ncols) if jmask >> j & 1]
            jsize = len(jset)
            if isize * (ncols - jsize) <= 1 or (mrows - isize) * jsize <= 1:
                continue
            if ri == sum(cols[j] for j in jset):
                return False
    return True


def is_smooth_general(points: Sequence[Sequence[int]]) -> SmoothnessReport:
    """Vertexwise smoothness of the polytope spanned by lattice points.

    Works in coordinates for the saturated lattice spanned by the point
    differences.  A vertex passes when its edge directions form exactly
    dim facet normals of determinant +-1; equivalently the facets
    through it number dim and their primitive normals form a unimodular
    matrix.
    """
    from .pconf import PointConfiguration

    pts = [tuple(p) for p in points]
    if len(pts) < 1:
        raise DegenerateInput("need at least one point")
    if len(set(pts)) == 1:
        return SmoothnessReport(smooth=True)
    conf = PointConfiguration(sorted(set(pts), reverse=True))
    return conf.smoothness()


def hypersimplex_iso(spec: TransportSpec):
    """Isomorphism from a 2 x n transportation polytope onto its image.

    Dropping the second row of every lattice point is injective because
    the second row is determined by the column sums.  Returns
    (image configuration, forward, inverse); forward maps a full flow
    vector to its image point, inverse maps an image point back.
    """
    from .pconf import PointConfiguration

    if len(spec.rows) != 2:
        raise NotTwoRows("spec must have exactly two rows")
    cols = spec.cols
    ncols = len(cols)

    def forward(flow: Sequence[int]) -> tuple:
        return tuple(flow[:ncols])

    def inverse(point: Sequence[int]) -> tuple:
        second = [cols[j] - point[j] for j in range(ncols)]
        return tuple(point) + tuple(second)

    poly = transport_polytope(spec)
    pts = poly.enumerate_lattice_points()
    image = [forward(f) for f in pts]
    cert = ((1,) * ncols, spec.rows[0])
    conf = PointConfiguration(image, homogeneity=cert, box_like=True)
    return conf, forward, inverse
