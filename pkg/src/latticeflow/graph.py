"""Directed multigraphs and the two graph transformations used downstream.

Edges are identified by position in the edge list, never by endpoints, so
parallel edges are fine and every flow vector is indexed consistently.
Self-loops are rejected at construction: they would contribute a zero
column to the incidence matrix and a vacuous flow constraint.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Hashable, Optional, Sequence

from .exactmath import IntMatrix, det, guard_limit

Vertex = Hashable
Edge = tuple[Vertex, Vertex]


class TooLarge(ValueError):
    """Raised when a brute-force check exceeds its size guard."""


class BoundViolation(ValueError):
    """Raised when a lower bound exceeds the matching upper bound."""


@dataclass(frozen=True)
class DirectedGraph:
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        vset = set(self.vertices)
        for tail, head in self.edges:
            if tail == head:
                raise ValueError("self-loops are not allowed")
            if tail not in vset or head not in vset:
                raise ValueError(f"edge ({tail!r}, {head!r}) uses unknown vertex")

    @staticmethod
    def make(vertices: Sequence[Vertex], edges: Sequence[Sequence[Vertex]]) -> "DirectedGraph":
        return DirectedGraph(tuple(vertices), tuple((t, h) for t, h in edges))

    def vertex_index(self, v: Vertex) -> int:
        return self.vertices.index(v)

    def in_edges(self, v: Vertex) -> tuple[int, ...]:
        """Indices of edges pointing into v."""
        return tuple(i for i, (_, head) in enumerate(self.edges) if head == v)

    def out_edges(self, v: Vertex) -> tuple[int, ...]:
        """Indices of edges leaving v."""
        return tuple(i for i, (tail, _) in enumerate(self.edges) if tail == v)

    def is_acyclic(self) -> bool:
        """Kahn peeling on the directed structure."""
        indeg = {v: 0 for v in self.vertices}
        outs: dict[Vertex, list[Vertex]] = {v: [] for v in self.vertices}
        for tail, head in self.edges:
            indeg[head] += 1
            outs[tail].append(head)
        queue = [v for v in self.vertices if indeg[v] == 0]
        seen = 0
        while queue:
            v = queue.pop()
            seen += 1
            for w in outs[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
        return seen == len(self.vertices)

    def undirected_components(self) -> list[set[Vertex]]:
        """Connected components ignoring edge direction."""
        adj: dict[Vertex, set[Vertex]] = {v: set() for v in self.vertices}
        for tail, head in self.edges:
            adj[tail].add(head)
            adj[head].add(tail)
        seen: set[Vertex] = set()
        comps = []
        for v in self.vertices:
            if v in seen:
                continue
            comp = {v}
            stack = [v]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in comp:
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            comps.append(comp)
        return comps

    def bridge_edges(self) -> set[int]:
        """Edge indices whose removal disconnects their component.

        Computed on the underlying undirected multigraph; parallel edges
        are never bridges.  Iterative lowpoint search, tracking the edge
        index used to enter each vertex so parallels are handled right.
        """
        adj: dict[Vertex, list[tuple[Vertex, int]]] = {v: [] for v in self.vertices}
        for i, (tail, head) in enumerate(self.edges):
            adj[tail].append((head, i))
            adj[head].append((tail, i))
        disc: dict[Vertex, int] = {}
        low: dict[Vertex, int] = {}
        bridges: set[int] = set()
        counter = 0
        for root in self.vertices:
            if root in disc:
                continue
            stack: list[tuple[Vertex, int, int]] = [(root, -1, 0)]
            disc[root] = low[root] = counter
            counter += 1
            while stack:
                v, via, ptr = stack[-1]
                if ptr < len(adj[v]):
                    stack[-1] = (v, via, ptr + 1)
                    w, eidx = adj[v][ptr]
                    if eidx == via:
                        continue
                    if w not in disc:
                        disc[w] = low[w] = counter
                        counter += 1
                        stack.append((w, eidx, 0))
                    else:
                        low[v] = min(low[v], disc[w])
                else:
                    stack.pop()
                    if stack:
                        parent = stack[-1][0]
                        low[parent] = min(low[parent], low[v])
                        if low[v] > disc[parent]:
                            bridges.add(via)
        return bridges

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [[t, h] for t, h in self.edges],
        }

    @staticmethod
    def from_json(data: dict) -> "DirectedGraph":
        return DirectedGraph.make(data["vertices"], data["edges"])


def incidence_matrix(g: DirectedGraph) -> IntMatrix:
    """|V| x |E| matrix: -1 at the tail of each edge, +1 at its head."""
    index = {v: i for i, v in enumerate(g.vertices)}
    rows = [[0] * len(g.edges) for _ in g.vertices]
    for j, (tail, head) in enumerate(g.edges):
        rows[index[tail]][j] = -1
        rows[index[head]][j] = 1
    return tuple(tuple(row) for row in rows)


def tu_certificate(m: Sequence[Sequence[int]]) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Sufficient total-unimodularity check by row 2-coloring.

    Entries must lie in {0, 1, -1}.  Rows and columns carrying at most one
    nonzero preserve total unimodularity and are peeled off first; the
    remaining core must have at most two nonzeros per column.  Core
    columns with two same-signed entries force their rows into different
    classes, oppositely signed entries force the same class.  A consistent
    coloring (I1, I2) over all rows is returned; None proves nothing.
    """
    rows = len(m)
    if rows == 0:
        return (), ()
    cols = len(m[0])
    for row in m:
        for x in row:
            if x not in (-1, 0, 1):
                return None
    row_active = [True] * rows
    col_active = [True] * cols
    changed = True
    while changed:
        changed = False
        for i in range(rows):
            if row_active[i]:
                support = sum(1 for j in range(cols) if col_active[j] and m[i][j])
                if support <= 1:
                    row_active[i] = False
                    changed = True
        for j in range(cols):
            if col_active[j]:
                support = sum(1 for i in range(rows) if row_active[i] and m[i][j])
                if support <= 1:
                    col_active[j] = False
                    changed = True
    color = [-1] * rows
    adj: dict[int, list[tuple[int, int]]] = {i: [] for i in range(rows)}
    for j in range(cols):
        if not col_active[j]:
            continue
        support = [i for i in range(rows) if row_active[i] and m[i][j] != 0]
        if len(support) > 2:
            return None
        if len(support) == 2:
            a, b = support
            parity = 1 if m[a][j] == m[b][j] else 0
            adj[a].append((b, parity))
            adj[b].append((a, parity))
    for start in range(rows):
        if color[start] != -1 or not row_active[start]:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            v = stack.pop()
            for w, parity in adj[v]:
                want = color[v] ^ parity
                if color[w] == -1:
                    color[w] = want
                    stack.append(w)
                elif color[w] != want:
                    return None
    i1 = tuple(i for i in range(rows) if color[i] in (-1, 0))
    i2 = tuple(i for i in range(rows) if color[i] == 1)
    return i1, i2


def tu_bruteforce(m: Sequence[Sequence[int]]) -> bool:
    """Exhaustive minor check: every square minor in {0, 1, -1}.

    Guarded by min(rows, cols) <= guard_limit(); raises TooLarge beyond.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    k_max = min(rows, cols)
    if k_max > guard_limit():
        raise TooLarge(
            f"minor enumeration over min(rows, cols) = {k_max} exceeds the guard; "
            "raise LATTICEFLOW_GUARD to force it"
        )
    for row in m:
        for x in row:
            if x not in (-1, 0, 1):
                return False
    for k in range(2, k_max + 1):
        for rsel in combinations(range(rows), k):
            for csel in combinations(range(cols), k):
                sub = [[m[i][j] for j in csel] for i in rsel]
                if det(sub) not in (-1, 0, 1):
                    return False
    return True


@dataclass(frozen=True)
class FlowBijection:
    """Coordinate bijection between the lattice flows of two graphs.

    forward and inverse take (flow, k) with k the dilation level; level k
    maps points of the k-fold dilate.  forward(f + g, 2) equals the
    coordinatewise sum of forward(f, 1) and forward(g, 1), which is the
    additivity that makes the map a semigroup isomorphism.
    """

    forward: Callable[[Sequence[int], int], tuple[int, ...]]
    inverse: Callable[[Sequence[int], int], tuple[int, ...]]


def split_bipartite(
    g: DirectedGraph,
    d: Sequence[int],
    u: Sequence[Optional[int]],
    l: Sequence[int],
) -> tuple[DirectedGraph, tuple[int, ...], tuple[Optional[int], ...], tuple[int, ...], FlowBijection]:
    """Split every vertex so that all edges run between two classes.

    Vertex v becomes (v, 0) collecting the outgoing side and (v, 1) the
    incoming side; each original edge (a, b) turns into ((a,0), (b,1))
    with its bounds, and one splitter edge ((v,0), (v,1)) per vertex takes
    up the slack N - outflow(v) with N the total absolute demand.
    """
    n_vertices = len(g.vertices)
    if len(d) != n_vertices or len(u) != len(g.edges) or len(l) != len(g.edges):
        raise ValueError("demand or bound vector length mismatch")
    big_n = sum(abs(x) for x in d)
    firsts = tuple((v, 0) for v in g.vertices)
    seconds = tuple((v, 1) for v in g.vertices)
    new_edges = [((a, 0), (b, 1)) for a, b in g.edges]
    new_edges += [((v, 0), (v, 1)) for v in g.vertices]
    g2 = DirectedGraph(firsts + seconds, tuple(new_edges))
    d2 = tuple([-big_n] * n_vertices) + tuple(big_n + d[i] for i in range(n_vertices))
    u2 = tuple(u) + tuple([None] * n_vertices)
    l2 = tuple(l) + tuple([0] * n_vertices)

    out_lists = [g.out_edges(v) for v in g.vertices]

    def forward(f: Sequence[int], k: int = 1) -> tuple[int, ...]:
        extras = [
            k * big_n - sum(f[e] for e in out_lists[i]) for i in range(n_vertices)
        ]
        return tuple(f) + tuple(extras)

    def inverse(f2: Sequence[int], k: int = 1) -> tuple[int, ...]:
        return tuple(f2[: len(g.edges)])

    return g2, d2, u2, l2, FlowBijection(forward, inverse)


def eliminate_lower_bounds(
    g: DirectedGraph,
    d: Sequence[int],
    u: Sequence[Optional[int]],
    l: Sequence[int],
) -> tuple[DirectedGraph, tuple[int, ...], tuple[Optional[int], ...], tuple[int, ...], FlowBijection]:
    """Rewrite a flow problem so every lower bound becomes zero.

    Each vertex v gains a feeder (v, "+") with edge ((v,"+"), v) capped at
    the total lower bound of v's incoming edges, and a drain (v, "-") with
    edge (v, (v,"-")) capped at the total lower bound of the outgoing
    ones.  Original edges keep their position with capacity u - l.  Flows
    map by f(e) - k*l(e) on original edges while the feeder and drain
    edges always run at k times their capacity.
    """
    n_edges = len(g.edges)
    if len(d) != len(g.vertices) or len(u) != n_edges or len(l) != n_edges:
        raise ValueError("demand or bound vector length mismatch")
    for j in range(n_edges):
        if u[j] is not None and l[j] > u[j]:
            raise BoundViolation(f"edge {j}: lower bound {l[j]} exceeds upper {u[j]}")

    feeder_cap = []
    drain_cap = []
    for v in g.vertices:
        feeder_cap.append(sum(l[e] for e in g.in_edges(v)))
        drain_cap.append(sum(l[e] for e in g.out_edges(v)))

    new_vertices = list(g.vertices)
    new_edges = list(g.edges)
    new_u: list[Optional[int]] = [None if u[j] is None else u[j] - l[j] for j in range(n_edges)]
    new_d = {v: d[i] for i, v in enumerate(g.vertices)}
    for i, v in enumerate(g.vertices):
        feeder = (v, "+")
        drain = (v, "-")
        new_vertices += [feeder, drain]
        new_edges.append((feeder, v))
        new_u.append(feeder_cap[i])
        new_edges.append((v, drain))
        new_u.append(drain_cap[i])
        new_d[feeder] = -feeder_cap[i]
        new_d[drain] = drain_cap[i]
    g2 = DirectedGraph(tuple(new_vertices), tuple(new_edges))
    d2 = tuple(new_d[v] for v in new_vertices)
    u2 = tuple(new_u)
    l2 = tuple([0] * len(new_edges))

    def forward(f: Sequence[int], k: int = 1) -> tuple[int, ...]:
        out = [f[j] - k * l[j] for j in range(n_edges)]
        for i in range(len(g.vertices)):
            out.append(k * feeder_cap[i])
            out.append(k * drain_cap[i])
        return tuple(out)

    def inverse(f2: Sequence[int], k: int = 1) -> tuple[int, ...]:
        return tuple(f2[j] + k * l[j] for j in range(n_edges))

    return g2, d2, u2, l2, FlowBijection(forward, inverse)
