"""Pure-Python lattice-flow enumeration kernel.

Walks edges in order, assigning values from high to low, so complete
assignments appear in descending lexicographic order.  Feasible value
ranges are clipped at every step with per-vertex interval brackets
derived from suffix bound sums, which keeps the walk polynomial even when
the raw box bounds are astronomically wide.

The compiled twin in _enum_cy implements the same contract over int64;
this module is the always-available fallback and works with big integers.
"""

from __future__ import annotations

from typing import Sequence


def enumerate_flows(
    tails: Sequence[int],
    heads: Sequence[int],
    lo: Sequence[int],
    hi: Sequence[int],
    demand: Sequence[int],
) -> list[tuple[int, ...]]:
    """All integer vectors lo <= f <= hi with inflow - outflow = demand.

    tails/heads give each edge's endpoint indices into demand.  Output is
    in descending lexicographic order.
    """
    n_edges = len(tails)
    n_vertices = len(demand)
    if any(lo[e] > hi[e] for e in range(n_edges)):
        return []

    # Suffix windows: contribution bounds of edges >= k to each vertex.
    in_min = [[0] * (n_edges + 1) for _ in range(n_vertices)]
    in_max = [[0] * (n_edges + 1) for _ in range(n_vertices)]
    out_min = [[0] * (n_edges + 1) for _ in range(n_vertices)]
    out_max = [[0] * (n_edges + 1) for _ in range(n_vertices)]
    for k in range(n_edges - 1, -1, -1):
        for v in range(n_vertices):
            in_min[v][k] = in_min[v][k + 1]
            in_max[v][k] = in_max[v][k + 1]
            out_min[v][k] = out_min[v][k + 1]
            out_max[v][k] = out_max[v][k + 1]
        h, t = heads[k], tails[k]
        in_min[h][k] += lo[k]
        in_max[h][k] += hi[k]
        out_min[t][k] += lo[k]
        out_max[t][k] += hi[k]

    # Net partial flow per vertex: inflow - outflow of assigned edges.
    net = [0] * n_vertices

    def bracket_ok(v: int, k: int) -> bool:
        return (
            net[v] + in_min[v][k] - out_max[v][k] <= demand[v]
            and demand[v] <= net[v] + in_max[v][k] - out_min[v][k]
        )

    if n_edges == 0:
        if all(demand[v] == 0 for v in range(n_vertices)):
            return [()]
        return []

    for v in range(n_vertices):
        if not bracket_ok(v, 0):
            return []

    results: list[tuple[int, ...]] = []
    values = [0] * n_edges

    def walk(k: int) -> None:
        if k == n_edges:
            results.append(tuple(values))
            return
        t, h = tails[k], heads[k]
        nxt = k + 1
        # Value range carving from both endpoints' brackets at depth k+1,
        # treating this edge's value x as already assigned.
        vlo = lo[k]
        vhi = hi[k]
        # Tail: demand[t] <= net[t] - x + in_max' - out_min'  and  >= ... - out_max'
        b = net[t] + in_max[t][nxt] - out_min[t][nxt] - demand[t]
        if b < vhi:
            vhi = b
        b = net[t] + in_min[t][nxt] - out_max[t][nxt] - demand[t]
        if b > vlo:
            vlo = b
        # Head: demand[h] <= net[h] + x + in_max' - out_min'  and  >= ...
        b = demand[h] - net[h] - in_min[h][nxt] + out_max[h][nxt]
        if b < vhi:
            vhi = b
        b = demand[h] - net[h] - in_max[h][nxt] + out_min[h][nxt]
        if b > vlo:
            vlo = b
        for x in range(vhi, vlo - 1, -1):
            values[k] = x
            net[t] -= x
            net[h] += x
            walk(nxt)
            net[t] += x
            net[h] -= x

    walk(0)
    return results
