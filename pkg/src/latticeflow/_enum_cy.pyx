# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled lattice-flow enumeration kernel (int64).

Same contract as _enum_py.enumerate_flows; callers guard against int64
overflow before dispatching here.
"""

from libc.stdlib cimport calloc, free


def enumerate_flows(tails, heads, lo, hi, demand):
    cdef Py_ssize_t n_edges = len(tails)
    cdef Py_ssize_t n_vertices = len(demand)
    cdef Py_ssize_t e, v, k
    cdef long long x

    results = []
    for e in range(n_edges):
        if lo[e] > hi[e]:
            return results

    cdef long long *c_tail = <long long *> calloc(max(n_edges, 1), sizeof(long long))
    cdef long long *c_head = <long long *> calloc(max(n_edges, 1), sizeof(long long))
    cdef long long *c_lo = <long long *> calloc(max(n_edges, 1), sizeof(long long))
    cdef long long *c_hi = <long long *> calloc(max(n_edges, 1), sizeof(long long))
    cdef long long *c_d = <long long *> calloc(max(n_vertices, 1), sizeof(long long))
    cdef long long *net = <long long *> calloc(max(n_vertices, 1), sizeof(long long))
    cdef Py_ssize_t stride = n_edges + 1
    cdef long long *in_min = <long long *> calloc(n_vertices * stride + 1, sizeof(long long))
    cdef long long *in_max = <long long *> calloc(n_vertices * stride + 1, sizeof(long long))
    cdef long long *out_min = <long long *> calloc(n_vertices * stride + 1, sizeof(long long))
    cdef long long *out_max = <long long *> calloc(n_vertices * stride + 1, sizeof(long long))
    cdef long long *values = <long long *> calloc(max(n_edges, 1), sizeof(long long))
    cdef long long *stack_lo = <long long *> calloc(max(n_edges, 1), sizeof(long long))

    if (c_tail == NULL or c_head == NULL or c_lo == NULL or c_hi == NULL
            or c_d == NULL or net == NULL or in_min == NULL or in_max == NULL
            or out_min == NULL or out_max == NULL or values == NULL
            or stack_lo == NULL):
        free(c_tail); free(c_head); free(c_lo); free(c_hi); free(c_d)
        free(net); free(in_min); free(in_max); free(out_min); free(out_max)
        free(values); free(stack_lo)
        raise MemoryError()

    cdef long long b, vlo, vhi
    cdef Py_ssize_t t, h, nxt
    cdef bint ok

    try:
        for e in range(n_edges):
            c_tail[e] = tails[e]
            c_head[e] = heads[e]
            c_lo[e] = lo[e]
            c_hi[e] = hi[e]
        for v in range(n_vertices):
            c_d[v] = demand[v]
            net[v] = 0

        for k in range(n_edges - 1, -1, -1):
            for v in range(n_vertices):
                in_min[v * stride + k] = in_min[v * stride + k + 1]
                in_max[v * stride + k] = in_max[v * stride + k + 1]
                out_min[v * stride + k] = out_min[v * stride + k + 1]
                out_max[v * stride + k] = out_max[v * stride + k + 1]
            in_min[c_head[k] * stride + k] += c_lo[k]
            in_max[c_head[k] * stride + k] += c_hi[k]
            out_min[c_tail[k] * stride + k] += c_lo[k]
            out_max[c_tail[k] * stride + k] += c_hi[k]

        if n_edges == 0:
            ok = True
            for v in range(n_vertices):
                if c_d[v] != 0:
                    ok = False
                    break
            if ok:
                results.append(())
            return results

        ok = True
        for v in range(n_vertices):
            if (net[v] + in_min[v * stride] - out_max[v * stride] > c_d[v]
                    or c_d[v] > net[v] + in_max[v * stride] - out_min[v * stride]):
                ok = False
                break
        if not ok:
            return results

        # Iterative DFS: descend with the highest feasible value, then on
        # backtrack decrement toward the stored minimum.
        k = 0
        while True:
            if k == n_edges:
                results.append(tuple([values[e] for e in range(n_edges)]))
                # backtrack
                k -= 1
                while k >= 0:
                    t = c_tail[k]
                    h = c_head[k]
                    net[t] += values[k]
                    net[h] -= values[k]
                    if values[k] > stack_lo[k]:
                        values[k] -= 1
                        net[t] -= values[k]
                        net[h] += values[k]
                        k += 1
                        break
                    k -= 1
                if k < 0:
                    break
                continue
            t = c_tail[k]
            h = c_head[k]
            nxt = k + 1
            vlo = c_lo[k]
            vhi = c_hi[k]
            b = net[t] + in_max[t * stride + nxt] - out_min[t * stride + nxt] - c_d[t]
            if b < vhi:
                vhi = b
            b = net[t] + in_min[t * stride + nxt] - out_max[t * stride + nxt] - c_d[t]
            if b > vlo:
                vlo = b
            b = c_d[h] - net[h] - in_min[h * stride + nxt] + out_max[h * stride + nxt]
            if b < vhi:
                vhi = b
            b = c_d[h] - net[h] - in_max[h * stride + nxt] + out_min[h * stride + nxt]
            if b > vlo:
                vlo = b
            if vlo > vhi:
                # dead branch: backtrack
                k -= 1
                while k >= 0:
                    t = c_tail[k]
                    h = c_head[k]
                    net[t] += values[k]
                    net[h] -= values[k]
                    if values[k] > stack_lo[k]:
                        values[k] -= 1
                        net[t] -= values[k]
                        net[h] += values[k]
                        k += 1
                        break
                    k -= 1
                if k < 0:
                    break
                continue
            values[k] = vhi
            stack_lo[k] = vlo
            net[t] -= vhi
            net[h] += vhi
            k = nxt
    finally:
        free(c_tail); free(c_head); free(c_lo); free(c_hi); free(c_d)
        free(net); free(in_min); free(in_max); free(out_min); free(out_max)
        free(values); free(stack_lo)

    return results
