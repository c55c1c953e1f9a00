import sys

sys.path.insert(0, "src")

from latticeflow.flowpoly import FlowPolytope, TransportSpec, transport_polytope
from latticeflow.graph import DirectedGraph
from latticeflow.cells import (
    CellKey,
    CellType,
    cell,
    cell_type,
    catalog_3x4,
    catalog_to_text,
    composed_generators,
    enumerate_full_cells,
    feasible_cell_types,
    high_degree_family,
    neighbor_cells,
    rescuer_search,
    unit_cell_polytope,
    verify_min_generator,
    OddDimension,
)
from latticeflow.toric import (
    Binomial,
    Exponent,
    TermOrder,
    buchberger_reduce,
    minimal_generating_set,
)

# --- Bsp 4.1.5: T(1,1,10 | 3,3,3,3) ---------------------------------------
spec = TransportSpec((1, 1, 10), (3, 3, 3, 3))
p = transport_polytope(spec)
pts = p.enumerate_lattice_points()
assert len(pts) == 16, len(pts)
conf = p.point_configuration()

full = enumerate_full_cells(p)
print("full cells:", len(full))
for key, t in full:
    print(" ", key.offsets, t.label())

K = {
    "alpha": (0, 0, 0, 0, 0, 0, 0, 0, 1, 2, 2, 2),
    "beta": (0, 0, 0, 0, 0, 0, 0, 0, 2, 1, 2, 2),
    "gamma": (0, 0, 0, 0, 0, 0, 0, 0, 2, 2, 1, 2),
    "delta": (0, 0, 0, 0, 0, 0, 0, 0, 2, 2, 2, 1),
    "eps": (0, 0, 0, 0, 0, 0, 0, 0, 2, 2, 2, 2),
}
keys = [k.offsets for k, _ in full]
assert keys == sorted(K.values()), keys
types = {k.offsets: t for k, t in full}
assert types[K["alpha"]].label() == "Z^{1,1,3}_{2,1,1,1}"
assert types[K["beta"]].label() == "Z^{1,1,3}_{1,2,1,1}"
assert types[K["gamma"]].label() == "Z^{1,1,3}_{1,1,2,1}"
assert types[K["delta"]].label() == "Z^{1,1,3}_{1,1,1,2}"
assert types[K["eps"]].label() == "Z^{1,1,2}_{1,1,1,1}"

# point sets (1-based ambient numbering = descending lex position)
def members(offsets):
    cp = cell(p, CellKey(offsets))
    got = set(cp.enumerate_lattice_points())
    return sorted(pts.index(x) + 1 for x in got)

assert members(K["alpha"]) == [1, 2, 3, 4, 5, 9, 13], members(K["alpha"])
assert members(K["beta"]) == [2, 5, 6, 7, 8, 10, 14]
assert members(K["gamma"]) == [3, 7, 9, 10, 11, 12, 15]
assert members(K["delta"]) == [4, 8, 12, 13, 14, 15, 16]
assert members(K["eps"]) == [2, 3, 4, 5, 7, 8, 9, 10, 12, 13, 14, 15]
print("Bsp 4.1.5 cells ok")

# neighbors: eps touches all four simplex cells
nb = neighbor_cells(p, CellKey(K["eps"]))
assert sorted(x.offsets for x in nb) == sorted(
    [K["alpha"], K["beta"], K["gamma"], K["delta"]]
), nb
nb_alpha = neighbor_cells(p, CellKey(K["alpha"]))
assert [x.offsets for x in nb_alpha] == [K["eps"]], nb_alpha
print("neighbors ok")

# --- T(1,1,3 | 1,1,1,2): two cells, one neighbor each ----------------------
spec2 = TransportSpec((1, 1, 3), (1, 1, 1, 2))
p2 = transport_polytope(spec2)
pts2 = p2.enumerate_lattice_points()
assert len(pts2) == 13, len(pts2)
full2 = enumerate_full_cells(p2)
assert len(full2) == 2, full2
t_by_key = {k.offsets: t.label() for k, t in full2}
k0 = (0,) * 12
k34 = (0,) * 11 + (1,)
assert t_by_key[k0] == "Z^{1,1,3}_{1,1,1,2}", t_by_key
assert t_by_key[k34] == "Z^{1,1,2}_{1,1,1,1}", t_by_key
assert len(cell(p2, CellKey(k0)).enumerate_lattice_points()) == 7
assert len(cell(p2, CellKey(k34)).enumerate_lattice_points()) == 12
assert [x.offsets for x in neighbor_cells(p2, CellKey(k0))] == [k34]
assert [x.offsets for x in neighbor_cells(p2, CellKey(k34))] == [k0]
print("T(1,1,3|1,1,1,2) cells ok")

# --- K4 flow polytope: simplex cells of 4 points each ----------------------
g4 = DirectedGraph.make(
    (1, 2, 3, 4), ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))
)
p4 = FlowPolytope(g4, (-2, 0, 0, 2), None, (0,) * 6)
full4 = enumerate_full_cells(p4)
for key, t in full4:
    cp = cell(p4, key)
    npts = len(cp.enumerate_lattice_points())
    assert npts == 4, (key, npts)
print("K4 cells:", len(full4), "all 4-point simplices")

# --- feasible types ---------------------------------------------------------
types34 = feasible_cell_types(TransportSpec((4, 4, 4), (3, 3, 3, 3)))
labels = [t.label() for t in types34]
expect = [
    "Z^{1,1,2}_{1,1,1,1}",
    "Z^{1,2,2}_{1,1,1,2}",
    "Z^{1,1,3}_{1,1,1,2}",
    "Z^{2,2,2}_{1,1,2,2}",
    "Z^{1,2,3}_{1,1,2,2}",
    "Z^{2,2,3}_{1,2,2,2}",
    "Z^{1,3,3}_{1,2,2,2}",
    "Z^{2,3,3}_{2,2,2,2}",
]
assert labels == expect, labels
reps = [t for t in types34 if t.is_representative]
assert [t.label() for t in reps] == expect[:5], reps
pairs = {t.label(): t.complement().sorted().label() for t in types34}
assert pairs["Z^{1,1,2}_{1,1,1,1}"] == "Z^{2,3,3}_{2,2,2,2}"
assert pairs["Z^{1,2,2}_{1,1,1,2}"] == "Z^{2,2,3}_{1,2,2,2}"
assert pairs["Z^{1,1,3}_{1,1,1,2}"] == "Z^{1,3,3}_{1,2,2,2}"
assert pairs["Z^{2,2,2}_{1,1,2,2}"] == "Z^{2,2,2}_{1,1,2,2}"
assert pairs["Z^{1,2,3}_{1,1,2,2}"] == "Z^{1,2,3}_{1,1,2,2}"
print("feasible types 3x4 ok (8 types, 5 reps)")

types22 = feasible_cell_types(TransportSpec((1, 1), (1, 1)))
assert len(types22) == 1 and types22[0].label() == "Z^{1,1}_{1,1}", types22

typesk4 = feasible_cell_types(g4)
demands = [t.demand for t in typesk4]
expect_k4 = [
    (-2, -1, 1, 2),
    (-2, 0, 0, 2),
    (-2, 0, 1, 1),
    (-1, -1, 0, 2),
    (-1, -1, 1, 1),
    (-1, 0, 0, 1),
]
assert demands == expect_k4, demands
print("feasible types K4 ok")

# --- catalog ---------------------------------------------------------------
rows = catalog_3x4()
got = [
    (r.cell_type.label(), r.points, r.degree, len(r.generators), len(r.members))
    for r in rows
]
expect_rows = [
    ("Z^{1,1,2}_{1,1,1,1}", 12, 3, 10, 2),
    ("Z^{1,2,2}_{1,1,1,2}", 12, 3, 9, 2),
    ("Z^{1,1,3}_{1,1,1,2}", 7, None, 0, 2),
    ("Z^{2,2,2}_{1,1,2,2}", 15, 2, 18, 1),
    ("Z^{1,2,3}_{1,1,2,2}", 8, 2, 1, 1),
]
assert got == expect_rows, got
print(catalog_to_text(rows))
print("catalog ok")

# --- rescuers ----------------------------------------------------------------
# ambient form of the cubic relation in the 12-point cell of T(1,1,10|3,3,3,3)
rel = Binomial(Exponent.from_indices((6, 11, 13)), Exponent.from_indices((7, 9, 14)))
res = rescuer_search(p, rel)
assert res is not None and res.kind == "one", res
r_vec = res.matrices[0]
assert r_vec in pts, r_vec
a, d = res.anchor
assert a in (6, 11, 13) and d in (7, 9, 14), res.anchor
s_vec = tuple(x + y + z for x, y, z in zip(pts[6], pts[11], pts[13]))
assert r_vec == tuple(s - x - y for s, x, y in zip(s_vec, pts[a], pts[d]))
print("rescuer (4.17):", res.kind, "R index", pts.index(r_vec) + 1, "anchor", res.anchor)
# determinism
res_again = rescuer_search(p, rel)
assert res_again == res
# M16 is also a valid rescuer for the pair (M7, M10); check the identity by hand
m16 = pts[15]
assert m16 == tuple(s - x - y for s, x, y in zip(s_vec, pts[6], pts[9]))

# the stuck relation in T(1,1,3|1,1,1,2): no rescuer exists
rel2 = Binomial(Exponent.from_indices((0, 4, 6)), Exponent.from_indices((1, 3, 7)))
res2 = rescuer_search(p2, rel2)
assert res2 is None, res2
print("rescuer (4.21): none, as expected")

# --- high-degree family -----------------------------------------------------
for m, n in ((4, 4), (4, 6), (6, 6), (8, 8), (6, 8)):
    fam = high_degree_family(m, n)
    assert fam.degree == m * (n - 2) // 2
    assert len(fam.a_one) == m * (n - 3) // 2, (m, n, len(fam.a_one))
    assert len(fam.a_two) == m // 2
    assert fam.relation.lead.degree == fam.degree
    assert fam.relation.trail.degree == fam.degree
print("family relation (4.11) balances for all even sizes tried")

try:
    high_degree_family(5, 4)
    raise AssertionError("odd size accepted")
except OddDimension:
    pass

fam6 = high_degree_family(6, 6)
assert fam6.spec.rows == (39,) * 6, fam6.spec.rows
assert fam6.spec.cols == (3, 3, 3, 3, 3, 219), fam6.spec.cols
d_coeff = (6 * 4 - 6) // 2 + 1
rhs_expect = tuple(
    tuple(
        (2 if j == 0 else 1 if j < 3 else 10 if j == 3 else 11)
        if i < 3
        else (10 if j == 0 else 11 if j < 3 else 2 if j == 3 else 1)
        for j in range(6)
    )
    for i in range(6)
)
from latticeflow.cells import _matrix_sum

rhs = _matrix_sum([fam6.c, fam6.d, fam6.e], [1, 10, 1])
assert rhs == rhs_expect, rhs
print("m=n=6 goldens ok")

# Bem 4.4.2: unique full positions inside the family
fam4 = high_degree_family(4, 4)
family = fam4.a_one + fam4.a_two
for mat in family:
    ones_at = {
        (i, j)
        for i in range(4)
        for j in range(4)
        if mat[i][j] == 1
        and all(other[i][j] == 0 for other in family if other != mat)
    }
    assert ones_at, mat
print("Bem 4.4.2 unique positions ok (m=n=4)")

# ambient embedding: 1000 lattice points, conclusive minimality
amb = transport_polytope(fam4.spec)
assert fam4.spec.rows == (2 + 16,) * 4 and fam4.spec.cols == (2, 2, 2, 66)
apts = amb.enumerate_lattice_points()
assert len(apts) == 1000, len(apts)
aconf = amb.point_configuration()
order = fam4.ambient_order(aconf)
flat = {
    tuple(x for row in fam4.ambient_matrix(mat) for x in row): mat
    for mat in fam4.involved
}
loc = {}
for i, pt in enumerate(aconf.points):
    if tuple(pt) in flat:
        loc[flat[tuple(pt)]] = i
arel = Binomial(
    Exponent({loc[mat]: 1 for mat in fam4.a_one + fam4.a_two}),
    Exponent({loc[fam4.d]: 3, loc[fam4.e]: 1}),
    order,
)
assert arel.lead == Exponent({loc[mat]: 1 for mat in fam4.a_one + fam4.a_two}), "family side must lead"
ok = verify_min_generator(aconf, arel, order, search_bound=5_000_000)
assert ok is True, ok
print("verify_min_generator: family relation is a minimal generator (m=n=4)")

# a non-minimal lead: product of two quadric leads
cellpoly = unit_cell_polytope(CellType((-1, -1, -2, 1, 1, 1, 1), (1, 1, 2), (1, 1, 1, 1)))
cconf = cellpoly.point_configuration()
_, gens = minimal_generating_set(cconf, 4)
assert len(gens) == 10, len(gens)
ord12 = TermOrder.grevlex(len(cconf))
from collections import Counter

print("Z^{1,1,2} cell: degree histogram", sorted(Counter(g.degree for g in gens).items()))

# lifted diagonal square: x_a*x_d - x_b*x_c style quadric on the big polytope
quad = None
for g in buchberger_reduce(
    [Binomial(x.lead, x.trail, ord12) for x in gens], ord12
):
    if g.degree == 2:
        quad = g
        break
assert quad is not None
assert verify_min_generator(cconf, quad, ord12) is True
bad = Binomial(quad.lead + quad.lead, quad.trail + quad.trail, ord12)
assert bad.lead == quad.lead + quad.lead
assert verify_min_generator(cconf, bad, ord12) is False
print("verify_min_generator: quadric minimal, its square not")

# --- composition ------------------------------------------------------------
gens2, conf2 = composed_generators(p2)
_, direct2 = minimal_generating_set(conf2, 4)
o2 = TermOrder.grevlex(len(conf2))
gb_a = buchberger_reduce([Binomial(g.lead, g.trail, o2) for g in gens2], o2)
gb_b = buchberger_reduce([Binomial(g.lead, g.trail, o2) for g in direct2], o2)
assert {g.pair() for g in gb_a} == {g.pair() for g in gb_b}
print("composed generators span the ambient ideal on T(1,1,3|1,1,1,2)")

print("ALL CELL SMOKE TESTS PASSED")
