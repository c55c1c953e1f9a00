import sys, time
sys.path.insert(0, "src")
from fractions import Fraction
from itertools import permutations

from latticeflow.pconf import PointConfiguration
from latticeflow import triang as T

t0 = time.time()

# 1. trivial subdivision of a simplex
simp = PointConfiguration([(0, 0), (1, 0), (0, 1)])
d0 = T.trivial_subdivision(simp)
assert d0.maximal_cells == ((0, 1, 2),)
assert d0.is_valid()
assert d0.is_triangulation()

# 2. square pulled at (0,0)
sq = PointConfiguration([(0, 0), (1, 0), (0, 1), (1, 1)])
dsq = T.pull(T.trivial_subdivision(sq), 0)
assert dsq.maximal_cells == ((0, 1, 3), (0, 2, 3)), dsq.maximal_cells
assert dsq.is_valid()
print("pull square ok", time.time() - t0)

# pulling a simplex at its own vertex: unchanged
dsimp = T.pull(T.trivial_subdivision(simp), 1)
assert dsimp.maximal_cells == ((0, 1, 2),)

# 3. pulling triangulation of the square, any order; unimodular; regular
for order in permutations(range(4)):
    tri = T.pulling_triangulation(sq, order)
    assert len(tri.maximal_cells) == 2
    assert T.is_unimodular_triangulation(tri)
tri = T.pulling_triangulation(sq)
assert tri.maximal_cells == ((0, 1, 3), (0, 2, 3))
cert = T.regularity_certificate(sq, tri)
assert cert is not None and cert.verify(sq, tri)
rt = T.RegularityCertificate.from_json(cert.to_json())
assert rt.verify(sq, tri)
print("square pulling + certificate ok", time.time() - t0)

# NotVertexOrder
try:
    T.pulling_triangulation(sq, (0, 1, 2))
    raise AssertionError("expected NotVertexOrder")
except T.NotVertexOrder:
    pass

# 4. triangle (0,0),(3,0),(3,1) with all its lattice points: some order non-unimodular
tripts = [(0, 0), (1, 0), (2, 0), (3, 0), (3, 1)]
tconf = PointConfiguration(tripts)
vols = set()
for order in permutations(tconf.vertices()):
    tt = T.pulling_triangulation(tconf, order)
    vols.add(T.is_unimodular_triangulation(tt))
assert False in vols, vols
print("paco converse triangle ok", vols, time.time() - t0)

# 5. regular subdivisions
dz, cz = T.regular_subdivision(sq, [0, 0, 0, 0])
assert dz.maximal_cells == ((0, 1, 2, 3),)
assert cz.verify(sq, dz)

dg, cg = T.regular_subdivision(sq, [Fraction(1, 7), 0, 0, Fraction(2, 5)])
assert dg.is_triangulation(), dg.maximal_cells
assert cg.verify(sq, dg)

# crafted shape: rectangle [0,2]x[0,1], diagonal crease, bottom-middle in no cell
rect = PointConfiguration([(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)])
w = [0, 2, 0, 2, 1, 0]
dr, cr = T.regular_subdivision(rect, w)
assert dr.maximal_cells == ((0, 2, 5), (0, 3, 4, 5)), dr.maximal_cells
assert cr.verify(rect, dr)
covered = set().union(*dr.maximal_cells)
assert 1 not in covered
print("regular subdivisions ok", time.time() - t0)

# 6. segment cut at x=1
seg = PointConfiguration([(0,), (1,), (2,)])
dseg = T.hyperplane_refine(T.trivial_subdivision(seg), (1,), 1)
assert dseg.maximal_cells == ((0, 1), (1, 2))
# without the midpoint the cut is not representable
seg2 = PointConfiguration([(0,), (2,)])
try:
    T.hyperplane_refine(T.trivial_subdivision(seg2), (1,), 1)
    raise AssertionError("expected CutNotRepresentable")
except T.CutNotRepresentable:
    pass
print("hyperplane refine ok", time.time() - t0)

# 7. minimal nonfaces: square with diagonal {0,3}
assert T.minimal_nonfaces(tri, 3) == [(1, 2)]
assert T.minimal_nonfaces(T.pulling_triangulation(simp), 3) == []

# 8. cube triangulation with a volume-2 central cell
cube_pts = [(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)]
cube = PointConfiguration(cube_pts)
idx = {p: i for i, p in enumerate(cube_pts)}
odd = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]
even = [(0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1)]
cells = [tuple(sorted(idx[p] for p in odd))]
for e in even:
    nb = [p for p in odd if sum(abs(a - b) for a, b in zip(p, e)) == 1]
    cells.append(tuple(sorted([idx[e]] + [idx[p] for p in nb])))
dcube = T.Subdivision(cube, cells)
assert dcube.is_valid()
assert dcube.is_triangulation()
assert not T.is_unimodular_triangulation(dcube)
print("cube vol-2 cell ok", time.time() - t0)

print("ALL TRIANG BASIC OK", time.time() - t0)
