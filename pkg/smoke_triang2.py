import sys, time
sys.path.insert(0, "src")

from latticeflow.flowpoly import TransportSpec, transport_polytope, flow_to_matrix
from latticeflow import triang as T

t0 = time.time()

spec = TransportSpec((1, 1, 10), (3, 3, 3, 3))
poly = transport_polytope(spec)
conf = poly.point_configuration()
pts = poly.enumerate_lattice_points()
assert len(pts) == 16

sub = T.hyperplane_subdivision_flow(poly)
print("hyperplane subdivision cells:", len(sub.maximal_cells), time.time() - t0)
for c in sub.maximal_cells:
    print("  ", c, "size", len(c))
assert len(sub.maximal_cells) == 5

# expected memberships from the bottom-row bound pattern:
# K(1,2,2,2) = {M1..M5, M9, M13}; K(2,1,2,2) = {M2,M5,M6,M7,M8,M10,M14};
# K(2,2,1,2) = {M3,M7,M9,M10,M11,M12,M15}; K(2,2,2,1) = {M4,M8,M12,M13,M14,M15,M16};
# K(2,2,2,2) = {M2,M3,M4,M5,M7,M8,M9,M10,M12,M13,M14,M15}
# (1-based M numbers; config index = M number - 1)
expected = {
    tuple(sorted(m - 1 for m in (1, 2, 3, 4, 5, 9, 13))),
    tuple(sorted(m - 1 for m in (2, 5, 6, 7, 8, 10, 14))),
    tuple(sorted(m - 1 for m in (3, 7, 9, 10, 11, 12, 15))),
    tuple(sorted(m - 1 for m in (4, 8, 12, 13, 14, 15, 16))),
    tuple(sorted(m - 1 for m in (2, 3, 4, 5, 7, 8, 9, 10, 12, 13, 14, 15))),
}
assert set(sub.maximal_cells) == expected, (set(sub.maximal_cells), expected)
print("cell memberships match", time.time() - t0)

spec2 = TransportSpec((1, 1, 3), (1, 1, 1, 2))
poly2 = transport_polytope(spec2)
sub2 = T.hyperplane_subdivision_flow(poly2)
print("second subdivision cells:", len(sub2.maximal_cells), time.time() - t0)
assert len(sub2.maximal_cells) == 2

tri2, cert2 = T.flow_triangulation(poly2)
print("small triangulation cells:", len(tri2.maximal_cells), time.time() - t0)
assert T.is_unimodular_triangulation(tri2)
assert cert2.verify(poly2.point_configuration(), tri2)
assert tri2.refines(sub2)

tri, cert = T.flow_triangulation(poly)
print("big triangulation cells:", len(tri.maximal_cells), time.time() - t0)
assert T.is_unimodular_triangulation(tri)
assert cert.verify(conf, tri)
assert tri.refines(sub)
nf = T.minimal_nonfaces(tri, 3)
print("minimal nonfaces:", len(nf), "sizes", {len(x) for x in nf}, time.time() - t0)

print("ALL TRIANG FLOW OK", time.time() - t0)
