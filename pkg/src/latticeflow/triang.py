"""Subdivisions and triangulations of point configurations.

A subdivision is stored by its maximal cells, each an index subset of
the configuration.  The full cell family (every face of every maximal
cell) is materialized only on demand because the closure axioms make it
exponentially redundant.

Regular subdivisions are computed exactly: the points are lifted by
their rational weights and the lower facets of the lifted configuration
are projected back down.  Deciding regularity of a given subdivision is
an exact linear program over the weights and one affine functional per
maximal cell, so a missing certificate proves non-regularity instead of
reporting a numerical near-miss.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Optional, Sequence

from .exactmath import EQ, GE, GT, LpProblem, kernel_basis, solve_lp, solve_rational
from .pconf import PointConfiguration


class NotVertexOrder(ValueError):
    """The pulling order is not a permutation of the vertex indices."""


class CutNotRepresentable(ValueError):
    """A half of a cut cell is not the hull of configuration points."""


class NotATriangulation(ValueError):
    """An operation that needs simplex cells was given wider ones."""


def _dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def _canon_cell(cell, n: int) -> tuple:
    out = tuple(sorted({int(i) for i in cell}))
    if not out:
        raise ValueError("empty cell")
    if out[0] < 0 or out[-1] >= n:
        raise ValueError("cell index out of range")
    return out


@dataclass(frozen=True)
class Subdivision:
    """A subdivision of a point configuration, stored by maximal cells.

    The invariants of the combinatorial definition (face-closed,
    intersection-closed, closures cover the index set) concern the full
    cell family; ``is_valid`` checks them on demand for instances small
    enough to materialize that family.
    """

    conf: PointConfiguration
    maximal_cells: tuple

    def __init__(self, conf: PointConfiguration, maximal_cells):
        cells = tuple(sorted({_canon_cell(c, len(conf)) for c in maximal_cells}))
        if not cells:
            raise ValueError("a subdivision needs at least one maximal cell")
        object.__setattr__(self, "conf", conf)
        object.__setattr__(self, "maximal_cells", cells)

    def __len__(self) -> int:
        return len(self.maximal_cells)

    def all_cells(self) -> frozenset:
        """Every face of every maximal cell, as a frozenset of frozensets.

        Faces of a cell are the cell itself, the empty set and all
        intersections of its facets; the family is materialized cell by
        cell, so this is meant for small instances.
        """
        out: set = set()
        for cell in self.maximal_cells:
            out |= _faces_of_cell(self.conf, cell)
        return frozenset(out)

    def is_valid(self) -> bool:
        """Check the subdivision axioms on the derived cell family.

        Face-closedness holds by construction (faces of faces are
        faces), so the actual checks are closure under intersections
        and that the closures of the maximal cells cover every index.
        """
        cells = self.all_cells()
        for a, b in combinations(cells, 2):
            if a & b not in cells:
                return False
        covered: set = set()
        for cell in self.maximal_cells:
            covered.update(self.conf.closure(cell))
        return covered == set(range(len(self.conf)))

    def refines(self, other: "Subdivision") -> bool:
        """Every cell of self lies inside a cell of other."""
        if self.conf != other.conf:
            return False
        others = [set(c) for c in other.maximal_cells]
        return all(
            any(set(c) <= o for o in others) for c in self.maximal_cells
        )

    def is_triangulation(self) -> bool:
        return all(
            self.conf.affine_rank(c) == len(c) - 1 for c in self.maximal_cells
        )

    def to_json(self) -> dict:
        return {"maximal_cells": [list(c) for c in self.maximal_cells]}

    @staticmethod
    def from_json(conf: PointConfiguration, data: dict) -> "Subdivision":
        return Subdivision(conf, [tuple(c) for c in data["maximal_cells"]])


def _faces_of_cell(conf: PointConfiguration, cell) -> set:
    """All faces of one cell: itself, the empty face and every
    intersection of its facets."""
    facets = [frozenset(f.members) for f in conf.facets(of=cell)]
    faces = {frozenset(cell), frozenset()}
    frontier = set(facets)
    while frontier:
        faces |= frontier
        fresh = set()
        for f in frontier:
            for g in facets:
                h = f & g
                if h not in faces and h not in fresh:
                    fresh.add(h)
        frontier = fresh
    return faces


def trivial_subdivision(conf: PointConfiguration) -> Subdivision:
    """The subdivision whose single maximal cell is the whole index set."""
    return Subdivision(conf, (conf.all_indices(),))


def pull(d: Subdivision, i: int) -> Subdivision:
    """Pulling refinement of a subdivision at index i.

    Maximal cells without i survive.  A maximal cell containing i is
    replaced by the pyramids {i} union F over its facets F that do not
    contain i, which are full-dimensional again because the point of i
    never lies in the affine hull of such a facet.  A simplex cell
    containing i is its own pyramid, so it is kept as is.
    """
    conf = d.conf
    i = int(i)
    if not 0 <= i < len(conf):
        raise ValueError("pull index out of range")
    out = []
    for cell in d.maximal_cells:
        if i not in cell:
            out.append(cell)
            continue
        if conf.affine_rank(cell) == len(cell) - 1:
            out.append(cell)
            continue
        for facet in conf.facets(of=cell):
            if i not in facet.members:
                out.append(tuple(sorted((i,) + facet.members)))
    return Subdivision(conf, out)


def pulling_triangulation(conf: PointConfiguration, order=None) -> Subdivision:
    """Pull at every vertex of the configuration, in the given order.

    The default order sorts the vertex indices by their point
    coordinates lexicographically, which makes the result
    deterministic; any explicit permutation of the vertex indices is
    accepted.  The outcome is always a triangulation, so non-simplex
    cells indicate an internal error.
    """
    verts = conf.vertices()
    if order is None:
        ordered = sorted(verts, key=lambda j: conf.points[j])
    else:
        ordered = [int(j) for j in order]
        if sorted(ordered) != list(verts):
            raise NotVertexOrder(
                "order must be a permutation of the vertex indices"
            )
    d = trivial_subdivision(conf)
    for j in ordered:
        d = pull(d, j)
    for cell in d.maximal_cells:
        if conf.affine_rank(cell) != len(cell) - 1:
            raise NotATriangulation(
                "pulling the vertices leaves a non-simplex cell; "
                "lattice points on proper faces that are not vertices "
                "obstruct it, subdivide along hyperplanes first"
            )
    return d


@dataclass(frozen=True)
class RegularityCertificate:
    """Weights plus one affine functional per maximal cell.

    The functional of a cell takes the weight value exactly on the
    cell's indices and stays strictly below the weight everywhere else;
    ``verify`` replays both conditions with exact arithmetic.
    """

    weights: tuple
    functionals: tuple

    def __init__(self, weights, functionals):
        ws = tuple(Fraction(x) for x in weights)
        fns = []
        for cell, lin, const in functionals:
            fns.append(
                (
                    tuple(int(i) for i in cell),
                    tuple(Fraction(x) for x in lin),
                    Fraction(const),
                )
            )
        object.__setattr__(self, "weights", ws)
        object.__setattr__(self, "functionals", tuple(fns))

    def functional_for(self, cell) -> Optional[tuple]:
        key = tuple(sorted(int(i) for i in cell))
        for c, lin, const in self.functionals:
            if c == key:
                return lin, const
        return None

    def verify(self, conf: PointConfiguration, d: Subdivision) -> bool:
        if len(self.weights) != len(conf):
            return False
        if {c for c, _, _ in self.functionals} != set(d.maximal_cells):
            return False
        for cell, lin, const in self.functionals:
            members = set(cell)
            for j in range(len(conf)):
                val = _dot(lin, conf.points[j]) + const
                if j in members:
                    if val != self.weights[j]:
                        return False
                elif not val < self.weights[j]:
                    return False
        return True

    def to_json(self) -> dict:
        return {
            "weights": [str(w) for w in self.weights],
            "functionals": [
                {
                    "cell": list(cell),
                    "linear": [str(x) for x in lin],
                    "constant": str(const),
                }
                for cell, lin, const in self.functionals
            ],
        }

    @staticmethod
    def from_json(data: dict) -> "RegularityCertificate":
        return RegularityCertificate(
            [Fraction(w) for w in data["weights"]],
            [
                (
                    tuple(entry["cell"]),
                    tuple(Fraction(x) for x in entry["linear"]),
                    Fraction(entry["constant"]),
                )
                for entry in data["functionals"]
            ],
        )


def certificate_from_weights(
    conf: PointConfiguration, d: Subdivision, weights
) -> Optional[RegularityCertificate]:
    """Certify that the given weights induce the given subdivision.

    For each maximal cell the affine functional interpolating the
    weights on the cell is solved for exactly and then checked to stay
    strictly below the weights off the cell.  Cells of a subdivision
    span the hull, so the interpolation determines the functional on
    every configuration point and a failed check really means the
    weights do not induce this subdivision.
    """
    w = tuple(Fraction(x) for x in weights)
    if len(w) != len(conf):
        raise ValueError("one weight per configuration point expected")
    n = conf.ambient_dim
    den = lcm(*(x.denominator for x in w)) if w else 1
    fns = []
    for cell in d.maximal_cells:
        rows = [list(conf.points[i]) + [1] for i in cell]
        rhs = [int(w[i] * den) for i in cell]
        sol = solve_rational(rows, rhs)
        if sol is None:
            return None
        lin = tuple(x / den for x in sol[:n])
        const = sol[n] / den
        members = set(cell)
        for j in range(len(conf)):
            val = _dot(lin, conf.points[j]) + const
            if j in members:
                if val != w[j]:
                    return None
            elif not val < w[j]:
                return None
        fns.append((cell, lin, const))
    return RegularityCertificate(w, fns)


def regular_subdivision(conf: PointConfiguration, weights):
    """The subdivision induced by a rational weight vector.

    Each point is lifted by its weight; the maximal cells are the
    member sets of the lifted configuration's facets whose functional
    has positive last coordinate (the lower facets).  When the lifted
    configuration is flat the weights are affine on the configuration
    and the subdivision is trivial.  Returns the subdivision together
    with its certificate.
    """
    w = tuple(Fraction(x) for x in weights)
    if len(w) != len(conf):
        raise ValueError("one weight per configuration point expected")
    den = lcm(*(x.denominator for x in w)) if w else 1
    lifted_points = [
        tuple(p) + (int(wi * den),) for p, wi in zip(conf.points, w)
    ]
    lifted = PointConfiguration(lifted_points)
    if lifted.affine_rank() == conf.affine_rank():
        d = trivial_subdivision(conf)
    else:
        cells = [
            f.members for f in lifted.facets() if f.functional[-1] > 0
        ]
        d = Subdivision(conf, cells)
    cert = certificate_from_weights(conf, d, w)
    if cert is None:
        raise RuntimeError("lower hull cells are not induced by their weights")
    return d, cert


def regularity_certificate(
    conf: PointConfiguration, d: Subdivision
) -> Optional[RegularityCertificate]:
    """Decide regularity of a subdivision by an exact linear program.

    Unknowns are one weight per index and one affine functional per
    maximal cell; the functional must equal the weight on the cell and
    stay strictly below it elsewhere.  Because the program is solved
    exactly, returning nothing proves the subdivision non-regular.
    """
    n = conf.ambient_dim
    npts = len(conf)
    cells = d.maximal_cells
    width = npts + len(cells) * (n + 1)
    lp = LpProblem(width)
    for ci, cell in enumerate(cells):
        members = set(cell)
        off = npts + ci * (n + 1)
        for j in range(npts):
            row = [Fraction(0)] * width
            for k in range(n):
                row[off + k] = Fraction(conf.points[j][k])
            row[off + n] = Fraction(1)
            row[j] -= 1
            if j in members:
                lp.add(row, EQ, 0)
            else:
                lp.add([-x for x in row], GT, 0)
    res = solve_lp(lp)
    if not res.feasible:
        return None
    cert = certificate_from_weights(conf, d, res.point[:npts])
    if cert is None:
        raise RuntimeError("feasible regularity weights failed the recheck")
    return cert


def hyperplane_refine(d: Subdivision, psi, c: int) -> Subdivision:
    """Refine a subdivision along the hyperplane psi . x = c.

    Cells entirely on one side survive.  A cut cell is replaced by its
    two halves, the subsets of its indices with psi-value at least
    respectively at most c.  Each half must be exactly the hull piece
    on its side of the hyperplane; that is verified by exact linear
    programs and violations raise CutNotRepresentable.
    """
    conf = d.conf
    n = conf.ambient_dim
    functional = tuple(int(x) for x in psi)
    if len(functional) != n:
        raise ValueError("functional length mismatch")
    level = int(c)
    out = []
    for cell in d.maximal_cells:
        vals = {i: _dot(functional, conf.points[i]) for i in cell}
        if not (
            any(v > level for v in vals.values())
            and any(v < level for v in vals.values())
        ):
            out.append(cell)
            continue
        upper = tuple(i for i in cell if vals[i] >= level)
        lower = tuple(i for i in cell if vals[i] <= level)
        _check_half(conf, cell, upper, functional, level, True)
        _check_half(conf, cell, lower, functional, level, False)
        out.append(upper)
        out.append(lower)
    return Subdivision(conf, out)


def _check_half(conf, cell, half, functional, level, upper: bool) -> None:
    """Verify conv(half) equals the corresponding side of the cut cell.

    The side is the polytope cut out of conv(cell) by the halfspace; it
    is contained in conv(half) exactly when no point of the side
    violates a facet inequality of conv(half), which one exact LP per
    facet decides.  The reverse containment is automatic.
    """
    rank = conf.affine_rank(cell)
    if conf.affine_rank(half) != rank:
        raise CutNotRepresentable(
            "a half of a cut cell collapses to lower dimension"
        )
    n = conf.ambient_dim
    base = conf.points[cell[0]]
    diffs = [
        [conf.points[i][k] - base[k] for k in range(n)] for i in cell[1:]
    ]
    hull_eqs = kernel_basis(diffs) if diffs else []
    cell_facets = conf.facets(of=cell)
    sign = 1 if upper else -1
    for facet in conf.facets(of=half):
        lp = LpProblem(n)
        for row in hull_eqs:
            lp.add(row, EQ, _dot(row, base))
        for f in cell_facets:
            lp.add(f.functional, GE, f.level)
        lp.add([sign * x for x in functional], GE, sign * level)
        lp.add([-x for x in facet.functional], GT, -facet.level)
        if solve_lp(lp).feasible:
            raise CutNotRepresentable(
                "cut produces a vertex outside the configuration"
            )


def _coordinate_cuts(conf: PointConfiguration):
    """Every integral coordinate hyperplane meeting the hull's interior."""
    cuts = []
    for e in range(conf.ambient_dim):
        vals = [p[e] for p in conf.points]
        for k in range(min(vals) + 1, max(vals)):
            cuts.append((e, k))
    return cuts


def hyperplane_subdivision_flow(poly) -> Subdivision:
    """Subdivide a flow polytope along all integral coordinate
    hyperplanes that meet the interior of its hull.

    The configuration is the polytope's full lattice point set; the
    maximal cells of the result are the full-dimensional pieces in
    which every coordinate is confined between consecutive integers.
    """
    conf = poly.point_configuration()
    d = trivial_subdivision(conf)
    n = conf.ambient_dim
    for e, k in _coordinate_cuts(conf):
        unit = tuple(1 if j == e else 0 for j in range(n))
        d = hyperplane_refine(d, unit, k)
    return d


def transported_weights(weights, conf: PointConfiguration, psi, c, delta=1):
    """Weight update accompanying a hyperplane refinement.

    Adding delta times the distance from the hyperplane folds the
    lifted polytope up on both sides of the cut, so for small enough
    positive delta the new weights induce the refined subdivision.
    """
    w = [Fraction(x) for x in weights]
    dl = Fraction(delta)
    return tuple(
        wi + dl * abs(_dot(psi, p) - c) for wi, p in zip(w, conf.points)
    )


def flow_triangulation(poly):
    """Regular unimodular triangulation of a flow polytope's lattice
    points, with its certificate.

    First the coordinate hyperplane subdivision is built, then every
    point is pulled.  All points must be pulled, not only the polytope
    vertices: each one is a vertex of the unit-window cells around it,
    and the basis correspondence downstream needs every point to end up
    a vertex of the triangulation.  The witness weights are assembled
    from the exact hyperplane distances plus a rapidly decreasing
    perturbation for the pulled points; the perturbation base is
    squared until the certificate check passes, which the theory
    guarantees to happen.
    """
    conf = poly.point_configuration()
    d = trivial_subdivision(conf)
    n = conf.ambient_dim
    cuts = _coordinate_cuts(conf)
    for e, k in cuts:
        unit = tuple(1 if j == e else 0 for j in range(n))
        d = hyperplane_refine(d, unit, k)
    base = [
        sum(abs(p[e] - k) for e, k in cuts) for p in conf.points
    ]
    ordered = sorted(range(len(conf)), key=lambda j: conf.points[j])
    tri = d
    for j in ordered:
        tri = pull(tri, j)
    for cell in tri.maximal_cells:
        if conf.affine_rank(cell) != len(cell) - 1:
            raise RuntimeError("pulling at every vertex must yield simplexes")
    cert = _perturbation_certificate(conf, tri, base, ordered)
    return tri, cert


def _perturbation_certificate(conf, tri, base, ordered):
    """Certificate for a pulling refinement on top of base weights.

    Each pulled index is lowered by a rapidly decreasing perturbation,
    earlier pulls by more; the base is squared until the exact recheck
    accepts, which happens once the perturbations are small enough
    against the base weights and against each other.
    """
    scale = 2 * (len(conf) + max(base, default=0) + 2)
    for _ in range(8):
        weights = [Fraction(x) for x in base]
        eps = Fraction(1, scale)
        for j in ordered:
            weights[j] -= eps
            eps /= scale
        cert = certificate_from_weights(conf, tri, weights)
        if cert is not None:
            return cert
        scale *= scale
    raise RuntimeError("no pulling perturbation certified the triangulation")


def certified_pulling_triangulation(conf: PointConfiguration, order=None):
    """Pulling triangulation together with a regularity certificate.

    The certificate comes from the perturbation construction instead of
    the generic linear program, so it stays fast on configurations
    where one weight variable per point and one functional per cell
    would be too much.
    """
    tri = pulling_triangulation(conf, order)
    if order is None:
        ordered = sorted(conf.vertices(), key=lambda j: conf.points[j])
    else:
        ordered = [int(j) for j in order]
    base = [0] * len(conf)
    cert = _perturbation_certificate(conf, tri, base, ordered)
    return tri, cert


def is_unimodular_triangulation(d: Subdivision) -> bool:
    """Whether every maximal cell is a unimodular simplex.

    Faces of unimodular simplexes are unimodular again, so checking the
    maximal cells suffices.
    """
    conf = d.conf
    for cell in d.maximal_cells:
        if conf.affine_rank(cell) != len(cell) - 1:
            raise NotATriangulation("subdivision has a non-simplex cell")
    return all(
        conf.normalized_volume(cell) == 1 for cell in d.maximal_cells
    )


def minimal_nonfaces(d: Subdivision, size_bound: Optional[int] = None) -> list:
    """Inclusion-minimal index sets lying in no cell, up to size_bound.

    Assumes a triangulation, where the faces are exactly the subsets of
    maximal cells.  Candidates of size s are built by extending faces of
    size s-1 with a larger index; a candidate whose smaller subsets are
    all faces is either a face itself or a minimal nonface.  Dropping
    the largest index of any size-s face or minimal nonface gives back a
    size-(s-1) face, so the level-by-level sweep misses nothing.

    When size_bound is omitted it defaults to the affine rank plus two,
    which covers every minimal nonface of a triangulation.
    """
    npts = len(d.conf)
    if size_bound is None:
        size_bound = d.conf.affine_rank() + 2
    masks = [sum(1 << i for i in cell) for cell in d.maximal_cells]

    def is_face(mask: int) -> bool:
        return any(mask & ~m == 0 for m in masks)

    found = []
    level = []
    for i in range(npts):
        if is_face(1 << i):
            level.append(((i,), 1 << i))
        else:
            found.append((i,))
    for _size in range(2, size_bound + 1):
        grown = []
        for f, fmask in level:
            for j in range(f[-1] + 1, npts):
                tmask = fmask | (1 << j)
                if not all(is_face(tmask & ~(1 << i)) for i in f):
                    continue
                t = f + (j,)
                if is_face(tmask):
                    grown.append((t, tmask))
                else:
                    found.append(t)
        level = grown
        if not level:
            break
    return found
