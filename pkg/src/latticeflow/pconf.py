"""Indexed lattice point configurations and their exact face geometry.

A configuration is an ordered list of pairwise distinct integer points;
the position of a point is its index and stays meaningful across every
operation (faces, subdivisions and monomial variables all refer to it).
Faces carry an integer functional that attains its minimum over the
configuration exactly on the face members, so every geometric claim is
checkable by direct evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Optional, Sequence

from .exactmath import (
    DependentGenerators,
    EQ,
    GE,
    GT,
    LpProblem,
    det,
    hnf,
    hnf_rank,
    kernel_basis,
    lattice_index,
    primitive_vector,
    saturation_basis,
    solve_integer_coords,
    solve_lp,
    solve_rational,
)

# The half-open parallelepiped cross-check in normalized_volume scans an
# integer bounding box; beyond this many candidates it is skipped.
_PARALLELEPIPED_CAP = 10_000


class NotAFacet(Exception):
    """The given member set is not a facet of the given sub-configuration."""


class AffinelyDependent(Exception):
    """The given points do not form a simplex."""


@dataclass(frozen=True)
class Face:
    """A face: the functional attains its minimum exactly on the members."""

    members: tuple
    functional: tuple
    level: int


def _as_index_tuple(indices, n: int) -> tuple:
    out = tuple(sorted(set(int(i) for i in indices)))
    if out and (out[0] < 0 or out[-1] >= n):
        raise IndexError("index out of range")
    return out


@dataclass(frozen=True)
class PointConfiguration:
    """Ordered distinct lattice points, optionally with a homogeneity witness.

    ``homogeneity`` is a pair (phi, c) with phi an integer functional
    taking the value c != 0 on every point.  ``box_like`` marks
    configurations that are presented as an affine space intersected
    with a coordinate box and that contain every lattice point of their
    hull, with the extra promise that each integral coordinate window
    of the hull is again spanned by the points inside it.  Totally
    unimodular systems such as flow polytopes satisfy all of this.  For
    such configurations the facets of any window-closed subset are cut
    out by single coordinate bounds, which makes facet enumeration
    linear instead of combinatorial.
    """

    points: tuple
    homogeneity: Optional[tuple] = None
    box_like: bool = False

    def __init__(self, points, homogeneity=None, box_like=False):
        pts = tuple(tuple(int(x) for x in p) for p in points)
        if not pts:
            raise ValueError("a configuration needs at least one point")
        n = len(pts[0])
        if any(len(p) != n for p in pts):
            raise ValueError("points must share one ambient dimension")
        if len(set(pts)) != len(pts):
            raise ValueError("points must be pairwise distinct")
        if homogeneity is not None:
            phi, c = homogeneity
            phi = tuple(int(x) for x in phi)
            c = int(c)
            if c == 0:
                raise ValueError("homogeneity level must be nonzero")
            for p in pts:
                if sum(a * b for a, b in zip(phi, p)) != c:
                    raise ValueError("homogeneity certificate fails on a point")
            homogeneity = (phi, c)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "homogeneity", homogeneity)
        object.__setattr__(self, "box_like", box_like)

    # -- bookkeeping -----------------------------------------------------

    def __len__(self) -> int:
        return len(self.points)

    @property
    def ambient_dim(self) -> int:
        return len(self.points[0])

    def all_indices(self) -> tuple:
        return tuple(range(len(self.points)))

    def to_json(self) -> dict:
        return {"points": [list(p) for p in self.points]}

    @staticmethod
    def from_json(data: dict) -> "PointConfiguration":
        return PointConfiguration(data["points"])

    # -- homogeneity -----------------------------------------------------

    def homogeneity_certificate(self) -> Optional[tuple]:
        """An integer functional constant and nonzero on all points, if any.

        Scaling shows such a functional exists exactly when phi . a_i = 1
        has a rational solution, so a single linear solve decides it.
        """
        if self.homogeneity is not None:
            return self.homogeneity
        sol = solve_rational(self.points, [1] * len(self.points))
        if sol is None:
            return None
        scale = lcm(*(f.denominator for f in sol)) if sol else 1
        phi = tuple(int(f * scale) for f in sol)
        return (phi, scale)

    # -- affine structure --------------------------------------------------

    def affine_rank(self, of=None) -> int:
        """Dimension of the affine hull of the selected points."""
        idx = self.all_indices() if of is None else _as_index_tuple(of, len(self.points))
        if len(idx) <= 1:
            return 0
        base = self.points[idx[0]]
        diffs = [
            [self.points[i][j] - base[j] for j in range(self.ambient_dim)]
            for i in idx[1:]
        ]
        return hnf_rank(diffs)

    def _quotient(self, idx: tuple):
        """Saturated basis of the difference lattice plus point coordinates.

        Returns (coords, basis, base).  Coordinates are integral because
        the basis spans the saturation of the differences.
        """
        base = self.points[idx[0]]
        n = self.ambient_dim
        diffs = [[self.points[i][j] - base[j] for j in range(n)] for i in idx[1:]]
        basis = saturation_basis(diffs)
        coords = []
        for i in idx:
            vec = [self.points[i][j] - base[j] for j in range(n)]
            c = solve_integer_coords(basis, vec)
            if c is None:
                raise RuntimeError("internal error: point escapes its saturation")
            coords.append(c)
        return coords, basis, base

    # -- faces ---------------------------------------------------------------

    def face(self, members, of=None) -> Optional[Face]:
        """Decide whether members is a face of the selected sub-configuration.

        Feasibility of the exact system "equal on members, strictly larger
        off them" over rational functionals; a rational witness is scaled
        to an integer Face.  None means proven not a face.
        """
        idx = self.all_indices() if of is None else _as_index_tuple(of, len(self.points))
        mem = _as_index_tuple(members, len(self.points))
        if not mem or not set(mem) <= set(idx):
            return None
        n = self.ambient_dim
        # variables: phi (n entries), level
        prob = LpProblem(num_vars=n + 1)
        base = mem[0]
        for i in mem:
            prob.add(list(self.points[i]) + [-1], EQ, 0)
        for i in idx:
            if i in mem:
                continue
            prob.add(list(self.points[i]) + [-1], GT, 0)
        cert = solve_lp(prob)
        if not cert.feasible:
            return None
        sol = cert.point
        scale = lcm(*(f.denominator for f in sol)) if sol else 1
        phi = tuple(int(f * scale) for f in sol[:n])
        level = int(sol[n] * scale)
        face = Face(mem, phi, level)
        self._check_face(face, idx)
        return face

    def _check_face(self, face: Face, idx: tuple) -> None:
        for i in idx:
            val = sum(a * b for a, b in zip(face.functional, self.points[i]))
            if i in face.members:
                if val != face.level:
                    raise RuntimeError("internal error: face functional misses a member")
            elif val <= face.level:
                raise RuntimeError("internal error: face functional not separating")

    def vertices(self, of=None) -> tuple:
        """Indices whose point is a face on its own."""
        idx = self.all_indices() if of is None else _as_index_tuple(of, len(self.points))
        return tuple(i for i in idx if self.face((i,), of=idx) is not None)

    def facets(self, of=None) -> list:
        """All facets of the selected sub-configuration.

        Box-like configurations use the coordinate-bound candidates; the
        general path enumerates spanning subsets and keeps the one-sided
        hyperplanes.
        """
        idx = self.all_indices() if of is None else _as_index_tuple(of, len(self.points))
        rank = self.affine_rank(idx)
        if rank == 0:
            return []
        if self.box_like and self._window_closed(idx):
            # The coordinate-bound shortcut needs the subset to be
            # window-closed: it must contain every configuration point
            # inside its own coordinate bounding box.  Then its hull is
            # a window piece of the full hull, whose facets are all
            # coordinate-tight by the box_like promise.  Subsets that
            # fail the test, pyramids from pulling for instance, take
            # the generic path.
            return self._facets_box(idx, rank)
        return self._facets_generic(idx, rank)

    def _window_closed(self, idx: tuple) -> bool:
        """Whether idx holds every point inside its coordinate bounding box."""
        if len(idx) == len(self.points):
            return True
        n = self.ambient_dim
        pts = [self.points[i] for i in idx]
        lo = [min(p[j] for p in pts) for j in range(n)]
        hi = [max(p[j] for p in pts) for j in range(n)]
        inside = set(idx)
        for i, p in enumerate(self.points):
            if i in inside:
                continue
            if all(lo[j] <= p[j] <= hi[j] for j in range(n)):
                return False
        return True

    def _facets_box(self, idx: tuple, rank: int) -> list:
        n = self.ambient_dim
        out = []
        seen = set()
        for j in range(n):
            vals = [self.points[i][j] for i in idx]
            lo, hi = min(vals), max(vals)
            candidates = []
            if lo != hi:
                low_members = tuple(i for i in idx if self.points[i][j] == lo)
                unit = tuple(1 if k == j else 0 for k in range(n))
                candidates.append((low_members, unit, lo))
                high_members = tuple(i for i in idx if self.points[i][j] == hi)
                neg = tuple(-1 if k == j else 0 for k in range(n))
                candidates.append((high_members, neg, -hi))
            for members, functional, level in candidates:
                if members in seen:
                    continue
                if self.affine_rank(members) == rank - 1:
                    seen.add(members)
                    out.append(Face(members, functional, level))
        return out

    def _facets_generic(self, idx: tuple, rank: int) -> list:
        out = []
        seen = []
        for sub in combinations(idx, rank):
            if any(set(sub) <= s for s in seen):
                continue
            face = self._supporting_hyperplane(idx, sub, rank)
            if face is None:
                continue
            memset = set(face.members)
            if memset not in seen:
                seen.append(memset)
                out.append(face)
        return out

    def _supporting_hyperplane(self, idx: tuple, sub: tuple, rank: int) -> Optional[Face]:
        """The facet spanned by sub, when sub spans a supporting hyperplane.

        The functional is the generator of the value lattice of all
        integral functionals vanishing on sub's differences, which is the
        primitive normal modulo functionals constant on the affine hull.
        """
        n = self.ambient_dim
        base = self.points[sub[0]]
        diffs = [[self.points[i][j] - base[j] for j in range(n)] for i in sub[1:]]
        if diffs and hnf_rank(diffs) != rank - 1:
            return None
        if not diffs and rank != 1:
            return None
        if diffs:
            kern = kernel_basis(diffs)
        else:
            kern = [tuple(1 if k == j else 0 for k in range(n)) for j in range(n)]
        # value vectors of the kernel functionals on the selected points
        value_rows = [
            [sum(w[j] * (self.points[i][j] - base[j]) for j in range(n)) for i in idx]
            for w in kern
        ]
        h, u = hnf(value_rows)
        if not any(h[0]):
            return None
        gen_vals = h[0]
        psi = [0] * n
        for coeff, w in zip(u[0], kern):
            for j in range(n):
                psi[j] += coeff * w[j]
        lo, hi = min(gen_vals), max(gen_vals)
        if lo != 0 and hi != 0:
            return None
        if hi == 0 and lo != 0:
            psi = [-x for x in psi]
            gen_vals = [-v for v in gen_vals]
        members = tuple(i for i, v in zip(idx, gen_vals) if v == 0)
        level = sum(psi[j] * base[j] for j in range(n))
        return Face(members, tuple(psi), level)

    # -- facet width -----------------------------------------------------

    def facet_width(self, j, f) -> int:
        """Width of the sub-configuration j with respect to its facet f.

        The minimum over integral normals of (max - min) of the values on
        j; the minimum is attained by the generator of the value lattice,
        computed over the quotient modulo functionals constant on aff(j).
        """
        idx = _as_index_tuple(j, len(self.points))
        mem = _as_index_tuple(f, len(self.points))
        if not mem or not set(mem) <= set(idx):
            raise NotAFacet("facet members must come from the sub-configuration")
        rank = self.affine_rank(idx)
        if rank == 0 or self.affine_rank(mem) != rank - 1:
            raise NotAFacet("member set does not span a hyperplane of the hull")
        face = self._supporting_hyperplane(idx, self._spanning_subset(mem, rank), rank)
        if face is None or set(face.members) != set(mem):
            raise NotAFacet("member set is not cut out by a supporting hyperplane")
        vals = [
            sum(face.functional[k] * self.points[i][k] for k in range(self.ambient_dim))
            for i in idx
        ]
        return max(vals) - min(vals)

    def _spanning_subset(self, mem: tuple, rank: int) -> tuple:
        """rank points of mem that affinely span mem's hull."""
        chosen = [mem[0]]
        n = self.ambient_dim
        base = self.points[mem[0]]
        rows = []
        for i in mem[1:]:
            cand = [self.points[i][j] - base[j] for j in range(n)]
            if hnf_rank(rows + [cand]) > len(rows):
                rows.append(cand)
                chosen.append(i)
            if len(chosen) == rank:
                break
        return tuple(chosen)

    # -- volume ------------------------------------------------------------

    def normalized_volume(self, simplex) -> int:
        """Normalized volume of the simplex on the given indices.

        Computed as the index of the edge-vector lattice in its
        saturation; cross-checked against the half-open parallelepiped
        count when that stays below the brute-force guard, and against
        the plain determinant in the full-dimensional case.
        """
        idx = _as_index_tuple(simplex, len(self.points))
        if not idx:
            raise AffinelyDependent("empty index set")
        n = self.ambient_dim
        base = self.points[idx[0]]
        diffs = [[self.points[i][j] - base[j] for j in range(n)] for i in idx[1:]]
        if not diffs:
            return 1
        if hnf_rank(diffs) != len(diffs):
            raise AffinelyDependent("points are affinely dependent")
        try:
            vol = lattice_index(diffs)
        except DependentGenerators as exc:
            raise AffinelyDependent(str(exc)) from exc
        k = len(diffs)
        if k == n:
            vol_det = abs(det(diffs))
            if vol_det != vol:
                raise RuntimeError("internal error: determinant volume disagrees")
        box = self._parallelepiped_count(diffs)
        if box is not None and box != vol:
            raise RuntimeError("internal error: parallelepiped count disagrees")
        return vol

    def _parallelepiped_count(self, diffs: list) -> Optional[int]:
        """Lattice points in {sum t_i d_i : 0 <= t_i < 1}, or None if too big."""
        n = self.ambient_dim
        k = len(diffs)
        corners = [[0] * n]
        for dvec in diffs:
            corners += [[c[j] + dvec[j] for j in range(n)] for c in corners]
        lo = [min(c[j] for c in corners) for j in range(n)]
        hi = [max(c[j] for c in corners) for j in range(n)]
        total = 1
        for j in range(n):
            total *= hi[j] - lo[j] + 1
            if total > _PARALLELEPIPED_CAP:
                return None
        # Precompute a left inverse of the column matrix from k independent
        # coordinate rows, so each candidate costs one small mat-vec.
        pivot_rows: list[int] = []
        picked: list[list[int]] = []
        for j in range(n):
            row = [diffs[i][j] for i in range(k)]
            if hnf_rank(picked + [row]) > len(picked):
                picked.append(row)
                pivot_rows.append(j)
            if len(picked) == k:
                break
        inv = _invert_rational(picked)
        count = 0
        point = list(lo)
        while True:
            rhs = [Fraction(point[j]) for j in pivot_rows]
            t = [sum(inv[i][r] * rhs[r] for r in range(k)) for i in range(k)]
            if all(0 <= ti < 1 for ti in t):
                ok = all(
                    sum(t[i] * diffs[i][j] for i in range(k)) == point[j]
                    for j in range(n)
                )
                if ok:
                    count += 1
            j = 0
            while j < n:
                point[j] += 1
                if point[j] <= hi[j]:
                    break
                point[j] = lo[j]
                j += 1
            if j == n:
                break
        return count

    def is_unimodular_simplex(self, simplex) -> bool:
        return self.normalized_volume(simplex) == 1

    # -- convex position ---------------------------------------------------

    def closure(self, j) -> tuple:
        """Indices of all points inside the convex hull of the selected ones."""
        idx = _as_index_tuple(j, len(self.points))
        if not idx:
            return ()
        out = []
        for i in range(len(self.points)):
            if i in idx or self._in_hull(i, idx):
                out.append(i)
        return tuple(out)

    def _in_hull(self, i: int, idx: tuple) -> bool:
        n = self.ambient_dim
        prob = LpProblem(num_vars=len(idx))
        for j in range(n):
            prob.add([self.points[t][j] for t in idx], EQ, self.points[i][j])
        prob.add([1] * len(idx), EQ, 1)
        for t in range(len(idx)):
            coeffs = [0] * len(idx)
            coeffs[t] = 1
            prob.add(coeffs, GE, 0)
        return solve_lp(prob).feasible

    # -- smoothness ----------------------------------------------------------

    def smoothness(self):
        """Vertexwise unimodularity of the normal fan, with a report.

        In coordinates for the saturated difference lattice the polytope
        is full-dimensional; a vertex passes when it lies on exactly dim
        facets whose primitive normals form a determinant +-1 matrix.
        """
        from .flowpoly import SmoothnessReport

        idx = self.all_indices()
        rank = self.affine_rank(idx)
        if rank == 0:
            return SmoothnessReport(smooth=True)
        coords, basis, base = self._quotient(idx)
        facets = self.facets()
        normals = []
        for face in facets:
            w = tuple(
                sum(face.functional[j] * bvec[j] for j in range(self.ambient_dim))
                for bvec in basis
            )
            normals.append(primitive_vector(w))
        for v in self.vertices():
            active = [normals[k] for k, face in enumerate(facets) if v in face.members]
            if len(active) != rank:
                return SmoothnessReport(
                    smooth=False,
                    bad_vertex=self.points[v],
                    reason=f"vertex lies on {len(active)} facets, expected {rank}",
                )
            index = abs(det([list(w) for w in active]))
            if index != 1:
                return SmoothnessReport(
                    smooth=False,
                    bad_vertex=self.points[v],
                    reason=f"normal cone has index {index}",
                )
        return SmoothnessReport(smooth=True)


def _invert_rational(m: list) -> list:
    """Inverse of a small square integer matrix, as Fractions."""
    k = len(m)
    a = [
        [Fraction(m[i][j]) for j in range(k)]
        + [Fraction(1 if t == i else 0) for t in range(k)]
        for i in range(k)
    ]
    for c in range(k):
        piv = next(i for i in range(c, k) if a[i][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for i in range(k):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [row[k:] for row in a]


# ---------------------------------------------------------------------------
# module-level forms of the operations
# ---------------------------------------------------------------------------


def homogeneity_certificate(conf: PointConfiguration):
    return conf.homogeneity_certificate()


def faces(conf: PointConfiguration) -> list:
    """All facets of the configuration; see PointConfiguration.facets."""
    return conf.facets()


def facet_width(conf: PointConfiguration, j, f) -> int:
    return conf.facet_width(j, f)


def normalized_volume(conf: PointConfiguration, simplex) -> int:
    return conf.normalized_volume(simplex)


def is_unimodular_simplex(conf: PointConfiguration, simplex) -> bool:
    return conf.is_unimodular_simplex(simplex)


def closure(conf: PointConfiguration, j) -> tuple:
    return conf.closure(j)
