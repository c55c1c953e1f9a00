"""Toric ideals of homogeneous point configurations.

The ideal of a configuration lives in a polynomial ring with one
variable per point, indexed in listed order.  Everything here stays on
the binomial side of the theory: exponents, binomials, term orders,
fibers of the monoid map pi, minimal generating sets found through
fiber connectivity, Groebner bases read off regular unimodular
triangulations, and a Buchberger completion specialized to binomials
(S-polynomials and remainders of binomials are binomials again, so no
general polynomial arithmetic is needed).

All computations are exact.  Brute-force enumerations carry explicit
work guards; the LATTICEFLOW_GUARD environment variable raises them.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from math import comb
from typing import Iterable, List, Mapping, Optional, Sequence, Tuple

from .exactmath import guard_limit, solve_rational
from .pconf import PointConfiguration
from .triang import (
    NotATriangulation,
    RegularityCertificate,
    Subdivision,
    is_unimodular_triangulation,
    minimal_nonfaces,
)


class DegreeTooLarge(ValueError):
    """Raised when a fiber enumeration would exceed the work guard."""


class NotHomogeneous(ValueError):
    """Raised when an operation needs a homogeneity certificate and none exists."""


class BoundExceeded(RuntimeError):
    """Raised when fibers stay disconnected at the degree cap.

    Carries the smallest offending fiber: ``degree``, its common image
    ``value`` under pi, and the number of elements ``size``.
    """

    def __init__(self, degree: int, value: tuple, size: int):
        self.degree = degree
        self.value = value
        self.size = size
        super().__init__(
            f"fiber over {value} at degree {degree} ({size} elements) is "
            f"still disconnected when the degree cap is reached"
        )


class NotUnimodular(ValueError):
    """Raised when a triangulation-based routine gets a non-unimodular input."""


class NotCertified(ValueError):
    """Raised when a regularity certificate fails to verify."""


class NonIntegralRepresentation(RuntimeError):
    """Invariant breach: a cone representation came out non-integral.

    With a unimodular triangulation the coefficients locating a point
    sum inside a cell are integers; a fractional hit means the alleged
    triangulation was not unimodular after all.
    """


class DegreeGuardExceeded(RuntimeError):
    """Raised when Buchberger completion needs S-pairs beyond the degree cap."""


class HomogeneityBroken(ValueError):
    """Raised when a transform destroys the homogeneity of a configuration."""


class NotAFace(ValueError):
    """Raised when an index set claimed to be a face is not one."""


# ---------------------------------------------------------------------------
# exponents and binomials


def _monomial_str(items: Sequence[Tuple[int, int]], shift: int = 1) -> str:
    if not items:
        return "1"
    parts = []
    for i, c in items:
        parts.append(f"x{i + shift}" if c == 1 else f"x{i + shift}^{c}")
    return "*".join(parts)


@dataclass(frozen=True)
class Exponent:
    """A monomial exponent: nonnegative counts over configuration indices.

    Stored sparsely as sorted (index, count) pairs with positive counts.
    """

    items: tuple

    def __init__(self, items: object = ()):
        if isinstance(items, Exponent):
            pairs: Iterable = items.items
        elif isinstance(items, Mapping):
            pairs = items.items()
        else:
            pairs = items
        agg: dict = {}
        for i, c in pairs:
            i = int(i)
            c = int(c)
            if i < 0:
                raise ValueError("exponent indices must be nonnegative")
            if c < 0:
                raise ValueError("exponent counts must be nonnegative")
            if c:
                agg[i] = agg.get(i, 0) + c
        object.__setattr__(self, "items", tuple(sorted(agg.items())))

    @staticmethod
    def from_indices(indices: Iterable[int]) -> "Exponent":
        """Exponent of a multiset of indices, e.g. (3, 3, 7) -> x4^2*x8."""
        agg: dict = {}
        for i in indices:
            agg[int(i)] = agg.get(int(i), 0) + 1
        return Exponent(agg)

    @property
    def degree(self) -> int:
        return sum(c for _, c in self.items)

    @property
    def support(self) -> tuple:
        return tuple(i for i, _ in self.items)

    def get(self, i: int) -> int:
        for j, c in self.items:
            if j == i:
                return c
        return 0

    def as_dict(self) -> dict:
        return dict(self.items)

    def divides(self, other: "Exponent") -> bool:
        big = other.as_dict()
        return all(big.get(i, 0) >= c for i, c in self.items)

    def __add__(self, other: "Exponent") -> "Exponent":
        agg = self.as_dict()
        for i, c in other.items:
            agg[i] = agg.get(i, 0) + c
        return Exponent(agg)

    def __sub__(self, other: "Exponent") -> "Exponent":
        agg = self.as_dict()
        for i, c in other.items:
            agg[i] = agg.get(i, 0) - c
            if agg[i] < 0:
                raise ValueError("exponent subtraction went negative")
        return Exponent(agg)

    def __str__(self) -> str:
        return _monomial_str(self.items)

    def to_json(self) -> dict:
        return {str(i): c for i, c in self.items}

    @staticmethod
    def from_json(data: Mapping) -> "Exponent":
        return Exponent({int(k): int(v) for k, v in data.items()})


@dataclass(frozen=True)
class Binomial:
    """A difference of two monic monomials, x^lead - x^trail.

    The constructor cancels the common factor of the two sides, so the
    stored supports are disjoint.  When a term order is supplied the
    sides are swapped if needed so that the lead is the larger monomial.
    """

    lead: Exponent
    trail: Exponent

    def __init__(self, lead: Exponent, trail: Exponent, order: "TermOrder" = None):
        lead = Exponent(lead)
        trail = Exponent(trail)
        lmap = lead.as_dict()
        tmap = trail.as_dict()
        for i in set(lmap) & set(tmap):
            drop = min(lmap[i], tmap[i])
            lmap[i] -= drop
            tmap[i] -= drop
        lead = Exponent(lmap)
        trail = Exponent(tmap)
        if lead == trail:
            raise ValueError("binomial collapses to zero")
        if order is not None and order.compare(lead, trail) < 0:
            lead, trail = trail, lead
        object.__setattr__(self, "lead", lead)
        object.__setattr__(self, "trail", trail)

    @property
    def degree(self) -> int:
        return max(self.lead.degree, self.trail.degree)

    def pair(self) -> frozenset:
        """The two sides as an orientation-free set, for comparisons."""
        return frozenset((self.lead.items, self.trail.items))

    def display(self) -> str:
        """Human form with 1-based variables, e.g. 'x3*x7 - x4*x6'."""
        return f"{_monomial_str(self.lead.items)} - {_monomial_str(self.trail.items)}"

    __str__ = display

    def to_json(self) -> dict:
        return {"lead": self.lead.to_json(), "trail": self.trail.to_json()}

    @staticmethod
    def from_json(data: Mapping) -> "Binomial":
        return Binomial(
            Exponent.from_json(data["lead"]), Exponent.from_json(data["trail"])
        )


@dataclass(frozen=True)
class TermOrder:
    """A term order: graded reverse lexicographic, or weights on top of it.

    ``perm`` ranks the variables, largest first; the identity ranking
    gives the usual x1 > x2 > ... .  A weight order compares the weight
    sums first and falls back to grevlex on ties.  Weights may be any
    rationals; on the graded slices of a homogeneous ideal the induced
    comparison is a term order regardless of sign.
    """

    kind: str
    perm: tuple
    w: Optional[tuple]

    def __init__(self, kind: str, perm: Sequence[int], w=None):
        kind = str(kind)
        if kind not in ("grevlex", "weight"):
            raise ValueError("order kind must be 'grevlex' or 'weight'")
        perm = tuple(int(i) for i in perm)
        if sorted(perm) != list(range(len(perm))):
            raise ValueError("perm must be a permutation of 0..n-1")
        if kind == "weight":
            if w is None:
                raise ValueError("weight order needs weights")
            w = tuple(Fraction(x) for x in w)
            if len(w) != len(perm):
                raise ValueError("weights and permutation disagree on length")
        else:
            if w is not None:
                raise ValueError("grevlex takes no weights")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "_rank", {v: r for r, v in enumerate(perm)})

    @staticmethod
    def grevlex(n_or_perm) -> "TermOrder":
        if isinstance(n_or_perm, int):
            return TermOrder("grevlex", range(n_or_perm))
        return TermOrder("grevlex", n_or_perm)

    @staticmethod
    def weight(w, perm=None) -> "TermOrder":
        if perm is None:
            perm = range(len(tuple(w)))
        return TermOrder("weight", perm, w)

    def _compare_counts(self, u: Mapping, v: Mapping) -> int:
        rank = self._rank
        if self.kind == "weight":
            wu = sum(self.w[i] * c for i, c in u.items())
            wv = sum(self.w[i] * c for i, c in v.items())
            if wu != wv:
                return 1 if wu > wv else -1
        du = sum(u.values())
        dv = sum(v.values())
        if du != dv:
            return 1 if du > dv else -1
        diff = dict(u)
        for i, c in v.items():
            diff[i] = diff.get(i, 0) - c
        changed = [i for i, c in diff.items() if c]
        if not changed:
            return 0
        # reverse lexicographic: the least-ranked differing variable
        # decides, and the side with fewer of it wins
        pivot = max(changed, key=lambda i: rank[i])
        return 1 if diff[pivot] < 0 else -1

    def compare(self, a: Exponent, b: Exponent) -> int:
        """-1, 0 or 1 as a is smaller, equal or larger than b."""
        return self._compare_counts(dict(a.items), dict(b.items))

    def key(self):
        """A sort key for Exponent sequences, ascending in the order."""
        return cmp_to_key(self.compare)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "perm": list(self.perm)}
        if self.kind == "weight":
            out["w"] = [str(x) for x in self.w]
        return out

    @staticmethod
    def from_json(data: Mapping) -> "TermOrder":
        if data["kind"] == "weight":
            return TermOrder(
                "weight", data["perm"], [Fraction(x) for x in data["w"]]
            )
        return TermOrder("grevlex", data["perm"])


def _binomial_sort_key(order: TermOrder):
    okey = order.key()
    return lambda b: (b.degree, okey(b.lead), okey(b.trail))


# ---------------------------------------------------------------------------
# the monoid map and its fibers

# Degree-d sums of points are hashed as single big integers: every
# ambient coordinate occupies a 64-bit field, shifted so that fields of
# a d-fold sum stay positive.  Distinct sums get distinct integers as
# long as the coordinates fit the fields, which the pack routine checks.

_FIELD = 64
_OFFSET = 1 << 48
_COORD_CAP = 1 << 40


def _pack(vec: Sequence[int]) -> int:
    out = 0
    for x in reversed(vec):
        if abs(x) >= _COORD_CAP:
            raise ValueError("coordinate too large for packed enumeration")
        out = (out << _FIELD) + (x + _OFFSET)
    return out


def _pack_image(vec: Sequence[int], d: int) -> int:
    out = 0
    for x in reversed(vec):
        out = (out << _FIELD) + (x + d * _OFFSET)
    return out


def _sum_multisets(packed: Sequence[int], d: int) -> dict:
    """All degree-d multisets over range(len(packed)), grouped by packed sum."""
    n = len(packed)
    out: dict = {}
    if d == 0:
        out[0] = [()]
        return out

    def grow(start: int, depth: int, acc: int, prefix: tuple):
        if depth == d:
            out.setdefault(acc, []).append(prefix)
            return
        for i in range(start, n):
            grow(i, depth + 1, acc + packed[i], prefix + (i,))

    grow(0, 0, 0, ())
    return out


def _sum_points(points: Sequence[Sequence[int]], indices: Iterable[int]) -> tuple:
    n = len(points[0]) if points else 0
    out = [0] * n
    for i in indices:
        p = points[i]
        for t in range(n):
            out[t] += p[t]
    return tuple(out)


def pi(a: PointConfiguration, u: Exponent) -> tuple:
    """The image of an exponent: the weighted sum of the configuration points."""
    out = [0] * a.ambient_dim
    for i, c in Exponent(u).items:
        p = a.points[i]
        for t in range(a.ambient_dim):
            out[t] += c * p[t]
    return tuple(out)


def is_in_ideal(a: PointConfiguration, b: Binomial) -> bool:
    """Whether the binomial lies in the toric ideal of the configuration."""
    return pi(a, b.lead) == pi(a, b.trail)


def fiber(
    a: PointConfiguration, b: Sequence[int], d: int, guard: Optional[int] = None
) -> List[Exponent]:
    """All degree-d exponents with image b, by meet in the middle.

    Degree-(d//2) partial sums are hashed; the remaining halves probe
    the table.  A multiset splits canonically into its smaller and
    larger half, so each solution is produced exactly once.  The work
    estimate is checked against the guard before anything is enumerated;
    ``guard`` overrides the default limit for a single call.
    """
    b = tuple(int(x) for x in b)
    if len(b) != a.ambient_dim:
        raise ValueError("image vector has the wrong length")
    if d < 0:
        raise ValueError("degree must be nonnegative")
    if d == 0:
        return [Exponent()] if not any(b) else []
    pts = a.points
    nonneg = all(x >= 0 for p in pts for x in p)
    if nonneg:
        cand = [
            i
            for i, p in enumerate(pts)
            if all(p[t] <= b[t] for t in range(len(b)))
        ]
    else:
        cand = list(range(len(pts)))
    if not cand:
        return []
    k = d // 2
    r = d - k
    work = comb(len(cand) + k - 1, k) + comb(len(cand) + r - 1, r)
    limit = guard_limit(2_000_000) if guard is None else int(guard)
    if work > limit:
        raise DegreeTooLarge(
            f"fiber at degree {d} needs about {work} partial sums, guard is "
            f"{limit}; raise LATTICEFLOW_GUARD to force it"
        )
    packed = [_pack(pts[i]) for i in cand]
    left = _sum_multisets(packed, k)
    target = _pack_image(b, d)
    found = []
    for rsum, rtuples in _sum_multisets(packed, r).items():
        hits = left.get(target - rsum)
        if not hits:
            continue
        for rt in rtuples:
            for lt in hits:
                if lt and lt[-1] > rt[0]:
                    continue
                combo = tuple(cand[i] for i in lt + rt)
                if _sum_points(pts, combo) == b:
                    found.append(Exponent.from_indices(combo))
    found.sort(key=lambda e: e.items)
    return found


# ---------------------------------------------------------------------------
# minimal generating sets through fiber connectivity


def _fits(small: Mapping, big: Mapping) -> bool:
    return all(big.get(i, 0) >= c for i, c in small.items())


def _apply_move(counts: dict, take: Mapping, put: Mapping) -> tuple:
    out = dict(counts)
    for i, c in take.items():
        out[i] -= c
    for i, c in put.items():
        out[i] = out.get(i, 0) + c
    flat: list = []
    for i in sorted(out):
        flat.extend([i] * out[i])
    return tuple(flat)


def minimal_generating_set(
    a: PointConfiguration, dmax: int
) -> Tuple[int, List[Binomial]]:
    """A minimal generating set of the toric ideal, degree by degree.

    For each degree d the degree-d multisets of points are grouped by
    their image.  A group with several elements is a fiber; edges given
    by already-found lower-degree generators (substituting one side for
    the other inside an exponent) partition it into components, and one
    new generator per extra component joins everything to the fiber's
    order-least element.  The scan must reach a final degree whose
    fibers are all connected without additions; reaching dmax with a
    disconnected fiber raises BoundExceeded, so callers pass a cap at
    least one above the expected generating degree.

    Returns the largest degree that contributed generators (0 for the
    zero ideal) together with the generators, sorted by degree and then
    by the default grevlex order on their sides.
    """
    if dmax < 2:
        raise ValueError("dmax must be at least 2")
    if a.homogeneity_certificate() is None:
        raise NotHomogeneous("configuration has no homogeneity certificate")
    pts = a.points
    order = TermOrder.grevlex(len(pts))
    packed = [_pack(p) for p in pts]
    gens: List[Binomial] = []
    moves: List[Tuple[dict, dict]] = []
    top = 0
    for d in range(2, dmax + 1):
        groups = _sum_multisets(packed, d)
        fresh: List[Binomial] = []
        worst = None
        for image, elems in groups.items():
            if len(elems) < 2:
                continue
            index_of = {t: j for j, t in enumerate(elems)}
            parent = list(range(len(elems)))

            def find(x: int) -> int:
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for j, t in enumerate(elems):
                counts: dict = {}
                for i in t:
                    counts[i] = counts.get(i, 0) + 1
                for take, put in moves:
                    for lhs, rhs in ((take, put), (put, take)):
                        if _fits(lhs, counts):
                            other = index_of[_apply_move(counts, lhs, rhs)]
                            ra, rb = find(j), find(other)
                            if ra != rb:
                                parent[ra] = rb
            roots: dict = {}
            for j in range(len(elems)):
                roots.setdefault(find(j), []).append(j)
            if len(roots) == 1:
                continue
            if d == dmax:
                value = _sum_points(pts, elems[0])
                mark = (len(elems), value)
                if worst is None or mark < worst:
                    worst = mark
                continue
            exps = [Exponent.from_indices(t) for t in elems]
            hub = min(exps, key=order.key())
            hub_root = find(exps.index(hub))
            for root, members in sorted(roots.items()):
                if root == hub_root:
                    continue
                rep = min((exps[j] for j in members), key=order.key())
                fresh.append(Binomial(rep, hub, order=order))
        if d == dmax and worst is not None:
            raise BoundExceeded(d, worst[1], worst[0])
        if fresh:
            top = d
            gens.extend(fresh)
            moves.extend((dict(g.lead.items), dict(g.trail.items)) for g in fresh)
    gens.sort(key=_binomial_sort_key(order))
    return top, gens


# ---------------------------------------------------------------------------
# Groebner bases


def gb_from_triangulation(
    a: PointConfiguration, d: Subdivision, cert: RegularityCertificate
) -> List[Binomial]:
    """The reduced Groebner basis attached to a regular unimodular triangulation.

    Each minimal nonface F yields one basis element: the sum b of its
    points lands in some cell of the triangulation, the coefficients of
    b over that cell's points are the unique nonnegative solution of an
    exact linear system and are integral by unimodularity, and the
    element is x^F minus the monomial of those coefficients.  The
    certificate's weights (grevlex-refined) orient every element with
    the squarefree side in front.
    """
    if d.conf != a:
        raise ValueError("subdivision belongs to a different configuration")
    try:
        if not is_unimodular_triangulation(d):
            raise NotUnimodular("a maximal cell has normalized volume above 1")
    except NotATriangulation as exc:
        raise NotUnimodular(str(exc)) from exc
    if a.homogeneity_certificate() is None:
        raise NotHomogeneous("configuration has no homogeneity certificate")
    if not cert.verify(a, d):
        raise NotCertified("weights do not certify this subdivision")
    order = TermOrder.weight(cert.weights)
    ambient = a.ambient_dim
    out = []
    for nonface in minimal_nonfaces(d):
        image = _sum_points(a.points, nonface)
        rep: Optional[dict] = None
        for cell in d.maximal_cells:
            rows = [[a.points[i][t] for i in cell] for t in range(ambient)]
            sol = solve_rational(rows, list(image))
            if sol is None or any(x < 0 for x in sol):
                continue
            for x in sol:
                if x.denominator != 1:
                    raise NonIntegralRepresentation(
                        f"nonface {nonface} has a fractional representation; "
                        f"the triangulation cannot be unimodular"
                    )
            rep = {cell[j]: int(x) for j, x in enumerate(sol) if x}
            break
        if rep is None:
            raise RuntimeError("no cell holds the nonface sum; cells do not cover")
        if set(nonface) & set(rep):
            raise RuntimeError("nonface meets its own representation support")
        lead = Exponent.from_indices(nonface)
        trail = Exponent(rep)
        if order.compare(lead, trail) <= 0:
            raise RuntimeError("certificate weights fail to orient a nonface")
        out.append(Binomial(lead, trail))
    out.sort(key=_binomial_sort_key(order))
    return out


def _reduce_binomial(
    m1: dict, m2: dict, basis: Sequence[Tuple[dict, dict]], order: TermOrder
) -> Optional[Tuple[dict, dict]]:
    """Fully reduce x^m1 - x^m2 by the basis; None when it hits zero."""
    changed = True
    while changed:
        changed = False
        for side in (0, 1):
            m = m1 if side == 0 else m2
            for take, put in basis:
                if _fits(take, m):
                    new = dict(m)
                    for i, c in take.items():
                        new[i] -= c
                        if not new[i]:
                            del new[i]
                    for i, c in put.items():
                        new[i] = new.get(i, 0) + c
                    if side == 0:
                        m1 = new
                    else:
                        m2 = new
                    if m1 == m2:
                        return None
                    if order._compare_counts(m1, m2) < 0:
                        m1, m2 = m2, m1
                    changed = True
                    break
            if changed:
                break
    return m1, m2


def buchberger_reduce(
    gens: Sequence[Binomial],
    order: TermOrder,
    conf: Optional[PointConfiguration] = None,
    degree_guard: Optional[int] = None,
) -> List[Binomial]:
    """Complete binomial generators to the reduced Groebner basis.

    Classical Buchberger with the coprimality criterion, processed in
    ascending S-pair degree, followed by minimalization and full
    interreduction.  Leading coefficients are +1 throughout.  When a
    configuration is supplied every input binomial is checked against
    its ideal first.  S-pairs whose degree passes the guard abort with
    DegreeGuardExceeded; the default guard is generous for desk-scale
    inputs (four times the input degree, at least 16).
    """
    gens = list(gens)
    if conf is not None:
        for g in gens:
            if not is_in_ideal(conf, g):
                raise ValueError(f"generator outside the toric ideal: {g}")
    if degree_guard is None:
        degree_guard = max([16] + [4 * g.degree for g in gens])
    basis: List[Tuple[dict, dict]] = []
    seen = set()
    for g in gens:
        u = dict(g.lead.items)
        v = dict(g.trail.items)
        if order._compare_counts(u, v) < 0:
            u, v = v, u
        key = (tuple(sorted(u.items())), tuple(sorted(v.items())))
        if key not in seen:
            seen.add(key)
            basis.append((u, v))

    def lcm_degree(u: Mapping, v: Mapping) -> int:
        keys = set(u) | set(v)
        return sum(max(u.get(i, 0), v.get(i, 0)) for i in keys)

    heap: list = []
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            heapq.heappush(heap, (lcm_degree(basis[i][0], basis[j][0]), i, j))
    while heap:
        deg, i, j = heapq.heappop(heap)
        if deg > degree_guard:
            raise DegreeGuardExceeded(
                f"S-pair of degree {deg} exceeds the guard {degree_guard}"
            )
        u1, v1 = basis[i]
        u2, v2 = basis[j]
        if not set(u1) & set(u2):
            continue  # coprime leads reduce to zero
        gamma = {k: max(u1.get(k, 0), u2.get(k, 0)) for k in set(u1) | set(u2)}
        s1 = dict(gamma)
        for k, c in u1.items():
            s1[k] -= c
            if not s1[k]:
                del s1[k]
        for k, c in v1.items():
            s1[k] = s1.get(k, 0) + c
        s2 = dict(gamma)
        for k, c in u2.items():
            s2[k] -= c
            if not s2[k]:
                del s2[k]
        for k, c in v2.items():
            s2[k] = s2.get(k, 0) + c
        if s1 == s2:
            continue
        if order._compare_counts(s1, s2) < 0:
            s1, s2 = s2, s1
        reduced = _reduce_binomial(s1, s2, basis, order)
        if reduced is None:
            continue
        basis.append(reduced)
        new = len(basis) - 1
        for t in range(new):
            heapq.heappush(
                heap, (lcm_degree(basis[t][0], basis[new][0]), t, new)
            )

    # minimalize: drop elements whose lead another lead divides
    okey = order.key()
    ordered = sorted(
        basis, key=lambda uv: (okey(Exponent(uv[0])), okey(Exponent(uv[1])))
    )
    kept: List[Tuple[dict, dict]] = []
    for u, v in ordered:
        if any(_fits(ku, u) for ku, _ in kept):
            continue
        kept.append((u, v))
    # interreduce the trails against the surviving leads
    final = []
    for idx, (u, v) in enumerate(kept):
        others = kept[:idx] + kept[idx + 1 :]
        trail = dict(v)
        changed = True
        while changed:
            changed = False
            for take, put in others:
                if _fits(take, trail):
                    for i, c in take.items():
                        trail[i] -= c
                        if not trail[i]:
                            del trail[i]
                    for i, c in put.items():
                        trail[i] = trail.get(i, 0) + c
                    changed = True
                    break
        if trail == u:
            raise RuntimeError("minimalized element reduced to zero")
        final.append(Binomial(Exponent(u), Exponent(trail), order=order))
    final.sort(key=_binomial_sort_key(order))
    return final


# ---------------------------------------------------------------------------
# invariance and face checks


def ideal_invariance_check(
    a: PointConfiguration,
    transform: str,
    v: Optional[Sequence[int]] = None,
    dmax: int = 4,
) -> bool:
    """Whether a transform leaves the minimal generating set unchanged.

    Supported transforms are 'translate' (by an integer vector v) and
    'negate'.  Translation must preserve homogeneity, which is exactly
    the condition that v avoids the affine hull of the negated
    configuration; the check is performed by recomputing the
    certificate.  The generating sets are compared exponent by exponent
    with indices identified positionally.
    """
    if a.homogeneity_certificate() is None:
        raise NotHomogeneous("configuration has no homogeneity certificate")
    if transform == "translate":
        if v is None:
            raise ValueError("translate needs a vector")
        v = tuple(int(x) for x in v)
        if len(v) != a.ambient_dim:
            raise ValueError("translation vector has the wrong length")
        pts = [tuple(x + y for x, y in zip(p, v)) for p in a.points]
    elif transform == "negate":
        pts = [tuple(-x for x in p) for p in a.points]
    else:
        raise ValueError("transform must be 'translate' or 'negate'")
    moved = PointConfiguration(pts)
    if moved.homogeneity_certificate() is None:
        raise HomogeneityBroken("transform destroyed homogeneity")
    return minimal_generating_set(a, dmax) == minimal_generating_set(moved, dmax)


def face_degree_check(a: PointConfiguration, j, dmax: int = 4) -> bool:
    """Whether a face's ideal is bounded by and contained in the big ideal.

    The face configuration is re-indexed positionally; its minimal
    generating degree must not exceed the full configuration's, and all
    its generators, mapped back through the face's member indices, must
    lie in the full ideal.
    """
    members = tuple(getattr(j, "members", j))
    if a.face(members) is None:
        raise NotAFace(f"{members} is not a face of the configuration")
    sub = PointConfiguration([a.points[i] for i in members])
    deg_all, _ = minimal_generating_set(a, dmax)
    deg_face, gens_face = minimal_generating_set(sub, dmax)
    if gens_face and deg_face > deg_all:
        return False
    for g in gens_face:
        mapped = Binomial(
            Exponent({members[i]: c for i, c in g.lead.items}),
            Exponent({members[i]: c for i, c in g.trail.items}),
        )
        if not is_in_ideal(a, mapped):
            return False
    return True
