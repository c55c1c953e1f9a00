"""Exact integer and rational linear algebra.

Everything in this package computes over arbitrary-precision integers and
`fractions.Fraction`; floating point is never used.  This module provides
the shared kernels: Hermite normal form, integer kernels and saturations,
lattice indices, exact linear solving, and a rational simplex solver that
returns verifiable feasibility or infeasibility certificates.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

IntMatrix = tuple[tuple[int, ...], ...]
IntVector = tuple[int, ...]


class DependentGenerators(ValueError):
    """Raised when lattice generators are linearly dependent."""


def guard_limit(default: int = 6) -> int:
    """Size guard for brute-force checks, overridable via LATTICEFLOW_GUARD."""
    raw = os.environ.get("LATTICEFLOW_GUARD")
    if raw is None:
        return default
    return int(raw)


def int_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    """Validate and freeze a rectangular integer matrix."""
    frozen = tuple(tuple(entry for entry in row) for row in rows)
    if frozen:
        width = len(frozen[0])
        for row in frozen:
            if len(row) != width:
                raise ValueError("matrix rows must have equal length")
            for entry in row:
                if not isinstance(entry, int):
                    raise ValueError("matrix entries must be integers")
    return frozen


def identity_matrix(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(m: Sequence[Sequence]) -> tuple[tuple, ...]:
    if not m:
        return ()
    return tuple(tuple(row[j] for row in m) for j in range(len(m[0])))


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if a and b and len(a[0]) != len(b):
        raise ValueError("dimension mismatch")
    bt = transpose(b)
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_vec(m: Sequence[Sequence[int]], v: Sequence[int]) -> IntVector:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def vec_add(a: Sequence[int], b: Sequence[int]) -> IntVector:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Sequence[int], b: Sequence[int]) -> IntVector:
    return tuple(x - y for x, y in zip(a, b))


def vec_gcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive_vector(v: Sequence[int]) -> IntVector:
    """Divide a nonzero integer vector by its content."""
    g = vec_gcd(v)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return tuple(x // g for x in v)


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (fraction-free elimination)."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant requires a square matrix")
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def hnf(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns (h, u) with u unimodular and h = u * m.  Pivots are positive,
    entries above each pivot are reduced into [0, pivot), zero rows sink
    to the bottom.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [list(row) for row in m]
    u = [list(row) for row in identity_matrix(rows)]
    pivot_row = 0
    pivot_cols: list[tuple[int, int]] = []
    for col in range(cols):
        if pivot_row >= rows:
            break
        while True:
            nonzero = [i for i in range(pivot_row, rows) if a[i][col] != 0]
            if not nonzero:
                break
            best = min(nonzero, key=lambda i: abs(a[i][col]))
            if best != pivot_row:
                a[pivot_row], a[best] = a[best], a[pivot_row]
                u[pivot_row], u[best] = u[best], u[pivot_row]
            piv = a[pivot_row][col]
            finished = True
            for i in range(pivot_row + 1, rows):
                if a[i][col] != 0:
                    q = a[i][col] // piv
                    if q:
                        for j in range(cols):
                            a[i][j] -= q * a[pivot_row][j]
                        for j in range(rows):
                            u[i][j] -= q * u[pivot_row][j]
                    if a[i][col] != 0:
                        finished = False
            if finished:
                break
        if a[pivot_row][col] != 0:
            if a[pivot_row][col] < 0:
                a[pivot_row] = [-x for x in a[pivot_row]]
                u[pivot_row] = [-x for x in u[pivot_row]]
            pivot_cols.append((pivot_row, col))
            pivot_row += 1
    for prow, pcol in pivot_cols:
        piv = a[prow][pcol]
        for i in range(prow):
            q = a[i][pcol] // piv
            if q:
                for j in range(cols):
                    a[i][j] -= q * a[prow][j]
                for j in range(rows):
                    u[i][j] -= q * u[prow][j]
    return tuple(tuple(row) for row in a), tuple(tuple(row) for row in u)


def hnf_rank(m: Sequence[Sequence[int]]) -> int:
    h, _ = hnf(m)
    return sum(1 for row in h if any(row))


def kernel_basis(m: Sequence[Sequence[int]]) -> list[IntVector]:
    """Basis of the integer kernel {x in Z^cols : m x = 0}.

    Rows of the unimodular transform opposite the zero rows of hnf(m^T)
    form a basis of the kernel lattice; integer kernels are saturated, so
    no further correction is needed.  m must have at least one row.
    """
    if not m:
        raise ValueError("kernel_basis needs a matrix with at least one row")
    h, u = hnf(transpose(m))
    return [tuple(u[i]) for i, row in enumerate(h) if not any(row)]


def saturation_basis(vectors: Sequence[Sequence[int]]) -> list[IntVector]:
    """Lattice basis of span_Q(vectors) intersected with Z^n.

    The saturation is the kernel of the kernel: first take all integer
    relations orthogonal to the span, then everything orthogonal to those.
    """
    vecs = [tuple(v) for v in vectors]
    if not vecs:
        return []
    n = len(vecs[0])
    orth = kernel_basis(vecs)
    if not orth:
        return [tuple(row) for row in identity_matrix(n)]
    return kernel_basis(orth)


def solve_rational(a: Sequence[Sequence], b: Sequence) -> Optional[list[Fraction]]:
    """One exact solution of a x = b, or None when inconsistent.

    Underdetermined systems get free variables pinned to zero.
    """
    rows = len(a)
    if len(b) != rows:
        raise ValueError("right-hand side length mismatch")
    if rows == 0:
        return []
    cols = len(a[0])
    m = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(a)]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c]
        m[r] = [x / inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if m[i][cols] != 0:
            return None
    solution = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        solution[c] = m[i][cols]
    return solution


def rational_rank(a: Sequence[Sequence]) -> int:
    """Rank of a matrix with integer or Fraction entries."""
    rows = [list(map(Fraction, row)) for row in a]
    if not rows:
        return 0
    cols = len(rows[0])
    rank = 0
    for c in range(cols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        piv = rows[rank][c]
        rows[rank] = [x / piv for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def solve_integer_coords(
    basis: Sequence[Sequence[int]], v: Sequence[int]
) -> Optional[IntVector]:
    """Express v as an integer combination of basis vectors, if possible."""
    if not basis:
        return () if not any(v) else None
    columns = transpose(basis)
    sol = solve_rational(columns, list(v))
    if sol is None:
        return None
    coords = []
    for x in sol:
        if x.denominator != 1:
            return None
        coords.append(int(x))
    # Free variables were pinned to zero, which is only sound for an
    # independent basis; confirm by substitution.
    check = [sum(c * bv[j] for c, bv in zip(coords, basis)) for j in range(len(v))]
    if tuple(check) != tuple(v):
        return None
    return tuple(coords)


def lattice_index(gens: Sequence[Sequence[int]]) -> int:
    """Index of the lattice spanned by gens inside its saturation.

    The result is 1 exactly when the generators extend to a lattice basis
    of the saturated span.  Linearly dependent input raises
    DependentGenerators.
    """
    vecs = [tuple(v) for v in gens]
    if not vecs:
        return 1
    if hnf_rank(vecs) != len(vecs):
        raise DependentGenerators("generators are linearly dependent")
    sat = saturation_basis(vecs)
    coord_rows = []
    for v in vecs:
        coords = solve_integer_coords(sat, v)
        if coords is None:
            raise DependentGenerators("generator escapes its saturation span")
        coord_rows.append(list(coords))
    return abs(det(coord_rows))


# ---------------------------------------------------------------------------
# Exact linear programming
# ---------------------------------------------------------------------------

EQ = "=="
GE = ">="
GT = ">"


@dataclass(frozen=True)
class LinearConstraint:
    """coeffs . x  rel  rhs with rel one of ==, >=, >."""

    coeffs: tuple[Fraction, ...]
    rel: str
    rhs: Fraction

    @staticmethod
    def make(coeffs: Sequence, rel: str, rhs) -> "LinearConstraint":
        if rel not in (EQ, GE, GT):
            raise ValueError(f"unknown relation {rel!r}")
        return LinearConstraint(tuple(Fraction(c) for c in coeffs), rel, Fraction(rhs))


@dataclass
class LpProblem:
    """Constraints over free rational variables, optional linear objective."""

    num_vars: int
    constraints: list[LinearConstraint] = field(default_factory=list)
    objective: Optional[tuple[Fraction, ...]] = None
    maximize: bool = True

    def add(self, coeffs: Sequence, rel: str, rhs) -> None:
        if len(coeffs) != self.num_vars:
            raise ValueError("constraint length mismatch")
        self.constraints.append(LinearConstraint.make(coeffs, rel, rhs))


@dataclass
class LpCertificate:
    """Outcome of solve_lp.

    A feasible point satisfies every constraint exactly, strict rows
    strictly.  An infeasibility witness has one multiplier per constraint,
    nonnegative on inequalities; the combination cancels every variable
    while the combined right-hand sides contradict zero.
    """

    feasible: bool
    point: Optional[tuple[Fraction, ...]] = None
    witness: Optional[tuple[Fraction, ...]] = None
    optimal_value: Optional[Fraction] = None
    unbounded: bool = False


def verify_witness(problem: LpProblem, witness: Sequence[Fraction]) -> bool:
    """Check infeasibility multipliers by exact substitution."""
    n = problem.num_vars
    if len(witness) != len(problem.constraints):
        return False
    combo = [Fraction(0)] * n
    rhs = Fraction(0)
    strict_weight = Fraction(0)
    for mult, c in zip(witness, problem.constraints):
        if c.rel in (GE, GT) and mult < 0:
            return False
        if mult == 0:
            continue
        for j in range(n):
            combo[j] += mult * c.coeffs[j]
        rhs += mult * c.rhs
        if c.rel == GT:
            strict_weight += mult
    if any(x != 0 for x in combo):
        return False
    if rhs > 0:
        return True
    return strict_weight > 0 and rhs >= 0


def check_point(problem: LpProblem, point: Sequence[Fraction]) -> bool:
    """Exact satisfaction check, honoring strictness."""
    for c in problem.constraints:
        lhs = sum(a * x for a, x in zip(c.coeffs, point))
        if c.rel == EQ and lhs != c.rhs:
            return False
        if c.rel == GE and lhs < c.rhs:
            return False
        if c.rel == GT and lhs <= c.rhs:
            return False
    return True


def _pivot(
    tableau: list[list[Fraction]], basis: list[int], leave: int, enter: int
) -> None:
    piv = tableau[leave][enter]
    tableau[leave] = [x / piv for x in tableau[leave]]
    pivot_row = tableau[leave]
    for i in range(len(tableau)):
        if i != leave and tableau[i][enter] != 0:
            f = tableau[i][enter]
            tableau[i] = [x - f * y for x, y in zip(tableau[i], pivot_row)]
    basis[leave - 1] = enter


def _simplex(
    tableau: list[list[Fraction]],
    basis: list[int],
    allowed_cols: int,
    rhs_col: int,
) -> bool:
    """Minimize row 0 with Bland's rule; False means unbounded below.

    Only columns below allowed_cols may enter the basis, which is how the
    later phases keep artificial variables pinned at zero.
    """
    while True:
        enter = next((j for j in range(allowed_cols) if tableau[0][j] < 0), -1)
        if enter < 0:
            return True
        leave = -1
        best: Optional[Fraction] = None
        for i in range(1, len(tableau)):
            coef = tableau[i][enter]
            if coef > 0:
                ratio = tableau[i][rhs_col] / coef
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and basis[i - 1] < basis[leave - 1])
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            return False
        _pivot(tableau, basis, leave, enter)


def _install_objective(
    tableau: list[list[Fraction]],
    basis: list[int],
    costs: dict[int, Fraction],
    total_cols: int,
) -> None:
    """Load reduced costs for a new phase into row 0."""
    tableau[0] = [Fraction(0)] * (total_cols + 1)
    for j, c in costs.items():
        tableau[0][j] = c
    for i in range(1, len(tableau)):
        col = basis[i - 1]
        f = tableau[0][col]
        if f != 0:
            tableau[0] = [a - f * b for a, b in zip(tableau[0], tableau[i])]


def solve_lp(problem: LpProblem) -> LpCertificate:
    """Exact feasibility and optimization with self-verified certificates.

    Strict inequalities share one auxiliary slack t capped by t <= 1; the
    system is strictly feasible exactly when t can be pushed positive.
    Optimization over systems with strict rows is refused because the
    supremum need not be attained.
    """
    n = problem.num_vars
    cons = problem.constraints
    if n == 0:
        point: tuple[Fraction, ...] = ()
        if check_point(problem, point):
            cert = LpCertificate(feasible=True, point=point)
            if problem.objective is not None:
                cert.optimal_value = Fraction(0)
            return cert
        witness = []
        found = False
        for c in cons:
            violated = (
                (c.rel == EQ and c.rhs != 0)
                or (c.rel == GE and c.rhs > 0)
                or (c.rel == GT and c.rhs >= 0)
            )
            if not found and violated:
                witness.append(Fraction(1) if c.rhs >= 0 else Fraction(-1))
                found = True
            else:
                witness.append(Fraction(0))
        return LpCertificate(feasible=False, witness=tuple(witness))

    has_strict = any(c.rel == GT for c in cons)
    if has_strict and problem.objective is not None:
        raise ValueError("cannot optimize over strict inequalities")

    num_ineq = sum(1 for c in cons if c.rel in (GE, GT))
    t_col = 2 * n + num_ineq
    base_cols = t_col + (2 if has_strict else 0)

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    flipped: list[bool] = []
    surplus = 0
    for c in cons:
        row = [Fraction(0)] * base_cols
        for j, coef in enumerate(c.coeffs):
            row[j] = coef
            row[n + j] = -coef
        if c.rel in (GE, GT):
            row[2 * n + surplus] = Fraction(-1)
            surplus += 1
        if c.rel == GT:
            row[t_col] = Fraction(-1)
        rows.append(row)
        rhs.append(c.rhs)
        flipped.append(False)
    if has_strict:
        row = [Fraction(0)] * base_cols
        row[t_col] = Fraction(1)
        row[t_col + 1] = Fraction(1)
        rows.append(row)
        rhs.append(Fraction(1))
        flipped.append(False)

    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]
            flipped[i] = True

    m = len(rows)
    total_cols = base_cols + m
    tableau = [[Fraction(0)] * (total_cols + 1) for _ in range(m + 1)]
    basis = []
    for i, row in enumerate(rows):
        tableau[i + 1][:base_cols] = row
        tableau[i + 1][base_cols + i] = Fraction(1)
        tableau[i + 1][total_cols] = rhs[i]
        basis.append(base_cols + i)

    def extract_witness(art_cost: Fraction) -> tuple[Fraction, ...]:
        # Dual value of row i is the artificial cost minus the reduced
        # cost sitting in that artificial's column.
        raw = [art_cost - tableau[0][base_cols + i] for i in range(m)]
        result = tuple(
            -raw[i] if flipped[i] else raw[i] for i in range(len(cons))
        )
        if not verify_witness(problem, result):
            raise RuntimeError("internal error: invalid infeasibility witness")
        return result

    # Phase 1: minimize the sum of the artificial variables.
    _install_objective(
        tableau, basis, {base_cols + i: Fraction(1) for i in range(m)}, total_cols
    )
    _simplex(tableau, basis, total_cols, total_cols)
    if -tableau[0][total_cols] > 0:
        return LpCertificate(feasible=False, witness=extract_witness(Fraction(1)))

    # Pivot lingering artificials out on any real column; rows that resist
    # are redundant and keep a zero-valued artificial harmlessly.
    for i in range(1, m + 1):
        if basis[i - 1] >= base_cols:
            enter = next((j for j in range(base_cols) if tableau[i][j] != 0), None)
            if enter is not None:
                _pivot(tableau, basis, i, enter)

    if has_strict:
        # Maximize t with artificials barred from re-entering.
        _install_objective(tableau, basis, {t_col: Fraction(-1)}, total_cols)
        _simplex(tableau, basis, base_cols, total_cols)
        t_val = next(
            (tableau[i + 1][total_cols] for i, b in enumerate(basis) if b == t_col),
            Fraction(0),
        )
        if t_val <= 0:
            return LpCertificate(feasible=False, witness=extract_witness(Fraction(0)))

    def read_point() -> tuple[Fraction, ...]:
        vals = [Fraction(0)] * (2 * n)
        for i, b in enumerate(basis):
            if b < 2 * n:
                vals[b] = tableau[i + 1][total_cols]
        return tuple(vals[j] - vals[n + j] for j in range(n))

    point = read_point()
    if not check_point(problem, point):
        raise RuntimeError("internal error: simplex returned an invalid point")

    if problem.objective is None:
        return LpCertificate(feasible=True, point=point)

    sign = Fraction(-1 if problem.maximize else 1)
    costs: dict[int, Fraction] = {}
    for j, coef in enumerate(problem.objective):
        if coef:
            costs[j] = sign * Fraction(coef)
            costs[n + j] = -sign * Fraction(coef)
    _install_objective(tableau, basis, costs, total_cols)
    bounded = _simplex(tableau, basis, base_cols, total_cols)
    point = read_point()
    if not check_point(problem, point):
        raise RuntimeError("internal error: simplex left the feasible region")
    if not bounded:
        return LpCertificate(feasible=True, point=point, unbounded=True)
    value = sum(Fraction(c) * x for c, x in zip(problem.objective, point))
    return LpCertificate(feasible=True, point=point, optimal_value=value)
