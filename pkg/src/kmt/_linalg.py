"""Exact linear algebra over the rationals and integers.

Vectors are tuples of ``Fraction``; matrices are lists of row tuples.  The
hot paths (row reduction, solving) are hand-rolled on ``Fraction``; Hermite
and Smith normal forms delegate to sympy's integer implementations.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

import sympy
from sympy.matrices.normalforms import smith_normal_decomp

Vec = tuple  # tuple[Fraction, ...]


def vec(xs) -> Vec:
    return tuple(Fraction(x) for x in xs)


def vadd(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, a: Vec) -> Vec:
    c = Fraction(c)
    return tuple(c * x for x in a)


def is_zero_vec(a: Vec) -> bool:
    return all(x == 0 for x in a)


class RowSpace:
    """Incremental reduced row echelon span with membership and coordinates."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[Vec] = []          # reduced rows
        self.pivots: list[int] = []        # pivot column of each row

    def _reduce(self, v: Vec) -> Vec:
        for row, p in zip(self.rows, self.pivots):
            if v[p] != 0:
                v = vsub(v, vscale(v[p], row))
        return v

    def reduce(self, v: Vec) -> Vec:
        return self._reduce(vec(v))

    def contains(self, v: Vec) -> bool:
        return is_zero_vec(self.reduce(v))

    def add(self, v: Vec) -> bool:
        """Insert v into the span; returns True if the rank grew."""
        v = self._reduce(vec(v))
        for j, x in enumerate(v):
            if x != 0:
                v = vscale(1 / x, v)
                # back-substitute into existing rows
                self.rows = [vsub(r, vscale(r[j], v)) if r[j] != 0 else r
                             for r in self.rows]
                k = 0
                while k < len(self.pivots) and self.pivots[k] < j:
                    k += 1
                self.rows.insert(k, v)
                self.pivots.insert(k, j)
                return True
        return False

    @property
    def rank(self) -> int:
        return len(self.rows)

    def coordinates(self, v: Vec) -> Optional[list[Fraction]]:
        """Coefficients of v over the reduced rows, or None if outside."""
        v = vec(v)
        coeffs = []
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            coeffs.append(c)
            if c != 0:
                v = vsub(v, vscale(c, row))
        if not is_zero_vec(v):
            return None
        return coeffs


class LinSolver:
    """Reusable exact solver: coordinates of targets over a fixed vector set."""

    def __init__(self, rows: Sequence[Vec]):
        self.rows = [vec(r) for r in rows]
        self.n = len(self.rows)
        self.dim = len(self.rows[0]) if self.rows else 0
        self._reduced: list = []   # (reduced vector, coefficient vector, pivot)
        for i, r in enumerate(self.rows):
            coeff = [Fraction(0)] * self.n
            coeff[i] = Fraction(1)
            r = list(r)
            for rr, cc, p in self._reduced:
                if r[p] != 0:
                    f = r[p]
                    r = [a - f * b for a, b in zip(r, rr)]
                    coeff = [a - f * b for a, b in zip(coeff, cc)]
            piv = next((j for j, x in enumerate(r) if x != 0), None)
            if piv is None:
                continue
            inv = 1 / r[piv]
            r = [a * inv for a in r]
            coeff = [a * inv for a in coeff]
            self._reduced.append((r, coeff, piv))
        self.rank = len(self._reduced)

    def solve(self, rhs: Vec):
        """x with sum x_i rows[i] = rhs (unique when rows independent)."""
        r = list(vec(rhs))
        out = [Fraction(0)] * self.n
        for rr, cc, p in self._reduced:
            if r[p] != 0:
                f = r[p]
                r = [a - f * b for a, b in zip(r, rr)]
                out = [a + f * b for a, b in zip(out, cc)]
        if any(x != 0 for x in r):
            return None
        return out


def rref(rows: Sequence[Vec]) -> tuple[list[Vec], list[int]]:
    dim = len(rows[0]) if rows else 0
    rs = RowSpace(dim)
    for r in rows:
        rs.add(r)
    return rs.rows, rs.pivots


def rank(rows: Sequence[Vec]) -> int:
    return len(rref(rows)[0])


def solve_linear(rows: Sequence[Vec], rhs: Vec):
    """Solve x @ rows-matrix layout: returns (particular, null_basis) for
    A x = b with A given by columns?  No: solves sum_i x_i * rows[i] = rhs.

    Returns (particular x, list of nullspace basis vectors) over Q, or
    (None, null_basis) if inconsistent.
    """
    n = len(rows)
    if n == 0:
        return (([] if is_zero_vec(vec(rhs)) else None), [])
    dim = len(rows[0])
    # augment: reduce rhs against rows while tracking coefficients
    aug = [vec(list(rows[i]) + [Fraction(0)] * n) for i in range(n)]
    for i in range(n):
        aug[i] = aug[i][:dim] + tuple(Fraction(1) if j == i else Fraction(0)
                                      for j in range(n))
    rs = RowSpace(dim + n)
    for r in aug:
        rs.add(r)
    # rows of rs with pivot < dim express reduced combos; pivots >= dim are null combos
    null = []
    reduced = []
    for row, p in zip(rs.rows, rs.pivots):
        if p < dim:
            reduced.append((row, p))
        else:
            null.append(tuple(row[dim:]))
    target = vec(rhs)
    coeff = [Fraction(0)] * n
    for row, p in reduced:
        c = target[p]
        if c != 0:
            target = vsub(target, vscale(c, row[:dim]))
            coeff = [x + c * y for x, y in zip(coeff, row[dim:])]
    if not is_zero_vec(target):
        return None, null
    return coeff, null


def _common_denominator(rows: Iterable[Vec]) -> int:
    den = 1
    for r in rows:
        for x in r:
            den = lcm(den, Fraction(x).denominator)
    return den


def _row_hermite(rows: list[Vec]) -> list[Vec]:
    """Row-style HNF of the Z-span of the rows: echelon, positive pivots,
    entries above each pivot reduced into [0, pivot).  Rational entries are
    handled by clearing a common denominator, which preserves the Z-span."""
    rows = [vec(r) for r in rows if not is_zero_vec(vec(r))]
    if not rows:
        return []
    den = 1
    for r in rows:
        for x in r:
            den = lcm(den, x.denominator)
    work = [[int(x * den) for x in r] for r in rows]
    n = len(work[0])
    pivot_row = 0
    pivcols = []
    for col in range(n):
        live = [i for i in range(pivot_row, len(work)) if work[i][col] != 0]
        if not live:
            continue
        # gcd elimination: keep reducing until one nonzero entry remains
        while len(live) > 1:
            live.sort(key=lambda i: abs(work[i][col]))
            base = live[0]
            for i in live[1:]:
                q = work[i][col] // work[base][col]
                work[i] = [a - q * b for a, b in zip(work[i], work[base])]
            live = [i for i in live if work[i][col] != 0]
        i0 = live[0]
        work[pivot_row], work[i0] = work[i0], work[pivot_row]
        if work[pivot_row][col] < 0:
            work[pivot_row] = [-a for a in work[pivot_row]]
        pivcols.append(col)
        pivot_row += 1
        if pivot_row == len(work):
            break
    work = work[:pivot_row]
    for k in range(len(pivcols) - 1, -1, -1):
        col = pivcols[k]
        piv = work[k][col]
        for i in range(k):
            q = work[i][col] // piv
            if q:
                work[i] = [a - q * b for a, b in zip(work[i], work[k])]
    return [tuple(Fraction(a, den) for a in row) for row in work]


def lattice_basis(gens: Sequence[Vec]) -> list[Vec]:
    """Row-style HNF basis of the Z-span of rational generators."""
    gens = [vec(g) for g in gens if not is_zero_vec(vec(g))]
    if not gens:
        return []
    return _row_hermite(gens)


def lattice_contains(basis: Sequence[Vec], v: Vec) -> bool:
    """Is v in the Z-span of the (echelonized) basis rows?"""
    v = vec(v)
    for b in basis:
        p = next((j for j, x in enumerate(b) if x != 0), None)
        if p is None:
            continue
        if v[p] != 0:
            c = v[p] / b[p]
            if c.denominator != 1:
                return False
            v = vsub(v, vscale(c, b))
    return is_zero_vec(v)


def lattice_coordinates(basis: Sequence[Vec], v: Vec) -> Optional[list[int]]:
    v = vec(v)
    coords = []
    for b in basis:
        p = next((j for j, x in enumerate(b) if x != 0), None)
        if p is None:
            coords.append(0)
            continue
        c = v[p] / b[p]
        if c.denominator != 1:
            return None
        coords.append(int(c))
        v = vsub(v, vscale(c, b))
    if not is_zero_vec(v):
        return None
    return coords


def integral_point_in_affine(point: Vec, directions: Sequence[Vec],
                             lattice: Sequence[Vec]) -> Optional[Vec]:
    """A point of (point + Q-span(directions)) lying in the Z-span ``lattice``.

    ``lattice`` must be an independent basis (e.g. from :func:`lattice_basis`).
    Returns the representative whose basis coordinates are canonically reduced
    modulo the allowed perturbations (deterministic), or None when the
    intersection is empty.
    """
    lat = [vec(b) for b in lattice]
    point = vec(point)
    if not lat:
        return point if is_zero_vec(point) else None
    k = len(lat)
    dirs = [vec(d) for d in directions]
    unknown_rows = [vscale(-1, d) for d in dirs] + lat
    coeff, null = solve_linear(unknown_rows, point)
    if coeff is None:
        return None
    s0 = coeff[len(dirs):]
    perturb, _ = rref([tuple(n[len(dirs):]) for n in null]) if null else ([], [])
    if not perturb:
        if all(Fraction(x).denominator == 1 for x in s0):
            s_int = [int(x) for x in s0]
        else:
            return None
        sat = []
    else:
        sat = _saturated_integer_lattice(perturb, k)
        den = _common_denominator([tuple(s0)])
        # den*z - sum a_j w_j' = den*s0 with w' = den*w: any integer z with
        # z - s0 in span(perturb) arises this way since the w span is saturated.
        a_mat = sympy.Matrix.hstack(
            den * sympy.eye(k),
            sympy.Matrix([[-wj for wj in w] for w in sat]).T,
        )
        b = sympy.Matrix([int(Fraction(x) * den) for x in s0])
        sol = _solve_integer(a_mat, b)
        if sol is None:
            return None
        s_int = sol[:k]
    for row in _row_hermite([tuple(Fraction(a) for a in w) for w in sat]):
        p = next((j for j, x in enumerate(row) if x != 0), None)
        if p is None:
            continue
        piv = int(row[p])
        q = s_int[p] // piv
        if q:
            s_int = [a - q * int(b2) for a, b2 in zip(s_int, row)]
    out = vec([0] * len(point))
    for c, b2 in zip(s_int, lat):
        out = vadd(out, vscale(c, b2))
    return out


def _saturated_integer_lattice(span_rows: Sequence[Vec], k: int) -> list[list[int]]:
    """Basis of the lattice of integer points inside the Q-span of the rows."""
    rows = [vec(r) for r in span_rows if not is_zero_vec(vec(r))]
    if not rows:
        return []
    den = _common_denominator(rows)
    b = sympy.Matrix([[int(x * den) for x in r] for r in rows])
    D, S, T = smith_normal_decomp(b)
    # b = S^-1 D T^-1, so row-lattice(b) = {d_i * (T^-1 row i)}; the saturation
    # drops the d_i.
    t_inv = T.inv()
    out = []
    for i in range(min(D.rows, D.cols)):
        if D[i, i] != 0:
            out.append([int(t_inv[i, j]) for j in range(k)])
    return out


def _solve_integer(A: "sympy.Matrix", b: "sympy.Matrix"):
    """One integer solution x of A x = b, or None."""
    D, S, T = smith_normal_decomp(A)
    c = S * b
    n = A.cols
    y = [0] * n
    r = min(D.rows, D.cols)
    for i in range(D.rows):
        d = D[i, i] if i < r else 0
        ci = int(c[i]) if i < c.rows else 0
        if d == 0:
            if ci != 0:
                return None
        else:
            if ci % int(d) != 0:
                return None
            if i < n:
                y[i] = ci // int(d)
    for i in range(D.rows, c.rows):
        if int(c[i]) != 0:
            return None
    x = T * sympy.Matrix(y)
    return [int(x[i]) for i in range(n)]


def det_sign_unimodular(mat_rows: Sequence[Vec]) -> Optional[int]:
    """Determinant if it is ±1, else None; exact over Q."""
    m = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r]
                      for r in mat_rows])
    d = m.det()
    if d == 1:
        return 1
    if d == -1:
        return -1
    return None


def smith_invariants(int_rows: Sequence[Sequence[int]]) -> list[int]:
    if not int_rows:
        return []
    m = sympy.Matrix([list(r) for r in int_rows])
    D, _, _ = smith_normal_decomp(m)
    out = []
    for i in range(min(D.rows, D.cols)):
        out.append(int(abs(D[i, i])))
    return out
