"""The integral divided-power enveloping algebra, truncated by height.

A context fixes a root datum, a height bound, a side and a coefficient ring,
and eagerly computes: per-root integral bases (Hermite-reduced divided-power
ad-orbits), exponential sequences for every basis element, the PBW monomial
basis with integer structure tables, and the bialgebra maps.  Elements are
sparse integer/field-coefficient vectors over the PBW monomials.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Optional, Sequence

from . import rings
from .errors import (ContextMismatch, InsufficientDepth, NoIntegralSolution,
                     NonIntegralConstant, NonIntegralStructure, NotAffineContext,
                     NotHomogeneous, NotPrenilpotent, PreconditionFailed,
                     ResourceLimit)
from .rootdata import (Coords, RootDatum, RootTable, classify_pair,
                       enumerate_roots, height)
from ._linalg import (LinSolver, integral_point_in_affine, is_zero_vec,
                      lattice_basis, lattice_contains, lattice_coordinates,
                      solve_linear, vadd, vec, vscale)
from ._ucore import USlice, slice_for, wt_add, wt_height


# ---------------------------------------------------------------------------
# Multiplicity entry point used by rootdata.enumerate_roots


def primitive_dimension(datum: RootDatum, coords: Coords,
                        word_dim_cap: int = 420) -> int:
    """dim g_gamma computed as the space of primitives at that weight."""
    coords = tuple(abs(int(c)) for c in coords) if all(c <= 0 for c in coords) \
        else tuple(int(c) for c in coords)
    if any(c < 0 for c in coords):
        raise PreconditionFailed("weight must be sign-definite")
    n_words = _word_count(coords)
    if n_words > word_dim_cap:
        raise ResourceLimit(
            f"multiplicity at weight {coords} needs a {n_words}-dimensional "
            f"word space (cap {word_dim_cap}); raise the cap to force it")
    sl = slice_for(datum.matrix.entries)
    return sl.primitive_dim(coords)


def _word_count(coords: Coords) -> int:
    total = sum(coords)
    out = 1
    rem = total
    for c in coords:
        out *= comb(rem, c)
        rem -= c
    return out


# ---------------------------------------------------------------------------
# Basis elements and monomials


@dataclass(frozen=True)
class BasisElement:
    index: int
    root: Coords          # positive core coordinates
    sub: int              # position inside the root's basis
    is_real: bool

    def label(self) -> str:
        return f"x[{','.join(map(str, self.root))}]#{self.sub}"


Monomial = tuple  # sorted tuple of (basis_index, exponent), empty = 1


class AlgebraContext:
    """Immutable-after-build model of U^+ (or U^-) up to a height bound."""

    def __init__(self, datum: RootDatum, height_bound: int,
                 side: str = "positive", ring: Optional[rings.Ring] = None,
                 word_dim_cap: int = 5000):
        if height_bound < 1:
            raise PreconditionFailed("height bound must be >= 1")
        if side not in ("positive", "negative"):
            raise PreconditionFailed(f"unsupported side {side!r}")
        self.datum = datum
        self.height_bound = height_bound
        self.side = side
        self.sign = 1 if side == "positive" else -1
        self.ring = ring if ring is not None else rings.Rationals()
        self.slice: USlice = slice_for(datum.matrix.entries, word_dim_cap)
        self.table: RootTable = enumerate_roots(
            datum, height_bound, multiplicities=True,
            mult_fn=lambda d, c: self.slice.primitive_dim(c))
        self._build_roots_and_basis()
        self._build_exp_sequences()
        self._build_monomials()
        self._build_tables()
        self._is_sl2_loop = datum.matrix.entries == ((2, -2), (-2, 2))

    # -- construction -------------------------------------------------------

    def _build_roots_and_basis(self):
        self.roots = sorted(set(self.table.real_positive)
                            | set(self.table.imaginary_positive),
                            key=lambda c: (height(c), c))
        self._lat_cache: dict = {}
        lattices = self._ad_orbit_lattices()
        self.basis: list[BasisElement] = []
        self.basis_vec: list = []            # reduced word vectors
        self.basis_by_root: dict = {}
        self.root_lattice_basis: dict = {}   # root -> HNF rows (word coords)
        for gamma in self.roots:
            rows = lattice_basis(lattices.get(gamma, []))
            rows = [self._normalize_basis_vector(gamma, r) for r in rows]
            prim = self.slice.primitive_basis(gamma)
            if len(rows) != len(prim):
                raise NonIntegralStructure(
                    f"ad-orbit lattice rank {len(rows)} != primitive dimension "
                    f"{len(prim)} at {gamma}")
            for r in rows:
                if not self._is_primitive_vec(gamma, r):
                    raise NonIntegralStructure(
                        f"lattice vector at {gamma} is not primitive")
            self.root_lattice_basis[gamma] = rows
            idxs = []
            for sub, r in enumerate(rows):
                b = BasisElement(len(self.basis), gamma, sub,
                                 self.table.is_real(gamma))
                self.basis.append(b)
                self.basis_vec.append(r)
                idxs.append(b.index)
            self.basis_by_root[gamma] = idxs

    def _ad_orbit_lattices(self) -> dict:
        """g_{gamma,Z} for every weight within the bound, as the lattice
        generated by divided ad-powers of the simple generators.

        Divided ad-powers strictly raise height, so one pass over weights in
        ascending height order is a complete closure.
        """
        n = self.datum.n
        H = self.height_bound
        gens: dict = {}
        for j in range(n):
            wj = tuple(1 if k == j else 0 for k in range(n))
            _, v = self.slice.generator_vec(j)
            gens.setdefault(wj, []).append(v)
        weights = sorted((w for w in _weights_box(n, H)),
                         key=lambda c: (height(c), c))
        for wt in weights:
            if wt not in gens:
                continue
            basis_here = lattice_basis(gens[wt])
            gens[wt] = basis_here
            h = height(wt)
            for i in range(n):
                for m in range(1, H - h + 1):
                    target = tuple(wt[k] + (m if k == i else 0)
                                   for k in range(n))
                    for v in basis_here:
                        _, img = self.slice.ad_divided(i, m, wt, v)
                        if not is_zero_vec(img):
                            gens.setdefault(target, []).append(img)
        return gens

    def _normalize_basis_vector(self, gamma: Coords, v):
        """Deterministic sign/orientation; for the affine sl2 matrix, align
        with the loop realization so that g_{n delta} has pi-image
        diag(t^n, -t^n) and real spaces map to +E12 t^n / +E21 t^{n+1}."""
        if self.datum.matrix.entries == ((2, -2), (-2, 2)):
            mat = _sl2_pi_vec(self.slice, gamma, v)
            lead = _laurent_leading(mat)
            if lead is not None and lead < 0:
                return vscale(-1, v)
        return v

    def _is_primitive_vec(self, gamma: Coords, v) -> bool:
        return not self.slice.reduced_coproduct_vec(gamma, v)

    def _build_exp_sequences(self):
        self.exp_seq: dict = {}
        self.exp_strategy: dict = {}
        for b in self.basis:
            n_max = self.height_bound // height(b.root)
            self.exp_strategy[b.index] = "real" if b.is_real else (
                "mitzman_affine" if self._use_mitzman(b) else "solver")
            self.exp_seq[b.index] = self._exponential_terms(b, n_max)

    def sequence_fingerprint(self) -> str:
        parts = [f"{b.index}:{self.exp_strategy[b.index]}" for b in self.basis]
        return f"H{self.height_bound};{self.side};" + ",".join(parts)

    def _exponential_terms(self, b: BasisElement, n_max: int) -> list:
        """Word vectors of x^{[0..n_max]} for a basis element."""
        gamma = b.root
        v = self.basis_vec[b.index]
        terms = [(tuple([0] * self.datum.n), self.slice.unit_vec()), (gamma, v)]
        if b.is_real:
            for m in range(2, n_max + 1):
                wt, vm = self.slice.power_divided(gamma, v, m)
                if not self._in_integral_form(wt, vm):
                    raise NonIntegralStructure(
                        f"divided power of real basis element leaves U_Z at {wt}")
                terms.append((wt, vm))
            return terms
        if self._use_mitzman(b):
            return self._mitzman_terms(b, n_max, terms)
        for m in range(2, n_max + 1):
            terms.append(self._solve_exp_term(gamma, terms, m))
        return terms

    def _use_mitzman(self, b: BasisElement) -> bool:
        return (self.datum.matrix.entries == ((2, -2), (-2, 2))
                and not b.is_real)

    def _mitzman_terms(self, b: BasisElement, n_max: int, terms: list) -> list:
        """x^{[p]} = Lambda_p(x, x_2, ..., x_p) with x_j the aligned basis of
        the j-th multiple of the root (affine loop choice)."""
        gamma = b.root
        chain = {1: (gamma, self.basis_vec[b.index])}
        for j in range(2, n_max + 1):
            jg = tuple(j * c for c in gamma)
            if height(jg) > self.height_bound:
                break
            idxs = self.basis_by_root.get(jg, [])
            if len(idxs) != 1:
                raise NonIntegralStructure("affine chain root space not rank 1")
            chain[j] = (jg, self.basis_vec[idxs[0]])
        lam = mitzman_lambda_all(n_max)
        for p in range(2, n_max + 1):
            target = tuple(p * c for c in gamma)
            acc = None
            for mono, coeff in lam[p].items():
                piece_wt = tuple([0] * self.datum.n)
                piece = self.slice.unit_vec()
                usable = True
                for j, e in mono:
                    if j not in chain:
                        usable = False
                        break
                    for _ in range(e):
                        piece = self.slice.mul(piece_wt, piece, chain[j][0],
                                               chain[j][1])
                        piece_wt = wt_add(piece_wt, chain[j][0])
                if not usable:
                    raise InsufficientDepth(
                        f"loop chain for {gamma} too short for power {p}")
                term = vscale(coeff, piece)
                acc = term if acc is None else vadd(acc, term)
            if not self._in_integral_form(target, acc):
                raise NonIntegralStructure(
                    f"Mitzman term at {target} is not integral")
            terms.append((target, acc))
        return terms

    def _solve_exp_term(self, gamma: Coords, terms: list, m: int):
        """Degree-m term of an exponential sequence: solve the coproduct
        condition over Q, then pick the Hermite-minimal integral lift."""
        target = tuple(m * c for c in gamma)
        self.slice.ensure_weight(target)
        rhs: dict = {}
        for p in range(1, m):
            q = m - p
            wl, vl = terms[p]
            wr, vr = terms[q]
            key = (wl, wr)
            mat = rhs.setdefault(key, {})
            for k1, c1 in enumerate(vl):
                if c1 == 0:
                    continue
                for k2, c2 in enumerate(vr):
                    if c2 == 0:
                        continue
                    mat[(k1, k2)] = mat.get((k1, k2), Fraction(0)) + c1 * c2
        dim = len(self.slice.words[target])
        pivots = set(self.slice.ideal[target].pivots)
        free_pos = [k for k in range(dim) if k not in pivots]
        basis_vecs = []
        for f in free_pos:
            unit = tuple(Fraction(1) if k == f else Fraction(0)
                         for k in range(dim))
            basis_vecs.append(self.slice.reduce(target, unit))
        columns: dict = {}
        rows = []
        for bv in basis_vecs:
            rc = self.slice.reduced_coproduct_vec(target, bv)
            row = {}
            for split, mat in rc.items():
                for pos, c in mat.items():
                    key = (split, pos)
                    col = columns.setdefault(key, len(columns))
                    row[col] = c
            rows.append(row)
        rhs_vec = {}
        for split, mat in rhs.items():
            for pos, c in mat.items():
                key = (split, pos)
                if key not in columns:
                    if c != 0:
                        raise NonIntegralStructure(
                            "exponential-sequence target outside the image")
                    continue
                rhs_vec[columns[key]] = c
        ncols = len(columns)
        dense = [tuple(r.get(j, Fraction(0)) for j in range(ncols)) for r in rows]
        rhs_dense = tuple(rhs_vec.get(j, Fraction(0)) for j in range(ncols))
        coeff, null = solve_linear(dense, rhs_dense)
        if coeff is None:
            raise NonIntegralStructure("coproduct condition unsolvable")
        particular = tuple([Fraction(0)] * dim)
        for c, bv in zip(coeff, basis_vecs):
            if c:
                particular = vadd(particular, vscale(c, bv))
        directions = self.slice.primitive_basis(target)
        lattice = self._integral_lattice(target)
        point = integral_point_in_affine(particular, directions, lattice)
        if point is None:
            raise NoIntegralSolution(m)
        return (target, point)

    def _integral_lattice(self, wt: Coords) -> list:
        """HNF basis of U_Z at a weight: divided generator words."""
        key = ("ulat", wt)
        cache = self.__dict__.setdefault("_lat_cache", {})
        if key in cache:
            return cache[key]
        self.slice.ensure_weight(wt)
        gens = []
        for w in self.slice.words[wt]:
            den = 1
            run = 1
            for t in range(1, len(w) + 1):
                if t < len(w) and w[t] == w[t - 1]:
                    run += 1
                else:
                    den *= factorial(run)
                    run = 1
            unit = {w: Fraction(1, den)}
            gens.append(self.slice.dict_reduce(wt, unit))
        out = lattice_basis(gens)
        cache[key] = out
        return out

    def _in_integral_form(self, wt: Coords, v) -> bool:
        return lattice_contains(self._integral_lattice(wt), v)

    def _build_monomials(self):
        zero_wt = tuple([0] * self.datum.n)
        monos: list = []
        weights: list = []

        def rec(pos: int, acc: list, wt: Coords):
            if pos == len(self.basis):
                monos.append(tuple(acc))
                weights.append(wt)
                return
            b = self.basis[pos]
            h = height(b.root)
            e = 0
            while wt_height(wt) + e * h <= self.height_bound:
                if e == 0:
                    rec(pos + 1, acc, wt)
                else:
                    rec(pos + 1, acc + [(pos, e)],
                        tuple(w + e * r for w, r in zip(wt, b.root)))
                e += 1

        rec(0, [], zero_wt)
        order = sorted(range(len(monos)),
                       key=lambda k: (wt_height(weights[k]), weights[k], monos[k]))
        self.monomials = [monos[k] for k in order]
        self.mono_weight = [weights[k] for k in order]
        self.mono_index = {m: k for k, m in enumerate(self.monomials)}
        # realize monomials as word vectors
        self.mono_vec = []
        for mono, wt in zip(self.monomials, self.mono_weight):
            cur_wt = tuple([0] * self.datum.n)
            cur = self.slice.unit_vec()
            for bidx, e in mono:
                twt, tv = self.exp_seq[bidx][e]
                cur = self.slice.mul(cur_wt, cur, twt, tv)
                cur_wt = wt_add(cur_wt, twt)
            self.mono_vec.append((cur_wt, cur))
        # per-weight monomial lists and coordinate solvers
        self.monos_by_weight: dict = {}
        for k, wt in enumerate(self.mono_weight):
            self.monos_by_weight.setdefault(wt, []).append(k)
        self.coord_solver: dict = {}
        for wt, idxs in self.monos_by_weight.items():
            vecs = [self.mono_vec[k][1] for k in idxs]
            solver = LinSolver(vecs)
            if solver.rank != len(idxs):
                raise NonIntegralStructure(
                    f"PBW monomials dependent at weight {wt}")
            if len(idxs) != self.slice.quotient_dim(wt):
                raise NonIntegralStructure(
                    f"PBW monomial count {len(idxs)} != quotient dimension "
                    f"{self.slice.quotient_dim(wt)} at {wt}")
            self.coord_solver[wt] = solver

    def _vec_to_coords(self, wt: Coords, v) -> dict:
        """Express a reduced vector in PBW coordinates {mono_index: Fraction}."""
        idxs = self.monos_by_weight.get(wt)
        if idxs is None:
            raise NonIntegralStructure(f"no monomials at weight {wt}")
        coeffs = self.coord_solver[wt].solve(v)
        if coeffs is None:
            raise NonIntegralStructure(f"vector outside PBW span at {wt}")
        return {idxs[t]: c for t, c in enumerate(coeffs) if c != 0}

    def _build_tables(self):
        self.mult_table: dict = {}
        self.antipode_table: dict = {}
        nweights = self.monos_by_weight
        for k1, wt1 in enumerate(self.mono_weight):
            for k2, wt2 in enumerate(self.mono_weight):
                if wt_height(wt1) + wt_height(wt2) > self.height_bound:
                    continue
                target = wt_add(wt1, wt2)
                v = self.slice.mul(wt1, self.mono_vec[k1][1],
                                   wt2, self.mono_vec[k2][1])
                coords = self._vec_to_coords(target, v)
                entry = []
                for k3, c in sorted(coords.items()):
                    if c.denominator != 1:
                        raise NonIntegralStructure(
                            f"non-integer structure constant {c} in "
                            f"[{k1}]*[{k2}]")
                    entry.append((k3, int(c)))
                self.mult_table[(k1, k2)] = tuple(entry)
        for k, wt in enumerate(self.mono_weight):
            tv = self.slice.antipode_vec(wt, self.mono_vec[k][1])
            coords = self._vec_to_coords(wt, tv)
            entry = []
            for k3, c in sorted(coords.items()):
                if c.denominator != 1:
                    raise NonIntegralStructure("non-integer antipode constant")
                entry.append((k3, int(c)))
            self.antipode_table[k] = tuple(entry)

    # -- public views ---------------------------------------------------------

    def signed_root(self, coords: Coords) -> Coords:
        return tuple(self.sign * c for c in coords)

    def monomial_weight_signed(self, k: int) -> Coords:
        return self.signed_root(self.mono_weight[k])

    def describe_basis(self) -> list:
        out = []
        for b in self.basis:
            out.append({"index": b.index, "root": list(self.signed_root(b.root)),
                        "sub": b.sub, "real": b.is_real})
        return out

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, {0: self.ring.one})

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def basis_element(self, index: int) -> "AlgebraElement":
        mono = ((index, 1),)
        return AlgebraElement(self, {self.mono_index[mono]: self.ring.one})

    def monomial_element(self, mono: Monomial) -> "AlgebraElement":
        return AlgebraElement(self, {self.mono_index[tuple(mono)]: self.ring.one})

    def pbw_unimodularity(self, wt: Coords):
        """Determinant (must be +/-1) of the PBW basis against U_Z at wt."""
        from ._linalg import det_sign_unimodular
        idxs = self.monos_by_weight[wt]
        lat = self._integral_lattice(wt)
        if len(lat) != len(idxs):
            return None
        rows = []
        for k in idxs:
            coords = lattice_coordinates(lat, self.mono_vec[k][1])
            if coords is None:
                return None
            rows.append(vec(coords))
        return det_sign_unimodular(rows)


def wt_le_all(a: Coords, b: Coords) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _weights_box(n: int, bound: int):
    """All nonzero weights in Q+ with height <= bound."""
    def rec(pos, left):
        if pos == n - 1:
            for v in range(left + 1):
                yield (v,)
            return
        for v in range(left + 1):
            for rest in rec(pos + 1, left - v):
                yield (v,) + rest
    for w in rec(0, bound):
        if any(w):
            yield w


# -- minimal loop realization for the affine sl2 matrix ----------------------
# index 1 acts as E12, index 0 as t*E21 on Z[t, 1/t]^2; used only to align
# basis signs and to cross-check the matrix realization at small heights.


def _sl2_pi_word(word: tuple) -> dict:
    """2x2 Laurent matrix of a generator word: {(r,c): {deg: Fraction}}."""
    mat = {(0, 0): {0: Fraction(1)}, (1, 1): {0: Fraction(1)}}
    for ch in word:
        gen = {(0, 1): {0: Fraction(1)}} if ch == 1 else {(1, 0): {1: Fraction(1)}}
        mat = _lm_mul(mat, gen)
    return mat


def _lm_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (r, k1), poly1 in a.items():
        for (k2, c), poly2 in b.items():
            if k1 != k2:
                continue
            cell = out.setdefault((r, c), {})
            for d1, x1 in poly1.items():
                for d2, x2 in poly2.items():
                    d = d1 + d2
                    s = cell.get(d, Fraction(0)) + x1 * x2
                    if s == 0:
                        cell.pop(d, None)
                    else:
                        cell[d] = s
    return {k: v for k, v in out.items() if v}


def _sl2_pi_vec(sl: USlice, wt: Coords, v) -> dict:
    out: dict = {}
    for k, c in enumerate(v):
        if c == 0:
            continue
        for (rc, poly) in _sl2_pi_word(sl.words[wt][k]).items():
            cell = out.setdefault(rc, {})
            for d, x in poly.items():
                s = cell.get(d, Fraction(0)) + c * x
                if s == 0:
                    cell.pop(d, None)
                else:
                    cell[d] = s
    return {k: p for k, p in out.items() if p}


def _laurent_leading(mat: dict) -> Optional[Fraction]:
    """First nonzero coefficient in a fixed scan order, for sign alignment."""
    for rc in ((0, 0), (0, 1), (1, 0), (1, 1)):
        poly = mat.get(rc)
        if poly:
            return poly[min(poly)]
    return None


# ---------------------------------------------------------------------------
# Elements


class AlgebraElement:
    """Sparse PBW-coordinate element over the context's coefficient ring."""

    __slots__ = ("context", "coeffs", "truncated")

    def __init__(self, context: AlgebraContext, coeffs: dict,
                 truncated: bool = False):
        self.context = context
        self.coeffs = {k: c for k, c in coeffs.items()
                       if not context.ring.is_zero(c)}
        self.truncated = truncated

    def _check(self, other: "AlgebraElement"):
        if other.context is not self.context:
            raise ContextMismatch("elements live in different contexts")

    def __add__(self, other):
        self._check(other)
        r = self.context.ring
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            s = r.add(out.get(k, r.zero), c)
            if r.is_zero(s):
                out.pop(k, None)
            else:
                out[k] = s
        return AlgebraElement(self.context, out,
                              self.truncated or other.truncated)

    def __sub__(self, other):
        return self + other.scale(self.context.ring.of_int(-1))

    def scale(self, c) -> "AlgebraElement":
        r = self.context.ring
        return AlgebraElement(self.context,
                              {k: r.mul(c, v) for k, v in self.coeffs.items()},
                              self.truncated)

    def __mul__(self, other):
        self._check(other)
        ctx = self.context
        r = ctx.ring
        out: dict = {}
        truncated = self.truncated or other.truncated
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                entry = ctx.mult_table.get((k1, k2))
                if entry is None:
                    truncated = True
                    continue
                prod = r.mul(c1, c2)
                for k3, n in entry:
                    add = r.mul(prod, r.of_int(n))
                    s = r.add(out.get(k3, r.zero), add)
                    if r.is_zero(s):
                        out.pop(k3, None)
                    else:
                        out[k3] = s
        return AlgebraElement(ctx, out, truncated)

    def counit(self):
        return self.coeffs.get(0, self.context.ring.zero)

    def antipode(self) -> "AlgebraElement":
        ctx = self.context
        r = ctx.ring
        out: dict = {}
        for k, c in self.coeffs.items():
            for k3, n in ctx.antipode_table[k]:
                s = r.add(out.get(k3, r.zero), r.mul(c, r.of_int(n)))
                if r.is_zero(s):
                    out.pop(k3, None)
                else:
                    out[k3] = s
        return AlgebraElement(ctx, out, self.truncated)

    def coproduct(self) -> dict:
        """Sparse pair-indexed map {(k1, k2): coeff}."""
        ctx = self.context
        r = ctx.ring
        out: dict = {}
        for k, c in self.coeffs.items():
            mono = ctx.monomials[k]
            for left, right in _splits(mono):
                kl = ctx.mono_index[left]
                kr = ctx.mono_index[right]
                s = r.add(out.get((kl, kr), r.zero), c)
                if r.is_zero(s):
                    out.pop((kl, kr), None)
                else:
                    out[(kl, kr)] = s
        return out

    def weight_component(self, wt: Coords) -> "AlgebraElement":
        idxs = set(self.context.monos_by_weight.get(tuple(wt), []))
        return AlgebraElement(self.context,
                              {k: c for k, c in self.coeffs.items() if k in idxs})

    def degree_component(self, d: int) -> "AlgebraElement":
        return AlgebraElement(self.context,
                              {k: c for k, c in self.coeffs.items()
                               if wt_height(self.context.mono_weight[k]) == d})

    def min_positive_degree(self) -> Optional[int]:
        degrees = [wt_height(self.context.mono_weight[k])
                   for k in self.coeffs if k != 0]
        return min(degrees) if degrees else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement)
                and self.context is other.context
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        ctx = self.context
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs):
            mono = ctx.monomials[k]
            if not mono:
                mono_s = "1"
            else:
                mono_s = "*".join(
                    ctx.basis[b].label() + (f"^[{e}]" if e > 1 else "")
                    for b, e in mono)
            parts.append(f"{ctx.ring.to_str(self.coeffs[k])}·{mono_s}")
        flag = " (truncated)" if self.truncated else ""
        return " + ".join(parts) + flag


def _splits(mono: Monomial):
    """All (left, right) with componentwise sum equal to mono."""
    if not mono:
        yield (), ()
        return
    ranges = [range(e + 1) for _, e in mono]
    for pick in itertools.product(*ranges):
        left = tuple((b, p) for (b, _), p in zip(mono, pick) if p > 0)
        right = tuple((b, e - p) for (b, e), p in zip(mono, pick) if e - p > 0)
        yield left, right


# ---------------------------------------------------------------------------
# Public operations


_context_cache: dict = {}


def build_context(datum: RootDatum, height_bound: int, side: str = "positive",
                  ring: Optional[rings.Ring] = None):
    """One-sided contexts model U^+/U^- over any exact ring; ``side="full"``
    returns the U^- . U^0 . U^+ model over Q with e/f straightening."""
    key = (datum.matrix.entries, datum.rank_Y, datum.coroots,
           datum.root_covectors, height_bound, side,
           ring.tag if ring is not None else "Q")
    ctx = _context_cache.get(key)
    if ctx is None:
        if side == "full":
            if ring is not None and ring.tag != "Q":
                raise PreconditionFailed("the full side works over Q")
            from ._fullside import FullContext
            ctx = FullContext(datum, height_bound)
        else:
            ctx = AlgebraContext(datum, height_bound, side, ring)
        _context_cache[key] = ctx
    return ctx


@dataclass
class PrimitiveSpace:
    root: Coords
    dimension: int
    q_basis: list          # AlgebraElements
    lattice: list          # AlgebraElements (integral basis)


def primitive_space(ctx: AlgebraContext, root_coords: Coords) -> PrimitiveSpace:
    """Solve the primitivity equation at a weight; basis + integral lattice."""
    gamma = tuple(abs(int(c)) for c in root_coords) \
        if all(c <= 0 for c in root_coords) else tuple(int(c) for c in root_coords)
    if height(gamma) > ctx.height_bound:
        raise PreconditionFailed("weight beyond the context height bound")
    prim = ctx.slice.primitive_basis(gamma)
    idxs = ctx.basis_by_root.get(gamma, [])
    q_basis = []
    for v in prim:
        coords = ctx._vec_to_coords(gamma, v)
        q_basis.append(AlgebraElement(
            ctx, {k: ctx.ring.of_fraction(c) for k, c in coords.items()}))
    lattice = [ctx.basis_element(i) for i in idxs]
    return PrimitiveSpace(ctx.signed_root(gamma), len(prim), q_basis, lattice)


@dataclass
class ExponentialSequence:
    context: AlgebraContext
    root: Coords                 # signed
    base_index: Optional[int]    # basis index when x is a basis element
    terms: list                  # AlgebraElements x^{[0..n_max]}
    strategy: str

    @property
    def n_max(self) -> int:
        return len(self.terms) - 1

    def fingerprint(self) -> str:
        return f"{self.strategy}:{self.root}:{self.base_index}"


def exponential_sequence(ctx: AlgebraContext, x, n_max: Optional[int] = None,
                         strategy: str = "auto") -> ExponentialSequence:
    """Exponential sequence for a homogeneous primitive x.

    ``x`` may be a basis index or a homogeneous AlgebraElement.  Strategies:
    ``real`` forces x^{[n]} = x^(n); ``mitzman_affine`` uses the loop-aligned
    polynomial choice; ``solver`` does the degree-by-degree integral lift;
    ``auto`` picks per the root type (precomputed at build time).
    """
    if isinstance(x, AlgebraElement):
        if x.context is not ctx:
            raise ContextMismatch("element from another context")
        if x.is_zero():
            terms = [ctx.one()] + [ctx.zero() for _ in range(n_max or ctx.height_bound)]
            return ExponentialSequence(ctx, tuple([0] * ctx.datum.n), None,
                                       terms, "zero")
        weights = {tuple(ctx.mono_weight[k]) for k in x.coeffs}
        if len(weights) != 1:
            raise NotHomogeneous("element is not weight-homogeneous")
        gamma = weights.pop()
        idxs = ctx.basis_by_root.get(gamma, [])
        for i in idxs:
            if x == ctx.basis_element(i):
                return exponential_sequence(ctx, i, n_max, strategy)
        raise NotHomogeneous(
            "general primitive elements are supported through basis elements; "
            "decompose x over the root-space basis first")
    bidx = int(x)
    b = ctx.basis[bidx]
    stored = ctx.exp_seq[bidx]
    limit = len(stored) - 1
    if n_max is None:
        n_max = limit
    if n_max > limit:
        raise InsufficientDepth(
            f"requested {n_max} terms but the height bound supports {limit}")
    if strategy == "real" and not b.is_real:
        raise PreconditionFailed("real strategy on a non-real root")
    if strategy == "mitzman_affine" and not ctx._use_mitzman(b):
        raise NotAffineContext("loop realization only available for "
                               "imaginary roots of the affine sl2 matrix")
    used = ctx.exp_strategy[bidx]
    pairs = stored
    if strategy == "solver" and used != "solver" and not b.is_real:
        # an explicit solver request overrides the loop-aligned default
        pairs = [stored[0], stored[1]]
        for m in range(2, n_max + 1):
            pairs.append(ctx._solve_exp_term(b.root, pairs, m))
        used = "solver"
    terms = []
    for m in range(n_max + 1):
        wt, v = pairs[m]
        coords = ctx._vec_to_coords(wt, v)
        coeffs = {}
        for k, c in coords.items():
            if c.denominator != 1:
                raise NonIntegralStructure("stored exponential term not integral")
            coeffs[k] = ctx.ring.of_int(c.numerator)
        terms.append(AlgebraElement(ctx, coeffs))
    return ExponentialSequence(ctx, ctx.signed_root(b.root), bidx, terms, used)


def twisted_exp(seq: ExponentialSequence, lam) -> AlgebraElement:
    """[exp] lam x = sum_n lam^n x^{[n]} at the context truncation."""
    ctx = seq.context
    r = ctx.ring
    ht = height(tuple(abs(c) for c in seq.root)) or 1
    needed = ctx.height_bound // ht
    if seq.n_max < needed:
        raise InsufficientDepth(
            f"sequence has {seq.n_max} terms, truncation needs {needed}")
    out = ctx.zero()
    power = r.one
    for n, term in enumerate(seq.terms):
        if n > 0:
            power = r.mul(power, lam)
        out = out + term.scale(power)
    return out


# ---------------------------------------------------------------------------
# Mitzman polynomials


def mitzman_lambda_all(n_max: int) -> list:
    """Lambda_0..Lambda_n as polynomial dicts {((j, e), ...): Fraction}.

    Monomial keys are sorted tuples of (index j, exponent e) in the variables
    Z_j; the defining recurrence is n*Lambda_n = sum_{p=1..n} Z_p Lambda_{n-p}.
    """
    lams = [{(): Fraction(1)}]
    for n in range(1, n_max + 1):
        acc: dict = {}
        for p in range(1, n + 1):
            for mono, c in lams[n - p].items():
                d = dict(mono)
                d[p] = d.get(p, 0) + 1
                key = tuple(sorted(d.items()))
                acc[key] = acc.get(key, Fraction(0)) + c
        lams.append({k: c / n for k, c in acc.items()})
    return lams


def mitzman_lambda(n: int, specialization: Optional[Sequence] = None):
    """Lambda_n symbolically, or evaluated at Z_j = specialization[j-1]."""
    lam = mitzman_lambda_all(n)[n]
    if specialization is None:
        return lam
    total = None
    for mono, c in lam.items():
        piece = Fraction(c)
        for j, e in mono:
            piece = piece * (Fraction(specialization[j - 1]) ** e)
        total = piece if total is None else total + piece
    return total if total is not None else Fraction(0)


def mitzman_weight(n: int) -> bool:
    """Check Lambda_n is weight-homogeneous of weight n (Z_j of weight j)."""
    lam = mitzman_lambda_all(n)[n]
    return all(sum(j * e for j, e in mono) == n for mono in lam)


# ---------------------------------------------------------------------------
# Commutator constants


@dataclass
class CommutatorTable:
    alpha: Coords
    beta: Coords
    interval: list             # coords from alpha to beta
    constants: dict            # (p, q) -> int, over interior roots p a + q b


def commutator_constants(datum: RootDatum, alpha: Coords, beta: Coords,
                         search_depth: int = 12) -> CommutatorTable:
    """C_{p,q} from the group commutator of the two real root exponentials,
    extracted by unique factorization over the interval ordered by p/q."""
    cls = classify_pair(datum, alpha, beta, search_depth)
    if cls.status != "prenilpotent":
        raise NotPrenilpotent(f"{alpha}, {beta}: {cls.status}")
    interval = cls.interval
    alpha, beta = tuple(alpha), tuple(beta)
    if len(interval) < 2 or beta == alpha:
        raise PreconditionFailed("pair must be non-collinear")
    w = cls.witness_positive
    conj = [tuple(w.action_q(g)) for g in interval]
    hmax = max(height(g) for g in conj)
    ring = rings.PolyTwo()
    ctx = build_context(datum, hmax, "positive", ring)
    a_pos, b_pos = conj[0], conj[-1]

    def exp_of(root_coords, sym):
        idxs = ctx.basis_by_root[root_coords]
        if len(idxs) != 1:
            raise NonIntegralConstant("interval root space not one-dimensional")
        seq = exponential_sequence(ctx, idxs[0])
        return twisted_exp(seq, rings.PolyTwo.monomial(*sym))

    ea = exp_of(a_pos, (1, 0))
    eb = exp_of(b_pos, (0, 1))
    # truncation beyond the interval heights is a graded quotient, so the
    # interval coefficients of the commutator are exact
    comm = ea * eb * ea.antipode() * eb.antipode()
    # factorize over the interior in increasing p/q order
    from .groupfilt import factorize_in_order
    order = []
    pairs = []
    for g in interval[1:-1]:
        coeff, _ = solve_linear([vec(alpha), vec(beta)], vec(g))
        p, q = int(coeff[0]), int(coeff[1])
        pairs.append((p, q))
        order.append(ctx.basis_by_root[tuple(w.action_q(g))][0])
    factors = factorize_in_order(comm, order, require_exhaust=True)
    constants = {}
    for (p, q), (bidx, lam) in zip(pairs, factors):
        expected_key = (p, q)
        value = 0
        for (i, j), c in lam.items():
            if (i, j) == (p, q):
                if Fraction(c).denominator != 1:
                    raise NonIntegralConstant(f"C_{p},{q} = {c} not integral")
                value = int(c)
            elif c != 0:
                raise NonIntegralConstant(
                    f"factor at {p},{q} has stray monomial {(i, j)}: {c}")
        constants[expected_key] = value
    return CommutatorTable(alpha, beta, interval, constants)
