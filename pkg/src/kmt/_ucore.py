"""Internal model of the positive half of the divided-power enveloping algebra.

The positive half at each weight gamma (a nonnegative integer vector over the
index set) is modelled as the weight-gamma slice of the free associative
algebra on the generators modulo the two-sided Serre ideal, computed degree by
degree with exact rational linear algebra.  Root spaces come out as the
primitive elements, integral lattices from divided-power spans and Hermite
reduction.

Everything here is expressed in *word coordinates*: a weight's basis is the
list of words (tuples of generator indices) with that content, and elements
are dense tuples of Fractions over that list, kept reduced modulo the ideal.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .errors import ResourceLimit
from ._linalg import RowSpace, solve_linear, vadd, vscale

Weight = tuple  # nonnegative int vector over the index set


def wt_add(a: Weight, b: Weight) -> Weight:
    return tuple(x + y for x, y in zip(a, b))


def wt_sub(a: Weight, b: Weight) -> Weight:
    return tuple(x - y for x, y in zip(a, b))


def wt_height(a: Weight) -> int:
    return sum(a)


def wt_le(a: Weight, b: Weight) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _content(word: tuple, n: int) -> Weight:
    out = [0] * n
    for ch in word:
        out[ch] += 1
    return tuple(out)


class USlice:
    """Weight-sliced model of U+ for one Kac-Moody matrix.

    Grows lazily: :meth:`ensure_weight` builds the word list and Serre-ideal
    row space for one weight (and, recursively, everything below it).
    """

    def __init__(self, matrix_entries: tuple, word_dim_cap: int = 100000):
        self.a = matrix_entries
        self.n = len(matrix_entries)
        self.word_dim_cap = word_dim_cap
        self.words: dict = {}        # weight -> list of words
        self.windex: dict = {}       # weight -> {word: position}
        self.ideal: dict = {}        # weight -> RowSpace over word coords
        self._serre_seeds: dict = {}  # weight -> list of word-vectors
        self._prim: dict = {}        # weight -> list of reduced vectors (g basis over Q)
        zero_wt = tuple([0] * self.n)
        self.words[zero_wt] = [()]
        self.windex[zero_wt] = {(): 0}
        self.ideal[zero_wt] = RowSpace(1)
        self._seed_serre()

    # -- construction ------------------------------------------------------

    def _seed_serre(self):
        """Serre elements (ad e_i)^{1-a_ij}(e_j) as free-algebra word dicts."""
        for i in range(self.n):
            for j in range(self.n):
                if i == j:
                    continue
                m = 1 - self.a[i][j]
                elt = {(j,): Fraction(1)}
                for _ in range(m):
                    elt = self._ad_generator_free(i, elt)
                wt = tuple(m if k == i else 0 for k in range(self.n))
                wt = tuple(wt[k] + (1 if k == j else 0) for k in range(self.n))
                self._serre_seeds.setdefault(wt, []).append(elt)

    @staticmethod
    def _ad_generator_free(i: int, elt: dict) -> dict:
        out: dict = {}
        for w, c in elt.items():
            for nw, nc in (((i,) + w, c), (w + (i,), -c)):
                s = out.get(nw, Fraction(0)) + nc
                if s == 0:
                    out.pop(nw, None)
                else:
                    out[nw] = s
        return out

    def ensure_weight(self, wt: Weight):
        if wt in self.words:
            return
        for lower in self._lower_weights(wt):
            if lower not in self.words:
                self.ensure_weight(lower)
        words = self._words_for(wt)
        if len(words) > self.word_dim_cap:
            raise ResourceLimit(
                f"word space at weight {wt} has dimension {len(words)} "
                f"(cap {self.word_dim_cap})")
        self.words[wt] = words
        self.windex[wt] = {w: k for k, w in enumerate(words)}
        rs = RowSpace(len(words))
        for seed in self._serre_seeds.get(wt, []):
            rs.add(self._dict_to_vec(wt, seed))
        for i in range(self.n):
            low = tuple(wt[k] - (1 if k == i else 0) for k in range(self.n))
            if any(x < 0 for x in low) or low not in self.ideal:
                continue
            for row in self.ideal[low].rows:
                for side in ("l", "r"):
                    moved = self._mul_generator(low, row, i, side, wt)
                    rs.add(moved)
        self.ideal[wt] = rs

    def _lower_weights(self, wt: Weight):
        out = []
        for i in range(self.n):
            if wt[i] > 0:
                out.append(tuple(wt[k] - (1 if k == i else 0)
                                 for k in range(self.n)))
        return out

    def _words_for(self, wt: Weight) -> list:
        total = wt_height(wt)
        letters = []
        for i in range(self.n):
            letters.extend([i] * wt[i])
        seen = set()
        out = []
        for perm in _multiset_permutations(letters):
            if perm not in seen:
                seen.add(perm)
                out.append(perm)
        out.sort()
        return out

    def _dict_to_vec(self, wt: Weight, elt: dict):
        idx = self.windex[wt]
        v = [Fraction(0)] * len(self.words[wt])
        for w, c in elt.items():
            v[idx[w]] += c
        return tuple(v)

    def _mul_generator(self, wt: Weight, v, i: int, side: str, target: Weight):
        idx = self.windex[target]
        out = [Fraction(0)] * len(self.words[target])
        for k, c in enumerate(v):
            if c == 0:
                continue
            w = self.words[wt][k]
            nw = ((i,) + w) if side == "l" else (w + (i,))
            out[idx[nw]] += c
        return tuple(out)

    # -- quotient arithmetic -------------------------------------------------

    def reduce(self, wt: Weight, v):
        """Normal form of a word vector modulo the Serre ideal."""
        self.ensure_weight(wt)
        return self.ideal[wt].reduce(v)

    def dict_reduce(self, wt: Weight, elt: dict):
        self.ensure_weight(wt)
        return self.reduce(wt, self._dict_to_vec(wt, elt))

    def quotient_dim(self, wt: Weight) -> int:
        self.ensure_weight(wt)
        return len(self.words[wt]) - self.ideal[wt].rank

    def mul(self, wt1: Weight, v1, wt2: Weight, v2):
        """Product of reduced vectors; result reduced at wt1+wt2."""
        target = wt_add(wt1, wt2)
        self.ensure_weight(target)
        idx = self.windex[target]
        out = [Fraction(0)] * len(self.words[target])
        w1s, w2s = self.words[wt1], self.words[wt2]
        for k1, c1 in enumerate(v1):
            if c1 == 0:
                continue
            for k2, c2 in enumerate(v2):
                if c2 == 0:
                    continue
                out[idx[w1s[k1] + w2s[k2]]] += c1 * c2
        return self.reduce(target, tuple(out))

    def generator_vec(self, i: int):
        wt = tuple(1 if k == i else 0 for k in range(self.n))
        self.ensure_weight(wt)
        return wt, self.reduce(wt, self._dict_to_vec(wt, {(i,): Fraction(1)}))

    def power_divided(self, wt: Weight, v, m: int):
        """v^(m) = v^m / m! reduced (v a reduced vector of weight wt)."""
        target = tuple(x * m for x in wt)
        if m == 0:
            z = tuple([0] * self.n)
            return z, self.unit_vec()
        cur_wt, cur = wt, v
        for _ in range(m - 1):
            cur = self.mul(cur_wt, cur, wt, v)
            cur_wt = wt_add(cur_wt, wt)
        return target, vscale(Fraction(1, factorial(m)), cur)

    def unit_vec(self):
        return (Fraction(1),)

    def ad_divided(self, i: int, m: int, wt: Weight, v):
        """(ad e_i)^m / m! applied to a reduced vector."""
        target = tuple(wt[k] + (m if k == i else 0) for k in range(self.n))
        self.ensure_weight(target)
        gi_wt, gi = self.generator_vec(i)
        out = None
        for p in range(m + 1):
            q = m - p
            _, eip = self.power_divided(gi_wt, gi, p)
            _, eiq = self.power_divided(gi_wt, gi, q)
            wt_p = tuple(p if k == i else 0 for k in range(self.n))
            wt_q = tuple(q if k == i else 0 for k in range(self.n))
            left = self.mul(wt_p, eip, wt, v)
            term = self.mul(wt_add(wt_p, wt), left, wt_q, eiq)
            term = vscale((-1) ** q, term)
            out = term if out is None else vadd(out, term)
        return target, out

    # -- coproduct ----------------------------------------------------------

    def coproduct_vec(self, wt: Weight, v) -> dict:
        """Full coproduct of a reduced vector as {(wt1, wt2): pair-matrix}.

        The value for a split is a dict {(k1, k2): coeff} over word positions
        of the two factors (each factor reduced).
        """
        out: dict = {}
        words = self.words[wt]
        for k, c in enumerate(v):
            if c == 0:
                continue
            w = words[k]
            L = len(w)
            for mask in range(1 << L):
                left = tuple(w[t] for t in range(L) if mask >> t & 1)
                right = tuple(w[t] for t in range(L) if not mask >> t & 1)
                key = (_content(left, self.n), _content(right, self.n))
                bucket = out.setdefault(key, {})
                bucket[(left, right)] = bucket.get((left, right), Fraction(0)) + c
        reduced: dict = {}
        for (wl, wr), terms in out.items():
            self.ensure_weight(wl)
            self.ensure_weight(wr)
            il, ir = self.windex[wl], self.windex[wr]
            mat: dict = {}
            for (lw, rw), c in terms.items():
                if c == 0:
                    continue
                mat[(il[lw], ir[rw])] = mat.get((il[lw], ir[rw]), Fraction(0)) + c
            red = self._reduce_pair_matrix(wl, wr, mat)
            if red:
                reduced[(wl, wr)] = red
        return reduced

    def _reduce_pair_matrix(self, wl: Weight, wr: Weight, mat: dict) -> dict:
        """Reduce both tensor legs of a pair matrix modulo the ideal."""
        dl = len(self.words[wl])
        dr = len(self.words[wr])
        rows: dict = {}
        for (k1, k2), c in mat.items():
            rows.setdefault(k1, [Fraction(0)] * dr)[k2] += c
        out: dict = {}
        # reduce the right leg row by row, then the left leg column by column
        cols: dict = {}
        for k1, row in rows.items():
            red = self.reduce(wr, tuple(row))
            for k2, c in enumerate(red):
                if c != 0:
                    cols.setdefault(k2, [Fraction(0)] * dl)[k1] += c
        for k2, col in cols.items():
            red = self.reduce(wl, tuple(col))
            for k1, c in enumerate(red):
                if c != 0:
                    out[(k1, k2)] = c
        return out

    def reduced_coproduct_vec(self, wt: Weight, v) -> dict:
        """Coproduct minus the two primitive-like end terms."""
        full = self.coproduct_vec(wt, v)
        zero = tuple([0] * self.n)
        full.pop((wt, zero), None)
        full.pop((zero, wt), None)
        return {k: val for k, val in full.items() if val}

    # -- antipode -------------------------------------------------------------

    def antipode_vec(self, wt: Weight, v):
        out = [Fraction(0)] * len(self.words[wt])
        idx = self.windex[wt]
        for k, c in enumerate(v):
            if c == 0:
                continue
            w = self.words[wt][k]
            out[idx[tuple(reversed(w))]] += ((-1) ** len(w)) * c
        return self.reduce(wt, tuple(out))

    # -- primitives and integral structures ----------------------------------

    def primitive_basis(self, wt: Weight) -> list:
        """Basis of the weight-wt primitives (the root space over Q), found by
        solving the primitivity equation on the Serre quotient."""
        if wt in self._prim:
            return self._prim[wt]
        self.ensure_weight(wt)
        dim = len(self.words[wt])
        # coordinates: quotient complement = non-pivot word positions
        pivots = set(self.ideal[wt].pivots)
        free_pos = [k for k in range(dim) if k not in pivots]
        # unknown u = sum u_f * basis_f where basis_f = reduced unit vector at f
        basis_vecs = []
        for f in free_pos:
            unit = tuple(Fraction(1) if k == f else Fraction(0) for k in range(dim))
            basis_vecs.append(self.reduce(wt, unit))
        # assemble the reduced-coproduct matrix and take its kernel
        columns: list = []
        col_index: dict = {}
        rows = []
        for bv in basis_vecs:
            rc = self.reduced_coproduct_vec(wt, bv)
            row: dict = {}
            for split, mat in rc.items():
                for pos, c in mat.items():
                    key = (split, pos)
                    if key not in col_index:
                        col_index[key] = len(columns)
                        columns.append(key)
                    row[col_index[key]] = c
            rows.append(row)
        if not basis_vecs:
            self._prim[wt] = []
            return []
        ncols = len(columns)
        if ncols == 0:
            null = [tuple(Fraction(1) if t == s else Fraction(0)
                          for t in range(len(basis_vecs)))
                    for s in range(len(basis_vecs))]
        else:
            dense = [tuple(r.get(j, Fraction(0)) for j in range(ncols)) for r in rows]
            _, null = solve_linear(dense, tuple([Fraction(0)] * ncols))
        prim_rs = RowSpace(dim)
        for combo in null:
            v = tuple([Fraction(0)] * dim)
            for c, bv in zip(combo, basis_vecs):
                if c:
                    v = vadd(v, vscale(c, bv))
            prim_rs.add(v)
        self._prim[wt] = [tuple(r) for r in prim_rs.rows]
        return self._prim[wt]

    def primitive_dim(self, wt: Weight) -> int:
        return len(self.primitive_basis(wt))


def _multiset_permutations(items):
    """Distinct permutations of a list, as tuples (lexicographic)."""
    items = sorted(items)
    n = len(items)
    if n == 0:
        yield ()
        return
    while True:
        yield tuple(items)
        # next permutation
        i = n - 2
        while i >= 0 and items[i] >= items[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while items[j] <= items[i]:
            j -= 1
        items[i], items[j] = items[j], items[i]
        items[i + 1:] = reversed(items[i + 1:])


_slice_cache: dict = {}


def slice_for(matrix_entries: tuple, word_dim_cap: int = 100000) -> USlice:
    key = matrix_entries
    sl = _slice_cache.get(key)
    if sl is None:
        sl = USlice(matrix_entries, word_dim_cap)
        _slice_cache[key] = sl
    sl.word_dim_cap = max(sl.word_dim_cap, word_dim_cap)
    return sl
