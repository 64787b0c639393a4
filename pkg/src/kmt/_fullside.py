"""The full enveloping algebra: U^- . U^0 . U^+ with e/f straightening.

U^0 is the ring of integer-valued polynomials on Y in the binomial basis;
products of the three blocks are straightened using the defining relations
([e_i, f_j] = 0 for i != j, [e_i, f_i] = -coroot_i, and weight shifts for
moving U^0 past the unipotent blocks).  Everything is exact over Q with
integer structure constants on the lattice basis.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .errors import ResourceLimit
from .rootdata import RootDatum

HMono = tuple  # exponent tuple over the Y-basis: prod binom(y_k, n_k)


def _binom_poly_product(p: int, q: int) -> dict:
    """binom(y,p) binom(y,q) = sum_k c_k binom(y,k) with integer c_k,
    found by evaluation at y = 0..p+q (the evaluation matrix is triangular)."""
    top = p + q
    vals = [comb(y, p) * comb(y, q) for y in range(top + 1)]
    coeffs = [0] * (top + 1)
    for k in range(top + 1):
        c = vals[k] - sum(coeffs[j] * comb(k, j) for j in range(k))
        coeffs[k] = c
    return {k: c for k, c in enumerate(coeffs) if c}


def _binom_shift(n: int, c: int) -> dict:
    """binom(y + c, n) = sum_j binom(c, n - j) binom(y, j) (Vandermonde)."""
    out = {}
    for j in range(n + 1):
        val = _int_binom(c, n - j)
        if val:
            out[j] = val
    return out


def _int_binom(a: int, k: int) -> int:
    if k < 0:
        return 0
    num = 1
    den = 1
    for t in range(k):
        num *= a - t
        den *= t + 1
    assert num % den == 0
    return num // den


class CartanBlock:
    """U^0 for a rank-r lattice: basis prod_k binom(y_k, n_k)."""

    def __init__(self, rank: int):
        self.rank = rank
        self.one: dict = {tuple([0] * rank): Fraction(1)}

    def mul(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                for mono, c in self._mono_mul(m1, m2).items():
                    s = out.get(mono, Fraction(0)) + c1 * c2 * c
                    if s == 0:
                        out.pop(mono, None)
                    else:
                        out[mono] = s
        return out

    def _mono_mul(self, m1: HMono, m2: HMono) -> dict:
        parts = [{(): Fraction(1)}]
        acc = {(): Fraction(1)}
        for k in range(self.rank):
            table = _binom_poly_product(m1[k], m2[k])
            nxt: dict = {}
            for mono, c in acc.items():
                for deg, cc in table.items():
                    key = mono + (deg,)
                    nxt[key] = nxt.get(key, Fraction(0)) + c * cc
            acc = nxt
        return acc

    def shift(self, a: dict, delta: tuple) -> dict:
        """Substitute y_k -> y_k + delta_k (integer shifts)."""
        out: dict = {}
        for mono, c in a.items():
            expanded = {(): c}
            for k in range(self.rank):
                table = _binom_shift(mono[k], int(delta[k]))
                nxt: dict = {}
                for pref, cc in expanded.items():
                    for deg, s in table.items():
                        key = pref + (deg,)
                        nxt[key] = nxt.get(key, Fraction(0)) + cc * s
                expanded = nxt
            for mono2, cc in expanded.items():
                s = out.get(mono2, Fraction(0)) + cc
                if s == 0:
                    out.pop(mono2, None)
                else:
                    out[mono2] = s
        return out

    def linear(self, vector: tuple) -> dict:
        """The degree-one element sum_k v_k y_k in the binomial basis."""
        out = {}
        for k, v in enumerate(vector):
            if v:
                mono = tuple(1 if j == k else 0 for j in range(self.rank))
                out[mono] = Fraction(v)
        return out


class FullContext:
    """U^- . U^0 . U^+ with multiplication by straightening.

    The unipotent blocks are the one-sided contexts; the full PBW basis is
    (negative monomial, binomial monomial, positive monomial).  Products with
    either unipotent height beyond the bound carry the truncation flag of the
    one-sided contexts.  Coefficients are rational.
    """

    def __init__(self, datum: RootDatum, height_bound: int,
                 word_cap: int = 2000):
        from .envalg import build_context
        self.datum = datum
        self.height_bound = height_bound
        self.pos = build_context(datum, height_bound, "positive")
        self.neg = build_context(datum, height_bound, "negative")
        self.cartan = CartanBlock(datum.rank_Y)
        self.word_cap = word_cap
        self._straighten_cache: dict = {}

    # elements: dict {(fmono_index, hmono, emono_index): Fraction}

    def one(self) -> dict:
        zero_h = tuple([0] * self.datum.rank_Y)
        return {(0, zero_h, 0): Fraction(1)}

    def commutator_ef(self, i: int, j: int) -> dict:
        """[e_i, f_j] as a full element (zero unless i == j)."""
        e = self.element_e(self.pos.mono_index[((self.pos.basis_by_root[
            tuple(1 if k == i else 0 for k in range(self.datum.n))][0], 1),)])
        f = self.element_f(self.neg.mono_index[((self.neg.basis_by_root[
            tuple(1 if k == j else 0 for k in range(self.datum.n))][0], 1),)])
        ef, t1 = self.mul_flagged(e, f)
        fe, t2 = self.mul_flagged(f, e)
        return self.add(ef, self.scale(-1, fe))

    def element_e(self, pos_mono_index: int) -> dict:
        zero_h = tuple([0] * self.datum.rank_Y)
        return {(0, zero_h, pos_mono_index): Fraction(1)}

    def element_f(self, neg_mono_index: int) -> dict:
        zero_h = tuple([0] * self.datum.rank_Y)
        return {(neg_mono_index, zero_h, 0): Fraction(1)}

    def element_h(self, hmono: HMono) -> dict:
        return {(0, tuple(hmono), 0): Fraction(1)}

    def element_coroot(self, i: int) -> dict:
        lin = self.cartan.linear(self.datum.coroots[i])
        return {(0, mono, 0): c for mono, c in lin.items()}

    def add(self, a: dict, b: dict) -> dict:
        out = dict(a)
        for k, c in b.items():
            s = out.get(k, Fraction(0)) + c
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        return out

    def scale(self, c, a: dict) -> dict:
        c = Fraction(c)
        return {} if c == 0 else {k: c * v for k, v in a.items()}

    def counit(self, a: dict) -> Fraction:
        zero_h = tuple([0] * self.datum.rank_Y)
        return a.get((0, zero_h, 0), Fraction(0))

    # -- straightening core --------------------------------------------------

    def _e_word_through_f_word(self, eword: tuple, fword: tuple) -> list:
        """e-word times f-word as sum of (fword', hpoly, eword', coeff).

        Letters are simple indices; the middle polynomials stay in the
        binomial basis on Y.
        """
        key = (eword, fword)
        cached = self._straighten_cache.get(key)
        if cached is not None:
            return cached
        if not eword or not fword:
            out = [(fword, self.cartan.one, eword, Fraction(1))]
            self._straighten_cache[key] = out
            return out
        if len(self._straighten_cache) > self.word_cap:
            raise ResourceLimit("full-side straightening cache exceeded; "
                                "lower the height bound")
        i = eword[-1]
        head = eword[:-1]
        terms = self._letter_through_f_word(i, fword)
        out: list = []
        for fw, hp, has_e, coeff in terms:
            tail = (i,) if has_e else ()
            for fw2, hp2, ew2, c2 in self._e_word_through_f_word(head, fw):
                # assemble fw2 . hp2 . ew2 . hp . tail and move hp left
                # through ew2: p(h) picks up the shift by -weight(ew2)
                mu = self._eword_weight(ew2)
                hp_shift = self.cartan.shift(hp, tuple(-x for x in mu))
                mid = self.cartan.mul(hp2, hp_shift)
                out.append((fw2, mid, ew2 + tail, coeff * c2))
        merged = self._merge_terms(out)
        self._straighten_cache[key] = merged
        return merged

    def _letter_through_f_word(self, i: int, fword: tuple) -> list:
        """e_i . f-word = sum (fword', hpoly, has_e_i, coeff)."""
        if not fword:
            return [(fword, self.cartan.one, True, Fraction(1))]
        j = fword[0]
        rest = fword[1:]
        out = []
        for fw, hp, has_e, coeff in self._letter_through_f_word(i, rest):
            out.append(((j,) + fw, hp, has_e, coeff))
        if i == j:
            # e_i f_i = f_i e_i - coroot_i ; the coroot passes the rest with
            # a shift by the rest's weight (a sum of negative simple roots)
            lin = self.cartan.linear(self.datum.coroots[i])
            mu = self._fword_weight(rest)
            shifted = self.cartan.shift(lin, mu)
            for mono, c in shifted.items():
                out.append((rest, {mono: Fraction(1)}, False, -c))
        return self._merge_letter_terms(out)

    def _fword_weight(self, fword: tuple) -> tuple:
        """Weight of a negative word as the evaluation shift vector on Y:
        mu_k = -(sum of root covectors)(y_k)."""
        r = self.datum.rank_Y
        out = [0] * r
        for j in fword:
            for k in range(r):
                out[k] -= self.datum.root_covectors[j][k]
        return tuple(out)

    def _eword_weight(self, eword: tuple) -> tuple:
        r = self.datum.rank_Y
        out = [0] * r
        for j in eword:
            for k in range(r):
                out[k] += self.datum.root_covectors[j][k]
        return tuple(out)

    @staticmethod
    def _merge_terms(terms: list) -> list:
        acc: dict = {}
        for fw, hp, ew, coeff in terms:
            for mono, c in hp.items():
                key = (fw, mono, ew)
                acc[key] = acc.get(key, Fraction(0)) + coeff * c
        out = []
        grouped: dict = {}
        for (fw, mono, ew), c in acc.items():
            if c:
                grouped.setdefault((fw, ew), {})[mono] = c
        for (fw, ew), hp in sorted(grouped.items()):
            out.append((fw, hp, ew, Fraction(1)))
        return out

    @staticmethod
    def _merge_letter_terms(terms: list) -> list:
        acc: dict = {}
        for fw, hp, has_e, coeff in terms:
            for mono, c in hp.items():
                key = (fw, mono, has_e)
                acc[key] = acc.get(key, Fraction(0)) + coeff * c
        grouped: dict = {}
        for (fw, mono, has_e), c in acc.items():
            if c:
                grouped.setdefault((fw, has_e), {})[mono] = c
        return [(fw, hp, has_e, Fraction(1))
                for (fw, has_e), hp in sorted(grouped.items())]

    # -- multiplication --------------------------------------------------------

    def mul(self, a: dict, b: dict) -> dict:
        out, _ = self.mul_flagged(a, b)
        return out

    def mul_flagged(self, a: dict, b: dict) -> tuple:
        out: dict = {}
        truncated = False
        for (f1, h1, e1), c1 in a.items():
            for (f2, h2, e2), c2 in b.items():
                prod, flag = self._mono_product(f1, h1, e1, f2, h2, e2)
                truncated = truncated or flag
                for key, c in prod.items():
                    s = out.get(key, Fraction(0)) + c1 * c2 * c
                    if s == 0:
                        out.pop(key, None)
                    else:
                        out[key] = s
        return out, truncated

    def _mono_product(self, f1, h1, e1, f2, h2, e2) -> tuple:
        # words of the unipotent monomials (rational combinations)
        e1_words = self._mono_words(self.pos, e1)
        f2_words = self._mono_words(self.neg, f2)
        out: dict = {}
        truncated = False
        for ew, ce in e1_words.items():
            for fw, cf in f2_words.items():
                for fw2, hp, ew2, c in self._e_word_through_f_word(ew, fw):
                    # f1 . h1 . [fw2 hp ew2] . h2 . e2
                    mu_f = self._fword_weight(fw2)
                    h1_shift = self.cartan.shift({h1: Fraction(1)}, mu_f)
                    mu_e = self._eword_weight(ew2)
                    h2_shift = self.cartan.shift({h2: Fraction(1)},
                                                 tuple(-x for x in mu_e))
                    mid = self.cartan.mul(h1_shift, self.cartan.mul(hp, h2_shift))
                    f_part = self._word_times_mono(self.neg, f1, fw2)
                    e_part = self._mono_times_word_right(self.pos, ew2, e2)
                    if f_part is None or e_part is None:
                        truncated = True
                        continue
                    for fm, cfm in f_part.items():
                        for em, cem in e_part.items():
                            for hm, ch in mid.items():
                                key = (fm, hm, em)
                                val = ce * cf * c * cfm * cem * ch
                                s = out.get(key, Fraction(0)) + val
                                if s == 0:
                                    out.pop(key, None)
                                else:
                                    out[key] = s
        return out, truncated

    def _mono_words(self, ctx, mono_index: int) -> dict:
        """A one-sided PBW monomial as {word: coefficient}."""
        wt, vec = ctx.mono_vec[mono_index]
        words = ctx.slice.words[wt]
        return {words[k]: c for k, c in enumerate(vec) if c}

    def _word_times_mono(self, ctx, mono_index: int, word: tuple):
        """(monomial) . (word) expanded back into PBW coordinates."""
        if not word:
            return {mono_index: Fraction(1)}
        wt0, v0 = ctx.mono_vec[mono_index]
        wtw = self._word_weight_tuple(ctx, word)
        target = tuple(a + b for a, b in zip(wt0, wtw))
        if sum(target) > self.height_bound:
            return None
        ctx.slice.ensure_weight(target)
        vw = ctx.slice.dict_reduce(wtw, {word: Fraction(1)})
        prod = ctx.slice.mul(wt0, v0, wtw, vw)
        return self._vec_to_mono_dict(ctx, target, prod)

    def _mono_times_word_right(self, ctx, word: tuple, mono_index: int):
        if not word:
            return {mono_index: Fraction(1)}
        wt0, v0 = ctx.mono_vec[mono_index]
        wtw = self._word_weight_tuple(ctx, word)
        target = tuple(a + b for a, b in zip(wt0, wtw))
        if sum(target) > self.height_bound:
            return None
        ctx.slice.ensure_weight(target)
        vw = ctx.slice.dict_reduce(wtw, {word: Fraction(1)})
        prod = ctx.slice.mul(wtw, vw, wt0, v0)
        return self._vec_to_mono_dict(ctx, target, prod)

    @staticmethod
    def _word_weight_tuple(ctx, word: tuple) -> tuple:
        n = ctx.datum.n
        out = [0] * n
        for ch in word:
            out[ch] += 1
        return tuple(out)

    def _vec_to_mono_dict(self, ctx, wt, vec) -> dict:
        coords = ctx._vec_to_coords(wt, vec)
        return dict(coords)
