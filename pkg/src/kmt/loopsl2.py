"""Matrix realizations for the affine sl2 loop group and SL_m lattice chains.

Everything is exact: Laurent polynomials over Q with a p-adic valuation on
coefficients model the valued field, and truncated series carry an explicit
window so each operation can state what it knows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Optional

from .errors import (NotAffineContext, NotInUPlus, PreconditionFailed,
                     TruncationTooShallow, UnsupportedOmega)
from .rings import INF, PAdicRationals

Poly = dict  # {degree: Fraction}, no zero values


def poly(items=()) -> Poly:
    out = {}
    for d, c in dict(items).items():
        c = Fraction(c)
        if c:
            out[int(d)] = c
    return out


def p_add(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for d, c in b.items():
        s = out.get(d, Fraction(0)) + c
        if s == 0:
            out.pop(d, None)
        else:
            out[d] = s
    return out


def p_neg(a: Poly) -> Poly:
    return {d: -c for d, c in a.items()}


def p_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for d1, c1 in a.items():
        for d2, c2 in b.items():
            d = d1 + d2
            s = out.get(d, Fraction(0)) + c1 * c2
            if s == 0:
                out.pop(d, None)
            else:
                out[d] = s
    return out


def p_scale(c, a: Poly) -> Poly:
    c = Fraction(c)
    if c == 0:
        return {}
    return {d: c * x for d, x in a.items()}


def p_deg(a: Poly) -> Optional[int]:
    return max(a) if a else None


def p_low(a: Poly) -> Optional[int]:
    return min(a) if a else None


def p_truncate(a: Poly, window) -> Poly:
    lo, hi = window
    return {d: c for d, c in a.items() if lo <= d <= hi}


ONE = {0: Fraction(1)}


@dataclass(frozen=True, eq=False)
class LaurentMatrix:
    """Square matrix of Laurent polynomials; ``window`` marks a truncated
    series (entries outside the window are unknown, not zero)."""

    m: int
    entries: tuple               # tuple of tuples of Poly (as frozen dicts)
    window: Optional[tuple] = None

    @staticmethod
    def build(m: int, rows, window=None) -> "LaurentMatrix":
        ent = tuple(tuple(poly(rows[i][j]) for j in range(m)) for i in range(m))
        return LaurentMatrix(m, ent, window)

    @staticmethod
    def identity(m: int, window=None) -> "LaurentMatrix":
        return LaurentMatrix.build(
            m, [[ONE if i == j else {} for j in range(m)] for i in range(m)],
            window)

    def entry(self, i: int, j: int) -> Poly:
        return dict(self.entries[i][j])

    def __mul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if self.m != other.m:
            raise PreconditionFailed("size mismatch")
        window = _mul_window(self.window, other.window)
        rows = []
        for i in range(self.m):
            row = []
            for j in range(self.m):
                acc: Poly = {}
                for k in range(self.m):
                    acc = p_add(acc, p_mul(self.entries[i][k],
                                           other.entries[k][j]))
                if window is not None:
                    acc = p_truncate(acc, window)
                row.append(acc)
            rows.append(row)
        return LaurentMatrix.build(self.m, rows, window)

    def sub_identity(self) -> "LaurentMatrix":
        rows = [[p_add(self.entry(i, j), p_neg(ONE) if i == j else {})
                 for j in range(self.m)] for i in range(self.m)]
        return LaurentMatrix.build(self.m, rows, self.window)

    def det2(self) -> Poly:
        if self.m != 2:
            raise PreconditionFailed("det2 needs a 2x2 matrix")
        d = p_add(p_mul(self.entries[0][0], self.entries[1][1]),
                  p_neg(p_mul(self.entries[0][1], self.entries[1][0])))
        if self.window is not None:
            d = p_truncate(d, self.window)
        return d

    def inverse2(self) -> "LaurentMatrix":
        """Inverse of an SL2 matrix (determinant one within the window)."""
        if self.m != 2:
            raise PreconditionFailed("inverse2 needs a 2x2 matrix")
        a, b = self.entries[0]
        c, d = self.entries[1]
        return LaurentMatrix.build(2, [[dict(d), p_neg(b)],
                                       [p_neg(c), dict(a)]], self.window)

    def truncate(self, window) -> "LaurentMatrix":
        rows = [[p_truncate(self.entry(i, j), window) for j in range(self.m)]
                for i in range(self.m)]
        return LaurentMatrix.build(self.m, rows, window)

    def is_polynomial(self) -> bool:
        return all(all(d >= 0 for d in self.entries[i][j])
                   for i in range(self.m) for j in range(self.m))

    def __eq__(self, other):
        return (isinstance(other, LaurentMatrix) and self.m == other.m
                and self.entries == other.entries)


def _mul_window(w1, w2):
    if w1 is None and w2 is None:
        return None
    lo1, hi1 = w1 if w1 else (0, 10**9)
    lo2, hi2 = w2 if w2 else (0, 10**9)
    return (lo1 + lo2, min(hi1 + lo2, hi2 + lo1, 10**9))


def u_s(q: Poly) -> LaurentMatrix:
    return LaurentMatrix.build(2, [[ONE, poly(q)], [{}, ONE]])


def u_i(r: Poly) -> LaurentMatrix:
    return LaurentMatrix.build(2, [[ONE, {}], [poly(r), ONE]])


# ---------------------------------------------------------------------------
# Valued field model


@dataclass(frozen=True)
class ValuedFieldModel:
    """Q with the p-adic valuation: O, uniformizer p, value group Z."""

    p: int = 2

    @property
    def ring(self) -> PAdicRationals:
        return PAdicRationals(self.p)

    def omega(self, x) -> Fraction:
        return self.ring.valuation(Fraction(x))

    def in_O(self, x) -> bool:
        return Fraction(x) == 0 or self.omega(x) >= 0

    def uniformizer(self) -> Fraction:
        return Fraction(self.p)

    def poly_min_val(self, q: Poly) -> Fraction:
        if not q:
            return INF
        return min(self.omega(c) for c in q.values())


# ---------------------------------------------------------------------------
# The natural representation of the loop algebra


def pi_h_divided(n: int, p: int) -> LaurentMatrix:
    """pi(h_n^{[p]}) = t^{np} binom(h+p-1, p) entrywise at h = diag(1, -1)."""
    if n == 0:
        raise NotAffineContext("h_n needs n != 0")
    upper = Fraction(comb(1 + p - 1, p))            # binom(p, p) = 1
    lower = Fraction(_binom_int(-1 + p - 1, p))     # binom(p-2, p)
    return LaurentMatrix.build(
        2, [[{n * p: upper} if upper else {}, {}],
            [{}, {n * p: lower} if lower else {}]])


def _binom_int(a: int, k: int) -> Fraction:
    """binom(a, k) for integer a (possibly negative), integer k >= 0."""
    num = Fraction(1)
    for t in range(k):
        num *= Fraction(a - t, t + 1)
    return num


def pi_exp_h(n: int, lam, window: int) -> LaurentMatrix:
    """pi([exp] lam h_n) = diag(1 + lam t^n + ... , 1 - lam t^n), truncated to
    degree window in t."""
    lam = Fraction(lam)
    u: Poly = {}
    k = 0
    while n * k <= window:
        u[n * k] = lam ** k
        k += 1
    v = poly({0: 1, n: -lam})
    return LaurentMatrix.build(2, [[u, {}], [{}, v]], window=(0, window))


def pi_lambda_terms(n: int, p_max: int) -> list:
    """pi(h_n^{[p]}) for p = 0..p_max via the polynomial recurrence applied to
    the commuting diagonal images, an independent route to the same matrices."""
    from .envalg import mitzman_lambda
    out = []
    for p in range(p_max + 1):
        upper = mitzman_lambda(p, [Fraction(1) for _ in range(max(p, 1))])
        lower = mitzman_lambda(p, [Fraction(-1) for _ in range(max(p, 1))])
        out.append(LaurentMatrix.build(
            2, [[{n * p: upper} if upper else {}, {}],
                [{}, {n * p: lower} if lower else {}]]))
    return out


def pi_image(x, lam=None, window: int = 8) -> LaurentMatrix:
    """Natural-representation image of a loop-algebra element.

    Accepts an affine-sl2 context element (exact Laurent matrix), an
    exponential sequence (with ``lam``: the twisted exponential as a windowed
    series), or a pair ("h", n) with ``lam`` for the diagonal loop element.
    """
    if isinstance(x, tuple) and len(x) == 2 and x[0] == "h":
        if lam is None:
            raise PreconditionFailed("a scalar is needed for [exp] lam h_n")
        return pi_exp_h(int(x[1]), lam, window)
    from .envalg import ExponentialSequence
    if isinstance(x, ExponentialSequence):
        if lam is None:
            raise PreconditionFailed("a scalar is needed for a sequence")
        lam = Fraction(lam)
        out = None
        step = 1
        for n, term in enumerate(x.terms):
            mat = pi_algebra_element(term)
            if n == 1:
                degs = [d for i in range(2) for j in range(2)
                        for d in mat.entry(i, j)]
                step = max(min(degs, default=1), 1)
            scaled = LaurentMatrix.build(
                2, [[{d: lam ** n * c for d, c in mat.entry(i, j).items()}
                     for j in range(2)] for i in range(2)])
            out = scaled if out is None else LaurentMatrix.build(
                2, [[p_add(out.entry(i, j), scaled.entry(i, j))
                     for j in range(2)] for i in range(2)])
        # the series is only complete up to the sequence depth
        return out.truncate((0, min(window, x.n_max * step)))
    return pi_algebra_element(x)


def pi_algebra_element(elem) -> LaurentMatrix:
    """Image of an affine-sl2 context element under the natural
    representation (exact Laurent matrix over Q)."""
    from .envalg import _sl2_pi_vec
    ctx = elem.context
    if ctx.datum.matrix.entries != ((2, -2), (-2, 2)):
        raise NotAffineContext("element not in an affine sl2 context")
    acc: dict = {}
    for k, c in elem.coeffs.items():
        wt, v = ctx.mono_vec[k]
        mat = _sl2_pi_vec(ctx.slice, wt, v)
        for rc, pl in mat.items():
            cell = acc.setdefault(rc, {})
            for d, x in pl.items():
                s = cell.get(d, Fraction(0)) + Fraction(c) * x
                if s == 0:
                    cell.pop(d, None)
                else:
                    cell[d] = s
    rows = [[acc.get((i, j), {}) for j in range(2)] for i in range(2)]
    return LaurentMatrix.build(2, rows)


# ---------------------------------------------------------------------------
# Free product normal form in U+


@dataclass
class NormalForm:
    factors: list   # list of ("s" | "i", Poly)

    def recompose(self) -> LaurentMatrix:
        out = LaurentMatrix.identity(2)
        for kind, q in self.factors:
            out = out * (u_s(q) if kind == "s" else u_i(q))
        return out

    def length(self) -> int:
        return len(self.factors)


def check_in_u_plus(g: LaurentMatrix):
    """g in SL2(K[t]) and unipotent upper triangular mod t."""
    if g.m != 2 or g.window is not None:
        raise NotInUPlus("need an exact 2x2 polynomial matrix")
    if not g.is_polynomial():
        raise NotInUPlus("entries must be polynomials in t")
    if g.det2() != ONE:
        raise NotInUPlus("determinant must be 1")
    a, d = g.entry(0, 0), g.entry(1, 1)
    c = g.entry(1, 0)
    if a.get(0) != Fraction(1) or d.get(0) != Fraction(1) or c.get(0):
        raise NotInUPlus("must be unipotent upper triangular mod t")


def free_product_normal_form(g: LaurentMatrix) -> NormalForm:
    """Unique alternating factorization over u^s(K[t]) and u^i(tK[t]).

    Peels left factors by polynomial division; the u^i division is
    constrained to tK[t] quotients (the constant term stays in u^s steps),
    so degrees strictly decrease and the normal form is reached.
    """
    check_in_u_plus(g)
    factors: list = []
    a, b = g.entry(0, 0), g.entry(0, 1)
    c, d = g.entry(1, 0), g.entry(1, 1)
    while c:
        da, dc = p_deg(a) or 0, p_deg(c)
        if da >= dc:
            q, r = _poly_divmod(a, c)
            factors.append(("s", q))
            # u_s(-q) * g
            a, b = r, p_add(b, p_neg(p_mul(q, d)))
        else:
            q, r = _poly_divmod(c, a)
            q0 = q.pop(0, None)
            if q0 is not None:
                r = p_add(r, p_scale(q0, a))
            if not q:
                raise NotInUPlus("division stalled; matrix not in U+")
            factors.append(("i", q))
            c, d = r, p_add(d, p_neg(p_mul(q, b)))
    # residual is upper triangular with unit diagonal: a = 1, b remains
    if a != ONE:
        raise NotInUPlus("unit diagonal expected at the end of peeling")
    if b:
        factors.append(("s", b))
    return NormalForm(factors)


def _poly_divmod(a: Poly, b: Poly):
    """a = q b + r with deg r < deg b, over Q[t]."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q: Poly = {}
    r = dict(a)
    db = p_deg(b)
    lead = b[db]
    while r and p_deg(r) >= db:
        dr = p_deg(r)
        coeff = r[dr] / lead
        q[dr - db] = q.get(dr - db, Fraction(0)) + coeff
        r = p_add(r, p_neg(p_scale(coeff, {d + dr - db: c for d, c in b.items()})))
    return poly(q), poly(r)


@dataclass
class IntegralMembership:
    member: bool
    witness: Optional[object] = None   # offending factor or entry


def integral_membership(g: LaurentMatrix, subgroup: str,
                        model: ValuedFieldModel) -> IntegralMembership:
    """U0_plusplus: every normal-form factor has O-coefficients.
    U0_pm_plus: the matrix entries lie in O[t] (with the mod-t shape)."""
    check_in_u_plus(g)
    if subgroup == "U0_plusplus":
        nf = free_product_normal_form(g)
        for kind, q in nf.factors:
            if model.poly_min_val(q) < 0:
                return IntegralMembership(False, (kind, q))
        return IntegralMembership(True)
    if subgroup == "U0_pm_plus":
        for i in range(2):
            for j in range(2):
                ent = g.entry(i, j)
                if model.poly_min_val(ent) < 0:
                    return IntegralMembership(False, ((i, j), ent))
        return IntegralMembership(True)
    raise PreconditionFailed(f"unknown subgroup {subgroup!r}")


def strict_inclusion_witness(model: ValuedFieldModel) -> LaurentMatrix:
    """(1 - pi t, t; -pi^2 t, 1 + pi t) for the uniformizer pi."""
    w = model.uniformizer()
    return LaurentMatrix.build(2, [[{0: 1, 1: -w}, {1: 1}],
                                   [{1: -w * w}, {0: 1, 1: w}]])


# ---------------------------------------------------------------------------
# Lattice-chain filtration for SL_m over k((t))


@dataclass(frozen=True)
class LatticeChain:
    """The standard periodic chain V_{am+b} = t^a V_b on k[[t]]^m."""

    m: int

    def shifts(self, index: int) -> tuple:
        a, b = divmod(index, self.m)
        # V_b = R e_1 + ... + R e_{m-b} + R t e_{m-b+1} + ... + R t e_m
        return tuple(a + (1 if j >= self.m - b else 0) for j in range(self.m))


@dataclass
class FiltrationLevel:
    level: int
    exact: bool    # False: window-limited, the true level is >= this


def lattice_filtration_level(g: LaurentMatrix, chain: LatticeChain,
                             max_level: Optional[int] = None) -> FiltrationLevel:
    """Largest n with (g - 1)V_i inside V_{i+n} for all i (one period).

    A truncated series only certifies levels up to m * window-top; beyond it
    the result is reported inexact (identity comes back as the cap), and an
    explicit ``max_level`` above the certifiable cap raises."""
    if g.window is None:
        raise PreconditionFailed("filtration level needs a windowed series")
    lo, hi = g.window
    m = chain.m
    diff = g.sub_identity()
    known = []
    for i in range(m):
        src = chain.shifts(i)
        for j in range(m):        # source basis vector t^{src_j} e_j
            for k in range(m):
                ord_ent = p_low(diff.entry(k, j))
                if ord_ent is not None:
                    # constraint: ord_ent + src_j >= shifts(i+n)_k
                    known.append((i, k, ord_ent + src[j]))
    n_cap = m * hi   # all unknown (>= hi+1) orders certify levels up to here
    if max_level is not None and max_level > n_cap:
        raise TruncationTooShallow(
            f"window certifies levels up to {n_cap} < requested {max_level}")
    best = 0
    n = 1
    while n <= n_cap:
        if any(o < chain.shifts(i + n)[k] for i, k, o in known):
            return FiltrationLevel(n - 1, True)
        best = n
        n += 1
    return FiltrationLevel(best, False)


# ---------------------------------------------------------------------------
# Congruence subgroups for the two-point filter of the affine apartment


@dataclass
class CongruenceReport:
    which: str
    member: bool
    witness: Optional[object] = None


def _coeff_conditions(g: LaurentMatrix, model: ValuedFieldModel, p: int,
                      polynomial: bool, variable_sign: int) -> CongruenceReport:
    """a,d = 1 and c = 0 modulo pi^p t^{sign}, inside SL2(O[[t^{sign}]])."""
    which = "pm" if polynomial else "ma"
    s = variable_sign
    for i in range(2):
        for j in range(2):
            ent = g.entry(i, j)
            for d, c in ent.items():
                if s * d < 0:
                    return CongruenceReport(which, False, ((i, j), d, "support"))
                if model.omega(c) < 0:
                    return CongruenceReport(which, False, ((i, j), d, "integrality"))
    for (i, j) in ((0, 0), (1, 1)):
        ent = g.entry(i, j)
        base = p_add(ent, p_neg(ONE))
        for d, c in base.items():
            if d == 0:
                return CongruenceReport(which, False, ((i, j), 0, "diagonal"))
            if model.omega(c) < p:
                return CongruenceReport(which, False, ((i, j), d, "congruence"))
    ent = g.entry(1, 0)
    for d, c in ent.items():
        if d == 0 or model.omega(c) < p:
            return CongruenceReport(which, False, ((1, 0), d, "congruence"))
    return CongruenceReport(which, True)


def uma_membership_sl2(g: LaurentMatrix, p: int, which: str,
                       model: Optional[ValuedFieldModel] = None) -> CongruenceReport:
    """The stated congruence sets for Omega = {0, z}, alpha_1(z) = p, delta(z)=0.

    which: "ma+" | "pm+" | "ma-" | "nm-" | "V" | "N_hat" | "V.N_hat".
    The series cases expect positive-degree (resp. negative-degree) support;
    the polynomial cases expect exact Laurent polynomial matrices.
    """
    if model is None:
        model = ValuedFieldModel(2)
    if p < 0:
        raise UnsupportedOmega("p must be a natural number")
    if which == "ma+":
        return _coeff_conditions(g, model, p, polynomial=False, variable_sign=1)
    if which == "pm+":
        if not g.is_polynomial():
            return CongruenceReport(which, False, ("support", "t"))
        return _coeff_conditions(g, model, p, polynomial=True, variable_sign=1)
    if which in ("ma-", "nm-"):
        # mirror in t^{-1}: a,d = 1 mod pi^p t^{-1}; b = 0 mod t^{-1};
        # c = 0 mod pi^p
        for i in range(2):
            for j in range(2):
                for d, c in g.entry(i, j).items():
                    if d > 0:
                        return CongruenceReport(which, False, ((i, j), d, "support"))
                    if model.omega(c) < 0:
                        return CongruenceReport(which, False, ((i, j), d, "integrality"))
        for (i, j) in ((0, 0), (1, 1)):
            base = p_add(g.entry(i, j), p_neg(ONE))
            for d, c in base.items():
                if d == 0 or model.omega(c) < p:
                    return CongruenceReport(which, False, ((i, j), d, "congruence"))
        for d, c in g.entry(0, 1).items():
            if d == 0:
                return CongruenceReport(which, False, ((0, 1), d, "congruence"))
        for d, c in g.entry(1, 0).items():
            if model.omega(c) < p:
                return CongruenceReport(which, False, ((1, 0), d, "congruence"))
        return CongruenceReport(which, True)
    if which == "V":
        # SL2(O[t, 1/t]) with a,d = 1 and c = 0 modulo pi^p
        for i in range(2):
            for j in range(2):
                for d, c in g.entry(i, j).items():
                    if model.omega(c) < 0:
                        return CongruenceReport(which, False, ((i, j), d, "integrality"))
        for (i, j) in ((0, 0), (1, 1)):
            base = p_add(g.entry(i, j), p_neg(ONE))
            for d, c in base.items():
                if model.omega(c) < p:
                    return CongruenceReport(which, False, ((i, j), d, "congruence"))
        for d, c in g.entry(1, 0).items():
            if model.omega(c) < p:
                return CongruenceReport(which, False, ((1, 0), d, "congruence"))
        return CongruenceReport(which, True)
    if which == "N_hat":
        # diagonal (u t^n, u^-1 t^-n) with u a unit (p >= 1)
        if p < 1:
            raise UnsupportedOmega("the diagonal description needs p >= 1")
        if g.entry(0, 1) or g.entry(1, 0):
            return CongruenceReport(which, False, ("offdiagonal",))
        a, d = g.entry(0, 0), g.entry(1, 1)
        if len(a) != 1 or len(d) != 1:
            return CongruenceReport(which, False, ("monomial",))
        (na, ca), = a.items()
        (nd, cd), = d.items()
        ok = (na == -nd and ca * cd == 1 and model.omega(ca) == 0)
        return CongruenceReport(which, ok)
    if which == "V.N_hat":
        return CongruenceReport(which, in_V_N_hat(g, p, model))
    raise UnsupportedOmega(f"no congruence data for {which!r}")


def in_V_N_hat(g: LaurentMatrix, p: int, model: ValuedFieldModel,
               n_range: Optional[range] = None) -> bool:
    """Is g = v . diag(u t^n, u^-1 t^-n) with v in V_Omega and u a unit?

    For each candidate n the conditions on v = g . n^-1 are mechanical; the
    unit u only rescales by valuation zero, so the per-coefficient valuation
    tests do not depend on it beyond the two unit-consistency constraints.
    """
    if n_range is None:
        degs = [d for i in range(2) for j in range(2)
                for d in g.entry(i, j)]
        span = max((abs(d) for d in degs), default=0) + 1
        n_range = range(-span, span + 1)
    for n in n_range:
        # v = g * diag(u^-1 t^-n, u t^n): columns scale by u^-1 t^-n, u t^n
        av = {d - n: c for d, c in g.entry(0, 0).items()}   # times u^-1
        cv = {d - n: c for d, c in g.entry(1, 0).items()}   # times u^-1
        bv = {d + n: c for d, c in g.entry(0, 1).items()}   # times u
        dv = {d + n: c for d, c in g.entry(1, 1).items()}   # times u
        # integrality of all entries (u is a unit: valuations unchanged)
        if any(model.omega(c) < 0 for e in (av, bv, cv, dv) for c in e.values()):
            continue
        # c = 0 mod pi^p
        if any(model.omega(c) < p for c in cv.values()):
            continue
        # a = 1 mod pi^p: constant coefficient A u^-1 = 1 needs omega(A) = 0;
        # all other coefficients need omega >= p
        A = av.get(0, Fraction(0))
        D = dv.get(0, Fraction(0))
        if A == 0 or model.omega(A) != 0 or D == 0 or model.omega(D) != 0:
            continue
        if any(model.omega(c) < p for d, c in av.items() if d != 0):
            continue
        if any(model.omega(c) < p for d, c in dv.items() if d != 0):
            continue
        # unit consistency: u = A and u^-1 = D modulo pi^p, i.e. A D = 1 mod pi^p
        if model.omega(A * D - 1) < p:
            continue
        return True
    return False


def two_point_filter_witness(p: int, model: ValuedFieldModel) -> LaurentMatrix:
    """(1 + pi^{p-1} t, 1; -pi^{2p-2} t^2, 1 - pi^{p-1} t)."""
    if p < 1:
        raise PreconditionFailed("p must be >= 1")
    w = model.uniformizer() ** (p - 1)
    return LaurentMatrix.build(2, [[{0: 1, 1: w}, {0: 1}],
                                   [{2: -w * w}, {0: 1, 1: -w}]])


@dataclass
class OmegaWitnessReport:
    p: int
    fixes_origin: bool
    fixes_z: bool
    origin_factors: list
    z_factors: list
    in_V_N_hat: bool


def omega_witness_report(p: int, model: Optional[ValuedFieldModel] = None
                         ) -> OmegaWitnessReport:
    """The two-point filter witness: explicit U_0- and U_z-factorizations
    certify membership in the fixator while the V.N_hat test fails (p >= 2).

    factor roots: u^s(c t^n) is the real root alpha_1 + n delta, u^i(c t^n)
    is alpha_0 + (n-1) delta; the admissibility levels are f_x(root) =
    -root(x) at each of the two points.
    """
    if model is None:
        model = ValuedFieldModel(2)
    g = two_point_filter_witness(p, model)
    w = model.uniformizer()
    # factorization 1: u^i(-pi^{p-1} t) u^s(1) u^i(pi^{p-1} t)   (U_0-levels)
    f1 = [("i", poly({1: -w ** (p - 1)})), ("s", poly({0: 1})),
          ("i", poly({1: w ** (p - 1)}))]
    # factorization 2: u^s(-pi^{1-p}/t) u^i(-pi^{2p-2} t^2) u^s(pi^{1-p}/t)
    f2 = [("s", poly({-1: -Fraction(1) / w ** (p - 1)})),
          ("i", poly({2: -w ** (2 * p - 2)})),
          ("s", poly({-1: Fraction(1) / w ** (p - 1)}))]

    def recompose(fs):
        out = LaurentMatrix.identity(2)
        for kind, q in fs:
            out = out * (u_s(q) if kind == "s" else u_i(q))
        return out

    def factor_levels(fs, point_levels):
        """check omega(coefficient) >= f_point(root) per factor term."""
        report = []
        ok = True
        for kind, q in fs:
            for d, c in q.items():
                if kind == "s":
                    root = ("alpha1+n*delta", d)
                    level = point_levels("s", d)
                else:
                    root = ("alpha0+n*delta", d - 1)
                    level = point_levels("i", d)
                good = model.omega(c) >= level
                ok = ok and good
                report.append({"kind": kind, "deg": d, "coeff": str(c),
                               "omega": str(model.omega(c)),
                               "level": str(level), "ok": good})
        return ok, report

    # f_x(root) = -root(x); at 0 everything is 0; at z: alpha_1(z) = p,
    # delta(z) = 0 so (alpha_1 + n delta)(z) = p, (alpha_0 + n delta)(z) = -p.
    def levels_origin(kind, d):
        return Fraction(0)

    def levels_z(kind, d):
        return Fraction(-p) if kind == "s" else Fraction(p)

    ok0, rep0 = factor_levels(f1, levels_origin)
    okz, repz = factor_levels(f2, levels_z)
    ok0 = ok0 and recompose(f1) == g
    okz = okz and recompose(f2) == g
    return OmegaWitnessReport(p, ok0, okz, rep0, repz,
                              in_V_N_hat(g, p, model))
