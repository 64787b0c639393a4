"""Pro-unipotent group elements as truncated group-like algebra elements.

Products, inverses, the unique exponential-product factorization, subgroup
decompositions, valuation-level membership, the density counterexample over
F2, and the conjugation solver.  Everything happens at the explicit height
truncation of the ambient context; "equal" always means equal at truncation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from . import rings
from .envalg import (AlgebraContext, AlgebraElement, build_context,
                     exponential_sequence, twisted_exp)
from .errors import (CharacterDegenerate, ContextMismatch, NotClosed,
                     NotGroupLike, NotIdeal, PreconditionFailed,
                     SupportEscapesPsi)
from .rootdata import (Coords, enumerate_roots, height, is_closed_set,
                       is_ideal_set, simply_connected_datum, validate_matrix)
from ._ucore import wt_height


# ---------------------------------------------------------------------------
# Group-like elements


def is_group_like(u: AlgebraElement) -> bool:
    """Counit 1 and coproduct u (x) u, compared at the truncation."""
    ctx = u.context
    r = ctx.ring
    if u.counit() != r.one:
        return False
    cop = u.coproduct()
    H = ctx.height_bound
    expected = {}
    for k1, c1 in u.coeffs.items():
        h1 = wt_height(ctx.mono_weight[k1])
        for k2, c2 in u.coeffs.items():
            if h1 + wt_height(ctx.mono_weight[k2]) > H:
                continue
            expected[(k1, k2)] = r.mul(c1, c2)
    expected = {k: v for k, v in expected.items() if not r.is_zero(v)}
    return cop == expected


@dataclass(frozen=True)
class GroupLikeElement:
    """A certified group-like element of the truncated algebra."""

    element: AlgebraElement

    def __post_init__(self):
        if not is_group_like(self.element):
            raise NotGroupLike("element fails the group-like certificate")

    @property
    def context(self) -> AlgebraContext:
        return self.element.context

    def __mul__(self, other: "GroupLikeElement") -> "GroupLikeElement":
        return GroupLikeElement(self.element * other.element)

    def inverse(self) -> "GroupLikeElement":
        return GroupLikeElement(self.element.antipode())


def exp_element(ctx: AlgebraContext, basis_index: int, lam) -> AlgebraElement:
    seq = exponential_sequence(ctx, basis_index)
    return twisted_exp(seq, lam)


def _inverse_exp(ctx: AlgebraContext, basis_index: int, lam) -> AlgebraElement:
    return exp_element(ctx, basis_index, lam).antipode()


# ---------------------------------------------------------------------------
# Factorization (Prop-3.2-style unique product extraction)


@dataclass
class FactoredForm:
    context: AlgebraContext
    entries: list              # list of (basis_index, lambda) in peel order
    sequence_fingerprint: str = ""

    def evaluate(self) -> AlgebraElement:
        out = self.context.one()
        for bidx, lam in self.entries:
            out = out * exp_element(self.context, bidx, lam)
        return out

    def coefficients(self) -> list:
        return [lam for _, lam in self.entries]

    def nonzero(self) -> list:
        r = self.context.ring
        return [(b, lam) for b, lam in self.entries if not r.is_zero(lam)]


def factorize_in_order(u: AlgebraElement, order: Sequence[int],
                       require_exhaust: bool = False) -> list:
    """Peel [exp]-factors in the given basis order; returns (index, lambda).

    The order must be cone-safe: no positive combination of later roots may
    equal an earlier root (weight-height-ascending orders and slope-ordered
    nilpotent intervals both qualify).
    """
    ctx = u.context
    r = ctx.ring
    rest = u
    out = []
    for bidx in order:
        mono = ctx.mono_index[((bidx, 1),)]
        lam = rest.coeffs.get(mono, r.zero)
        out.append((bidx, lam))
        if not r.is_zero(lam):
            rest = _inverse_exp(ctx, bidx, lam) * rest
    if require_exhaust and rest != ctx.one():
        raise NotGroupLike("residual after exhausting the peel order")
    return out


def factorize(u, psi: Optional[Iterable[Coords]] = None) -> FactoredForm:
    """Unique factorization of a group-like element over the context basis.

    With ``psi`` given, only basis elements of roots in psi are used; a
    nontrivial residual raises SupportEscapesPsi.
    """
    elem = u.element if isinstance(u, GroupLikeElement) else u
    ctx = elem.context
    if not is_group_like(elem):
        raise NotGroupLike("factorize needs a group-like element")
    if psi is None:
        order = [b.index for b in ctx.basis]
    else:
        pset = {tuple(abs(c) for c in p) if all(c <= 0 for c in p) else tuple(p)
                for p in psi}
        order = [b.index for b in ctx.basis if b.root in pset]
    entries = factorize_in_order(elem, order)
    rest = elem
    r = ctx.ring
    for bidx, lam in entries:
        if not r.is_zero(lam):
            rest = _inverse_exp(ctx, bidx, lam) * rest
    if rest != ctx.one():
        raise SupportEscapesPsi("support escapes the requested root set")
    return FactoredForm(ctx, entries, ctx.sequence_fingerprint())


def evaluate_factors(ctx: AlgebraContext, entries: Sequence) -> AlgebraElement:
    out = ctx.one()
    for bidx, lam in entries:
        out = out * exp_element(ctx, bidx, lam)
    return out


# ---------------------------------------------------------------------------
# Decompositions (Lemma 3.3)


def _roots_of(ctx: AlgebraContext, coords_set: Iterable[Coords]) -> set:
    out = set()
    for c in coords_set:
        c = tuple(c)
        if all(x <= 0 for x in c):
            c = tuple(-x for x in c)
        out.add(c)
    return out


def split_off_left(u: AlgebraElement, left_roots: set) -> tuple:
    """u = u1 * u2 with u1 the exponential prefix over ``left_roots`` (basis
    order within the prefix) and u2 the residual.

    Valid whenever the residual's support stays inside monomials over the
    complement basis, which holds when the complement is an ideal or when
    both parts are closed.
    """
    ctx = u.context
    r = ctx.ring
    rest = u
    entries = []
    for b in ctx.basis:  # height-ascending context order
        if b.root not in left_roots:
            continue
        mono = ctx.mono_index[((b.index, 1),)]
        lam = rest.coeffs.get(mono, r.zero)
        entries.append((b.index, lam))
        if not r.is_zero(lam):
            rest = _inverse_exp(ctx, b.index, lam) * rest
    return entries, rest


def _supported_on(ctx: AlgebraContext, elem: AlgebraElement,
                  roots: set) -> bool:
    for k in elem.coeffs:
        mono = ctx.monomials[k]
        for bidx, _ in mono:
            if ctx.basis[bidx].root not in roots:
                return False
    return True


@dataclass
class Decomposition:
    part_first: FactoredForm
    part_second: FactoredForm
    first_element: AlgebraElement
    second_element: AlgebraElement


def decompose(u, psi_prime: Iterable[Coords], psi: Iterable[Coords],
              require: str = "plain", prime_side: str = "right",
              check_closed: bool = True) -> Decomposition:
    """Unique splitting U_psi = U_{psi \\ psi'} . U_{psi'} (or the other side).

    ``require='ideal'`` additionally demands psi' ideal in psi and verifies
    conjugation stability on the computed parts.
    """
    elem = u.element if isinstance(u, GroupLikeElement) else u
    ctx = elem.context
    psi_set = _roots_of(ctx, psi)
    prime_set = _roots_of(ctx, psi_prime)
    if not prime_set <= psi_set:
        raise PreconditionFailed("psi' must lie inside psi")
    rest_set = psi_set - prime_set
    if check_closed:
        table = ctx.table
        if not is_closed_set(table, psi_set, ignore_escapes=True).ok:
            raise NotClosed("psi is not closed")
        if not is_closed_set(table, prime_set, ignore_escapes=True).ok:
            raise NotClosed("psi' is not closed")
        if require == "ideal":
            if not is_ideal_set(table, prime_set, psi_set,
                                ignore_escapes=True).ok:
                raise NotIdeal("psi' is not an ideal of psi")
            rest_needed = prime_side == "left"
        else:
            rest_needed = True
        if rest_needed and not is_closed_set(
                table, rest_set, ignore_escapes=True).ok:
            raise NotClosed("psi minus psi' is not closed")
    if not _supported_on(ctx, elem, psi_set):
        raise SupportEscapesPsi("element not supported on U(psi)")
    left = rest_set if prime_side == "right" else prime_set
    right = prime_set if prime_side == "right" else rest_set
    entries, rest = split_off_left(elem, left)
    if not _supported_on(ctx, rest, right):
        raise SupportEscapesPsi("residual escapes the second factor")
    u1 = evaluate_factors(ctx, entries)
    form1 = FactoredForm(ctx, entries)
    form2 = factorize(rest, right) if right else FactoredForm(ctx, [])
    return Decomposition(form1, form2, u1, rest)


# ---------------------------------------------------------------------------
# Valuation-level membership


@dataclass
class FactorReport:
    root: Coords
    sub: int
    lam: object
    valuation: object
    level: object
    ok: bool


@dataclass
class MembershipReport:
    ok: bool
    factors: list


def omega_membership(u, f_of_root: Callable[[Coords], object],
                     psi: Optional[Iterable[Coords]] = None) -> MembershipReport:
    """Check omega(lambda_x) >= f_Omega(weight(x)) for every factor.

    ``f_of_root`` maps signed root coordinates to an ExtendedValue (or a
    plain Fraction); the coefficient ring must expose a valuation.
    """
    from .apartment import ExtendedValue, Value
    elem = u.element if isinstance(u, GroupLikeElement) else u
    ctx = elem.context
    ring = ctx.ring
    form = factorize(elem, psi)
    reports = []
    ok = True
    for bidx, lam in form.entries:
        b = ctx.basis[bidx]
        level = f_of_root(ctx.signed_root(b.root))
        if not isinstance(level, ExtendedValue):
            level = Value(Fraction(level))
        if ring.is_zero(lam):
            val = None
            good = True
        else:
            val = ring.valuation(lam)
            good = level.leq_value(val)
        reports.append(FactorReport(ctx.signed_root(b.root), b.sub, lam,
                                    val, level, good))
        ok = ok and good
    return MembershipReport(ok, reports)


# ---------------------------------------------------------------------------
# The density counterexample over F2 (quotient of U^{ma+} by an open ideal)


@dataclass
class DensityReport:
    m: int
    quotient_order: int
    word_group_order: int
    word_group: set
    missing_coords: tuple
    missing_in_word_group: bool
    ab2_identity: bool
    ab4_is_one: bool
    ab2_equals_ba2: bool
    complement_dimension: int
    complement_weights: list


def density_counterexample_6_10(m: int = 3) -> DensityReport:
    """Images of the two simple exponentials fail to generate the rank-four
    quotient of U^{ma+} over F2 for the hyperbolic matrix of order m >= 3."""
    if m < 3:
        raise PreconditionFailed("m must be >= 3")
    matrix = validate_matrix([[2, -m], [-m, 2]])
    datum = simply_connected_datum(matrix)
    ring = rings.PrimeField(2)
    ctx = build_context(datum, 4, "positive", ring)
    # Psi = roots with beta-coefficient >= 2 or total degree >= 4; the
    # complement inside the truncation is {a, b, a+b, 2a+b}.  Coordinates are
    # read in context order, so the representative products use it too.
    complement = [(1, 0), (0, 1), (1, 1), (2, 1)]
    comp_set = set(complement)
    psi_set = {r for r in ctx.roots if r not in comp_set}
    comp_basis = []
    for root in complement:
        idxs = ctx.basis_by_root[root]
        assert len(idxs) == 1
        comp_basis.append(idxs[0])
    peel_order = sorted(comp_basis)
    pos_of = {b: comp_basis.index(b) for b in comp_basis}

    def coords_of(elem: AlgebraElement) -> tuple:
        entries, rest = split_off_left(elem, comp_set)
        if not _supported_on(ctx, rest, psi_set):
            raise NotGroupLike("quotient coordinates undefined")
        by_idx = dict(entries)
        return tuple(by_idx.get(b, 0) for b in comp_basis)

    def rep(coords: tuple) -> AlgebraElement:
        out = ctx.one()
        for b in peel_order:
            lam = coords[pos_of[b]]
            if lam:
                out = out * exp_element(ctx, b, lam)
        return out

    def q_mul(c1: tuple, c2: tuple) -> tuple:
        return coords_of(rep(c1) * rep(c2))

    # all 16 coordinate tuples label distinct cosets (unique factorization)
    import itertools as _it
    for c in _it.product((0, 1), repeat=4):
        assert coords_of(rep(c)) == c
    a = exp_element(ctx, comp_basis[0], 1)   # exp(e), e in g_alpha
    b = exp_element(ctx, comp_basis[1], 1)   # exp(f), f in g_beta
    ca, cb = coords_of(a), coords_of(b)
    # subgroup closure
    seen = {(0, 0, 0, 0)}
    frontier = [(0, 0, 0, 0)]
    while frontier:
        nxt = []
        for c in frontier:
            for g in (ca, cb):
                prod = q_mul(c, g)
                if prod not in seen:
                    seen.add(prod)
                    nxt.append(prod)
        frontier = nxt
    quotient_order = 2 ** len(comp_basis)
    missing = (0, 0, 0, 1)   # [exp] of the basis of g_{2a+b}
    ab = a * b
    ab2 = ab * ab
    ba = b * a
    ba2 = ba * ba
    ab4 = ab2 * ab2
    # algebra identity in the lower-set quotient: keep weights below the
    # staircase generated by m*alpha and 2*alpha+beta
    keep = _lower_set(ctx, [(m, 0), (2, 1)])
    identity_target = ctx.one() + ctx.basis_element(comp_basis[2]) \
        + ctx.basis_element(comp_basis[3])
    ab2_identity = _project(ab2, keep) == _project(identity_target, keep)
    ab2_equals_ba2 = _project(ab2, keep) == _project(ba2, keep)
    ab4_is_one = coords_of(ab4) == (0, 0, 0, 0) and \
        _project(ab4, keep) == _project(ctx.one(), keep)
    comp_dim = sum(len(ctx.monos_by_weight.get(w, [])) for w in keep)
    return DensityReport(
        m=m,
        quotient_order=quotient_order,
        word_group_order=len(seen),
        word_group=seen,
        missing_coords=missing,
        missing_in_word_group=missing in seen,
        ab2_identity=ab2_identity,
        ab4_is_one=ab4_is_one,
        ab2_equals_ba2=ab2_equals_ba2,
        complement_dimension=comp_dim,
        complement_weights=sorted(keep),
    )


def _lower_set(ctx: AlgebraContext, tops: list) -> set:
    out = set()
    for top in tops:
        for wt in ctx.monos_by_weight:
            if all(x <= t for x, t in zip(wt, top)):
                out.add(wt)
    return out


def _project(elem: AlgebraElement, keep: set) -> dict:
    ctx = elem.context
    return {k: c for k, c in elem.coeffs.items()
            if ctx.mono_weight[k] in keep}


# ---------------------------------------------------------------------------
# Conjugation solver


@dataclass
class ConjugationSolution:
    v: AlgebraElement
    verified: bool


def conjugate_by_character(elem: AlgebraElement, chi: Sequence) -> AlgebraElement:
    """t u t^{-1} where t acts on weight gamma by prod chi_i^{gamma_i}."""
    ctx = elem.context
    r = ctx.ring
    out = {}
    for k, c in elem.coeffs.items():
        wt = ctx.mono_weight[k]
        factor = r.one
        for ci, e in zip(chi, wt):
            for _ in range(e):
                factor = r.mul(factor, ci)
        out[k] = r.mul(c, factor)
    return AlgebraElement(ctx, out, elem.truncated)


def conjugation_solve(ctx: AlgebraContext, chi: Sequence, u, depth: Optional[int] = None
                      ) -> ConjugationSolution:
    """v with v t v^-1 t^-1 = u at truncation, for t acting by the character
    chi on the simple roots (all root values must differ from 1)."""
    elem = u.element if isinstance(u, GroupLikeElement) else u
    if elem.context is not ctx:
        raise ContextMismatch("element from another context")
    r = ctx.ring
    H = depth if depth is not None else ctx.height_bound
    chi = list(chi)

    def chi_of(root: Coords):
        val = r.one
        for ci, e in zip(chi, root):
            for _ in range(e):
                val = r.mul(val, ci)
        return val

    for root in ctx.roots:
        if height(root) <= H and chi_of(root) == r.one:
            raise CharacterDegenerate(ctx.signed_root(root))

    v = ctx.one()
    for deg in range(1, H + 1):
        # residual: u^-1 * (v t v^-1 t^-1)
        commutator = v * conjugate_by_character(v.antipode(), chi)
        residual = elem.antipode() * commutator
        comp = residual.degree_component(deg)
        if comp.is_zero():
            continue
        correction = ctx.one()
        for root in sorted(ctx.roots, key=lambda c: (height(c), c)):
            if height(root) != deg:
                continue
            for bidx in ctx.basis_by_root[root]:
                mono = ctx.mono_index[((bidx, 1),)]
                lam = comp.coeffs.get(mono)
                if lam is None or r.is_zero(lam):
                    continue
                # correction class is -X_alpha / (1 - alpha(t))
                denom = r.sub(r.one, chi_of(root))
                mu = r.neg(r.mul(r.inv(denom), lam))
                correction = correction * exp_element(ctx, bidx, mu)
        v = correction * v
    final = v * conjugate_by_character(v.antipode(), chi)
    return ConjugationSolution(v, final == elem)


# ---------------------------------------------------------------------------
# Degree-bound audit


@dataclass
class DegreeBoundAudit:
    bound: Fraction
    max_ratio: Optional[Fraction]
    table: list
    ok: bool


def degree_bound_audit(datum, audit_height: int) -> DegreeBoundAudit:
    """max over enumerated alpha != alpha_i of height(s_i alpha)/height(alpha),
    checked against 1 + M."""
    from .rootdata import _reflect_q
    table_rows = []
    table = enumerate_roots(datum, audit_height, multiplicities=False)
    M = datum.matrix.max_offdiagonal
    bound = Fraction(1 + M)
    max_ratio = None
    ok = True
    n = datum.n
    for coords in table.positive:
        for i in range(n):
            if coords == tuple(1 if k == i else 0 for k in range(n)):
                continue
            img = _reflect_q(datum.matrix, i, coords)
            ratio = Fraction(height(img), height(coords))
            table_rows.append({"root": coords, "i": i,
                               "image": img, "ratio": ratio})
            if max_ratio is None or ratio > max_ratio:
                max_ratio = ratio
            if ratio > bound:
                ok = False
    return DegreeBoundAudit(bound, max_ratio, table_rows, ok)
