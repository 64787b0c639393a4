"""The affine apartment: walls, the extended value monoid, concave functions,
enclosures, facets, chimneys, the affine Weyl action and fixator generators.

Points live in *essential coordinates*: a point is the tuple of values of the
simple roots on it (exact rationals), which realizes the essentialized
apartment uniformly for every datum with the same matrix.  Covectors are
root-lattice elements (integer tuples); the value group is Lambda = Z.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .errors import PreconditionFailed, UnsupportedFilterShape
from .rootdata import (Coords, RootDatum, RootTable, WeylElement,
                       _reflect_q, tits_cone_membership)

Point = tuple  # tuple[Fraction, ...] in essential coordinates


def point(*xs) -> Point:
    if len(xs) == 1 and isinstance(xs[0], (tuple, list)):
        xs = tuple(xs[0])
    return tuple(Fraction(x) for x in xs)


def evaluate(alpha: Coords, v: Sequence) -> Fraction:
    return sum(Fraction(a) * Fraction(x) for a, x in zip(alpha, v))


# ---------------------------------------------------------------------------
# The ordered monoid of extended values


@dataclass(frozen=True)
class ExtendedValue:
    """Element of the ordered monoid: r, r+, or infinity."""

    kind: str            # "value" | "plus" | "inf"
    r: Optional[Fraction] = None

    def __post_init__(self):
        if self.kind not in ("value", "plus", "inf"):
            raise PreconditionFailed(f"bad kind {self.kind!r}")
        if self.kind != "inf" and self.r is None:
            raise PreconditionFailed("finite extended value needs a number")

    def _key(self):
        if self.kind == "inf":
            return (1, Fraction(0), 0)
        return (0, self.r, 0 if self.kind == "value" else 1)

    def __lt__(self, other: "ExtendedValue") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "ExtendedValue") -> bool:
        return self._key() <= other._key()

    def __gt__(self, other):
        return other < self

    def __ge__(self, other):
        return other <= self

    def __add__(self, other) -> "ExtendedValue":
        if not isinstance(other, ExtendedValue):
            other = Value(Fraction(other))
        if self.kind == "inf" or other.kind == "inf":
            return Infinity()
        r = self.r + other.r
        if self.kind == "plus" or other.kind == "plus":
            return ValuePlus(r)
        return Value(r)

    def __radd__(self, other):
        return self.__add__(other)

    def leq_value(self, v: Fraction) -> bool:
        """self <= the plain value v (v = INF sentinel handled as infinity)."""
        from .rings import INF
        if v == INF:
            return True
        if self.kind == "inf":
            return False
        if self.kind == "value":
            return self.r <= v
        return self.r < v

    def __str__(self):
        if self.kind == "inf":
            return "inf"
        return f"{self.r}+" if self.kind == "plus" else f"{self.r}"

    def round_up_to_lattice(self, denominator: int = 1) -> Optional[Fraction]:
        """Smallest lattice element admissible as a half-space level.

        For Value(c): the least lambda >= c; for ValuePlus(c): the least
        lambda > c; None for infinity (no constraint)."""
        if self.kind == "inf":
            return None
        d = denominator
        if self.kind == "value":
            num = -(-self.r * d // 1)  # ceil
            return Fraction(num, d)
        num = (self.r * d // 1) + 1    # floor + 1
        return Fraction(num, d)


def Value(r) -> ExtendedValue:
    return ExtendedValue("value", Fraction(r))


def ValuePlus(r) -> ExtendedValue:
    return ExtendedValue("plus", Fraction(r))


def Infinity() -> ExtendedValue:
    return ExtendedValue("inf")


# ---------------------------------------------------------------------------
# Half-spaces and walls


@dataclass(frozen=True)
class HalfSpace:
    """D(alpha, k) = {y : alpha(y) + k >= 0}; a plus-level means the strict
    variant D°."""

    alpha: Coords
    level: ExtendedValue

    def contains(self, v: Sequence) -> bool:
        if self.level.kind == "inf":
            return True
        val = evaluate(self.alpha, v) + self.level.r
        return val > 0 if self.level.kind == "plus" else val >= 0

    def is_wall_bounded(self, table: RootTable) -> bool:
        return (self.level.kind == "value"
                and Fraction(self.level.r).denominator == 1
                and table.is_real(self.alpha))


# ---------------------------------------------------------------------------
# Filters


@dataclass(frozen=True)
class VectorFacet:
    """A standard vector facet descriptor: sign * w(F^v(J))."""

    word: tuple      # Weyl word for w
    subset: tuple    # J, zero set among simple roots
    sign: int = 1

    def generators(self, datum: RootDatum) -> list:
        """Generating rays of the cone in essential coordinates."""
        n = datum.n
        w = WeylElement(datum, self.word)
        gens = []
        for i in range(n):
            if i in self.subset:
                continue
            e = tuple(Fraction(1) if k == i else Fraction(0) for k in range(n))
            img = w.action_essential(e)
            gens.append(tuple(self.sign * x for x in img))
        return gens

    def vanishing_subset(self) -> tuple:
        return tuple(self.subset)


@dataclass(frozen=True)
class RawCone:
    """A cone spanned by explicit rational generators (for directions that
    are not Weyl translates of standard facets)."""

    gens: tuple

    def generators(self, datum: RootDatum) -> list:
        return [point(g) for g in self.gens]


@dataclass(frozen=True)
class FinitePointSet:
    points: tuple

    def __post_init__(self):
        if not self.points:
            raise PreconditionFailed("a point-set filter must be nonempty")

    @staticmethod
    def of(*pts) -> "FinitePointSet":
        return FinitePointSet(tuple(point(p) for p in pts))


@dataclass(frozen=True)
class FacetFilter:
    """Local facet germ_x(x + F^v); ``variant`` in {local, closed}."""

    base: Point
    direction: object       # VectorFacet | RawCone
    variant: str = "local"


@dataclass(frozen=True)
class ChimneyFilter:
    """Shortened chimney: the set F + xi + F^v (enclosure taken separately)."""

    base: FacetFilter
    direction: object       # VectorFacet | RawCone
    shortening: Point


@dataclass(frozen=True)
class PolyFilter:
    """Intersection of half-spaces (the shape of every enclosure)."""

    halfspaces: tuple

    def contains(self, v: Sequence) -> bool:
        return all(h.contains(v) for h in self.halfspaces)


# ---------------------------------------------------------------------------
# The concave function f_Omega


def f_omega(datum: RootDatum, omega, alpha: Coords) -> ExtendedValue:
    """inf of the half-space levels containing the filter, as a sharp element
    of the extended monoid (plus-values arise for germs; finite point sets
    give plain values)."""
    alpha = tuple(alpha)
    if isinstance(omega, FinitePointSet):
        return Value(max(-evaluate(alpha, x) for x in omega.points))
    if isinstance(omega, FacetFilter):
        if omega.variant == "closed":
            raise UnsupportedFilterShape(
                "materialize closed facets with closed_facet() first")
        base = Fraction(-evaluate(alpha, omega.base))
        gens = omega.direction.generators(datum)
        vals = [evaluate(alpha, g) for g in gens]
        if any(v < 0 for v in vals):
            return ValuePlus(base)
        return Value(base)
    if isinstance(omega, ChimneyFilter):
        gens = omega.direction.generators(datum)
        if any(evaluate(alpha, g) < 0 for g in gens):
            return Infinity()
        inner = f_omega(datum, omega.base, alpha)
        return inner + Fraction(-evaluate(alpha, omega.shortening))
    if isinstance(omega, PolyFilter):
        return _f_polyfilter(datum, omega, alpha)
    raise UnsupportedFilterShape(f"f_Omega undefined on {type(omega).__name__}")


def _f_polyfilter(datum: RootDatum, omega: PolyFilter, alpha: Coords
                  ) -> ExtendedValue:
    dim = datum.n
    if dim > 3:
        raise UnsupportedFilterShape(
            "polyhedral evaluation implemented for rank <= 3")
    inf_val, attained = _polyhedron_inf(omega, tuple(alpha), dim)
    if inf_val is None:
        return Infinity()
    return Value(-inf_val) if attained else ValuePlus(-inf_val)


def _polyhedron_inf(omega: PolyFilter, alpha: Coords, dim: int):
    """(inf of alpha over the polyhedron, attained?) or (None, _) when
    unbounded below.  Exact, by vertex and extreme-ray enumeration."""
    constraints = [(h.alpha, h.level) for h in omega.halfspaces
                   if h.level.kind != "inf"]
    normals = [tuple(Fraction(a) for a in al) for al, _ in constraints]
    # recession directions making alpha unbounded below
    for ray in _candidate_rays(normals, dim):
        if evaluate(alpha, ray) < 0 and \
                all(evaluate(n, ray) >= 0 for n in normals):
            return None, False
    # candidate points: intersections of dim-subsets of boundaries, plus the
    # origin when unconstrained
    best = None
    best_strict_ok = False
    feasible_any = False
    for v in _candidate_points(constraints, dim):
        if not all(evaluate(al, v) + lv.r >= 0 for al, lv in constraints):
            continue
        feasible_any = True
        val = evaluate(alpha, v)
        strict_ok = all(evaluate(al, v) + lv.r > 0
                        for al, lv in constraints if lv.kind == "plus")
        if best is None or val < best:
            best, best_strict_ok = val, strict_ok
        elif val == best:
            best_strict_ok = best_strict_ok or strict_ok
    if not feasible_any:
        raise UnsupportedFilterShape("empty polyhedron (closure)")
    # the infimum over the true set equals the infimum over the closure as
    # long as the closure of the set is the closed polyhedron; attainment
    # needs a minimizer satisfying the strict constraints
    return best, best_strict_ok


def _candidate_rays(normals: list, dim: int):
    seen = set()
    base = [tuple(Fraction(1) if k == i else Fraction(0) for k in range(dim))
            for i in range(dim)]
    cands = []
    for b in base:
        cands.append(b)
        cands.append(tuple(-x for x in b))
    if dim == 2:
        for n in normals:
            perp = (-n[1], n[0])
            cands.append(perp)
            cands.append(tuple(-x for x in perp))
    elif dim == 3:
        for n1, n2 in itertools.combinations(normals, 2):
            c = _cross3(n1, n2)
            if any(c):
                cands.append(c)
                cands.append(tuple(-x for x in c))
    for c in cands:
        key = _normalize_dir(c)
        if key and key not in seen:
            seen.add(key)
            yield c


def _cross3(a, b):
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def _normalize_dir(c):
    nz = [x for x in c if x != 0]
    if not nz:
        return None
    s = nz[0]
    return tuple(Fraction(x) / abs(s) for x in c)


def _candidate_points(constraints, dim: int):
    from ._linalg import solve_linear, vec
    idx = range(len(constraints))
    for subset in itertools.combinations(idx, min(dim, len(constraints))):
        rows = [vec(constraints[i][0]) for i in subset]
        rhs = [-constraints[i][1].r for i in subset]
        # solve alpha_i(v) = rhs_i: v unknown: transpose problem
        sol = _solve_point(rows, rhs, dim)
        if sol is not None:
            yield sol
    # boundary feet handle non-pointed polyhedra (faces without vertices)
    for i in idx:
        al, lv = constraints[i]
        nrm = evaluate(al, al)
        if nrm:
            yield tuple(-lv.r * Fraction(a) / nrm for a in al)
    yield tuple(Fraction(0) for _ in range(dim))


def _solve_point(rows, rhs, dim):
    from ._linalg import solve_linear, vec
    # want v with rows[i] . v = rhs[i]; set up in terms of coordinates
    cols = [vec([rows[i][k] for i in range(len(rows))]) for k in range(dim)]
    coeff, _ = solve_linear(cols, vec(rhs))
    if coeff is None:
        return None
    return tuple(coeff)


def concavity_check(datum: RootDatum, omega, pairs: Iterable) -> dict:
    """f(alpha+beta) <= f(alpha) + f(beta) over the sample, in monoid order."""
    for alpha, beta in pairs:
        s = tuple(a + b for a, b in zip(alpha, beta))
        lhs = f_omega(datum, omega, s)
        rhs = f_omega(datum, omega, alpha) + f_omega(datum, omega, beta)
        if not lhs <= rhs:
            return {"ok": False, "counterexample": (tuple(alpha), tuple(beta),
                                                    str(lhs), str(rhs))}
    return {"ok": True, "counterexample": None}


# ---------------------------------------------------------------------------
# Narrowness


@dataclass
class NarrownessReport:
    almost_open: bool
    narrow: bool
    witness_almost_open: Optional[Coords]
    witness_narrow: Optional[Coords]
    certified: bool


def narrowness_predicates(datum: RootDatum, table: RootTable, omega
                          ) -> NarrownessReport:
    """almost-open: f(a) + f(-a) > 0 for every enumerated real root;
    narrow: the sum is 0 or 0+ (no wall strictly separates the filter).

    Verdicts are relative to the enumerated real roots; they are certified
    outright only for single points (every covector is constant there)."""
    zero = Value(0)
    zero_plus = ValuePlus(0)
    wit_open = None
    wit_narrow = None
    for alpha in table.real_positive_sorted():
        s = f_omega(datum, omega, alpha) + f_omega(datum, omega,
                                                   tuple(-a for a in alpha))
        if not (s > zero) and wit_open is None:
            wit_open = alpha
        if not (s <= zero_plus) and wit_narrow is None:
            wit_narrow = alpha
    certified = isinstance(omega, FinitePointSet) and len(omega.points) == 1
    return NarrownessReport(wit_open is None, wit_narrow is None,
                            wit_open, wit_narrow, certified)


# ---------------------------------------------------------------------------
# Enclosures


_FAMILIES = ("cl_delta", "cl_si", "cl_sharp", "conv")


def enclosure(datum: RootDatum, table: RootTable, omega,
              variant: str = "cl_delta") -> PolyFilter:
    """Defining half-space list {D(alpha, k_alpha)} over the variant's
    covector family.

    The cl-variants round the sharp levels up to the value lattice (Z); conv
    keeps the sharp rational levels and strictness markers.
    """
    if variant not in _FAMILIES:
        raise PreconditionFailed(f"unknown enclosure variant {variant!r}")
    family: list = []
    pos = table.positive
    if variant in ("cl_si", "cl_sharp"):
        pos = table.real_positive_sorted()
    family.extend(pos)
    family.extend([tuple(-a for a in c) for c in pos])
    if variant == "conv":
        family = _conv_family(datum, table)
    halves = []
    for alpha in family:
        f = f_omega(datum, omega, alpha)
        if variant == "conv":
            if f.kind == "inf":
                continue
            halves.append(HalfSpace(alpha, f))
            continue
        k = f.round_up_to_lattice()
        if k is None:
            continue
        halves.append(HalfSpace(alpha, Value(k)))
    return PolyFilter(tuple(halves))


def _conv_family(datum: RootDatum, table: RootTable) -> list:
    """Sampled covector family for convex hulls: integer combinations of the
    simple roots with small coefficients, plus the enumerated roots."""
    n = datum.n
    out = set()
    rng = range(-3, 4)
    for combo in itertools.product(rng, repeat=n):
        if any(combo):
            out.add(combo)
    for c in table.positive:
        out.add(tuple(c))
        out.add(tuple(-x for x in c))
    return sorted(out)


def closed_facet(datum: RootDatum, facet: FacetFilter,
                 table: Optional[RootTable] = None) -> PolyFilter:
    """Enclosure of the local facet: the closed facet description."""
    if table is None:
        raise PreconditionFailed("closed facets need an enumerated table")
    local = FacetFilter(facet.base, facet.direction, "local")
    return enclosure(datum, table, local, "cl_delta")


# ---------------------------------------------------------------------------
# Affine Weyl elements, reflections, fixators


@dataclass(frozen=True)
class AffineWeylElement:
    """Affine map v -> linear(v) + translation, with the linear part a Weyl
    element and the translation in the coroot lattice tensor Lambda."""

    linear: WeylElement
    translation: Point

    def apply(self, v: Sequence) -> Point:
        img = self.linear.action_essential(v)
        return tuple(a + b for a, b in zip(img, self.translation))

    def compose(self, other: "AffineWeylElement") -> "AffineWeylElement":
        lin = self.linear * other.linear
        tr = self.linear.action_essential(other.translation)
        return AffineWeylElement(lin, tuple(a + b for a, b in
                                            zip(tr, self.translation)))

    def is_identity(self) -> bool:
        return (all(x == 0 for x in self.translation)
                and self.linear.is_identity())

    def wall_image(self, alpha: Coords, k: Fraction) -> tuple:
        """Image of M(alpha, k): the pair (alpha', k')."""
        a_img = tuple(self.linear.action_q(tuple(alpha)))
        k_new = Fraction(k) - evaluate(a_img, self.translation)
        return a_img, k_new

    def key(self) -> tuple:
        return (self.linear.action_q_matrix(), self.translation)


def real_coroot_essential(datum: RootDatum, alpha: Coords) -> Point:
    """Essential coordinates of the coroot of an enumerated real root."""
    alpha = tuple(alpha)
    neg = all(a <= 0 for a in alpha)
    work = tuple(-a for a in alpha) if neg else alpha
    word = []
    n = datum.n
    guard = 0
    while not _is_simple(work):
        i = next((j for j in range(n)
                  if datum.pairing_with_coroot(work, j) > 0), None)
        if i is None:
            raise PreconditionFailed(f"{alpha} does not descend to a simple root")
        word.append(i)
        work = _reflect_q(datum.matrix, i, work)
        if any(x < 0 for x in work):
            raise PreconditionFailed(f"{alpha} is not a real root")
        guard += 1
        if guard > 10000:
            raise PreconditionFailed("descent did not terminate")
    j = work.index(1)
    co = datum.coroot_essential(j)
    for i in reversed(word):
        co = WeylElement(datum, (i,)).action_essential(co)
    if neg:
        co = tuple(-x for x in co)
    return tuple(co)


def _is_simple(coords: Coords) -> bool:
    return sum(coords) == 1 and all(c in (0, 1) for c in coords)


def affine_reflection(datum: RootDatum, alpha: Coords, k) -> Callable:
    """r_{alpha,k}: v -> v - (alpha(v) + k) alpha^v, fixing M(alpha, k)."""
    co = real_coroot_essential(datum, alpha)

    def act(v: Sequence) -> Point:
        coef = evaluate(alpha, v) + Fraction(k)
        return tuple(Fraction(x) - coef * c for x, c in zip(v, co))
    return act


def affine_reflection_element(datum: RootDatum, alpha: Coords, k
                              ) -> AffineWeylElement:
    """The same reflection as an AffineWeylElement (word + translation)."""
    alpha = tuple(alpha)
    neg = all(a <= 0 for a in alpha)
    pos = tuple(-a for a in alpha) if neg else alpha
    k = Fraction(k) * (-1 if neg else 1)
    # s_{alpha,k} = t_{-k alpha^v} s_alpha where s_alpha is the linear part
    word = _reflection_word(datum, pos)
    lin = WeylElement(datum, word)
    co = real_coroot_essential(datum, pos)
    tr = tuple(-k * c for c in co)
    return AffineWeylElement(lin, tr)


def _reflection_word(datum: RootDatum, alpha: Coords) -> tuple:
    """Word for s_alpha = w s_j w^-1 with alpha = w(alpha_j)."""
    work = tuple(alpha)
    n = datum.n
    word = []
    while not _is_simple(work):
        i = next((j for j in range(n)
                  if datum.pairing_with_coroot(work, j) > 0), None)
        if i is None or any(x < 0 for x in _reflect_q(datum.matrix, i, work)):
            raise PreconditionFailed("not a real root")
        word.append(i)
        work = _reflect_q(datum.matrix, i, work)
    j = work.index(1)
    return tuple(word) + (j,) + tuple(reversed(word))


def _fixing_data(datum: RootDatum, omega) -> tuple:
    """(points, directions): a filter lies in a wall / is fixed pointwise iff
    the points do and the covector / map kills the directions."""
    if isinstance(omega, FinitePointSet):
        return list(omega.points), []
    if isinstance(omega, FacetFilter):
        return [point(omega.base)], omega.direction.generators(datum)
    raise UnsupportedFilterShape(type(omega).__name__)


def weyl_fixator_generators(datum: RootDatum, table: RootTable, omega) -> list:
    """Reflections r_{alpha,k} (alpha in the enumerated Phi+, k in Z) whose
    wall contains the filter."""
    pts, dirs = _fixing_data(datum, omega)
    gens = []
    for alpha in table.real_positive_sorted():
        vals = {evaluate(alpha, x) for x in pts}
        if len(vals) != 1:
            continue
        if any(evaluate(alpha, g) != 0 for g in dirs):
            continue
        k = -vals.pop()
        if k.denominator != 1:
            continue
        gens.append((alpha, k))
    return gens


@dataclass
class FixatorComparison:
    status: str                         # equal | strictly_larger_with_witness | unknown
    witness: Optional[AffineWeylElement] = None
    certified: bool = False
    generators: list = field(default_factory=list)


def fixator_compare(datum: RootDatum, table: RootTable, omega,
                    search_cap: int = 20) -> FixatorComparison:
    """Search the affine Weyl group (bounded word length and translations)
    for elements fixing the filter pointwise outside the group generated by
    the wall reflections through it."""
    pts, dirs = _fixing_data(datum, omega)
    gens = weyl_fixator_generators(datum, table, omega)
    gen_elements = [affine_reflection_element(datum, a, k) for a, k in gens]
    closure = _bounded_closure(gen_elements, search_cap)
    closure_keys = {g.key() for g in closure}
    n = datum.n
    # candidate linear parts: Weyl ball of bounded word length
    linear_ball = _weyl_ball(datum, min(search_cap, 8))
    coroots = [datum.coroot_essential(i) for i in range(n)]
    for lin in linear_ball:
        # translation must send lin(x0) back onto x0 for the first point
        x0 = pts[0]
        img = lin.action_essential(x0)
        tr = tuple(a - b for a, b in zip(x0, img))
        elt = AffineWeylElement(lin, tr)
        if elt.is_identity():
            continue
        if not _translation_in_lattice(tr, coroots, search_cap):
            continue
        fixes = all(elt.apply(x) == tuple(Fraction(c) for c in x)
                    for x in pts) and \
            all(tuple(lin.action_essential(d)) == tuple(d) for d in dirs)
        if fixes and elt.key() not in closure_keys:
            return FixatorComparison(
                "strictly_larger_with_witness", elt,
                certified=(not gens), generators=gens)
    return FixatorComparison("equal", None, certified=False, generators=gens)


def _translation_in_lattice(tr: Point, coroots: list, cap: int) -> bool:
    """Is tr an integer combination of the coroot images (coefficients
    bounded by the cap)?"""
    from ._linalg import solve_linear, vec
    if all(x == 0 for x in tr):
        return True
    coeff, null = solve_linear([vec(c) for c in coroots], vec(tr))
    if coeff is None:
        return False
    if null:
        # pin down integrality via the saturated lattice route
        from ._linalg import integral_point_in_affine, lattice_basis
        lat = lattice_basis([vec(c) for c in coroots])
        pt = integral_point_in_affine(vec(tr), [], lat)
        return pt is not None
    return all(c.denominator == 1 and abs(c) <= cap for c in coeff)


def _weyl_ball(datum: RootDatum, radius: int) -> list:
    seen = {}
    ident = WeylElement(datum, ())
    seen[ident.action_q_matrix()] = ident
    frontier = [ident]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for i in range(datum.n):
                w2 = w * WeylElement(datum, (i,))
                key = w2.action_q_matrix()
                if key not in seen:
                    seen[key] = w2
                    nxt.append(w2)
        frontier = nxt
    return list(seen.values())


def _bounded_closure(gens: list, cap: int) -> list:
    ident_found = False
    out = {}
    frontier = list(gens)
    for g in gens:
        out[g.key()] = g
    steps = 0
    while frontier and steps < cap:
        steps += 1
        nxt = []
        for g in frontier:
            for h in gens:
                gh = g.compose(h)
                if gh.key() not in out:
                    out[gh.key()] = gh
                    nxt.append(gh)
        frontier = nxt
        if len(out) > 5000:
            break
    return list(out.values())


# ---------------------------------------------------------------------------
# Tits preorder


@dataclass
class PreorderResult:
    leq: bool
    geq: bool
    leq_open: bool
    geq_open: bool
    status: str     # comparable | incomparable | indeterminate


def tits_preorder(datum: RootDatum, x: Sequence, y: Sequence,
                  step_cap: int = 500) -> PreorderResult:
    """x <= y iff y - x lies in the Tits cone; open variants via the interior."""
    d = tuple(Fraction(b) - Fraction(a) for a, b in zip(x, y))
    fwd = tits_cone_membership(datum, d, step_cap)
    bwd = tits_cone_membership(datum, tuple(-c for c in d), step_cap)
    leq = fwd.status == "inside"
    geq = bwd.status == "inside"
    leq_open = leq and bool(fwd.open_interior) and any(d)
    geq_open = geq and bool(bwd.open_interior) and any(d)
    if not any(d):
        leq = geq = True
        leq_open = geq_open = False
    if fwd.status == "indeterminate" or bwd.status == "indeterminate":
        status = "indeterminate"
    elif not leq and not geq:
        status = "incomparable"
    else:
        status = "comparable"
    return PreorderResult(leq, geq, leq_open, geq_open, status)


# ---------------------------------------------------------------------------
# Chimneys


@dataclass
class ChimneyDescription:
    enclosure: PolyFilter
    splayed: bool        # direction facet is spherical
    solid: bool
    full: bool
    vanishing_support: tuple


def chimney(datum: RootDatum, table: RootTable, base: FacetFilter,
            direction, shortening=None) -> ChimneyDescription:
    """Enclosure of F + xi + F^v with the sphericity and solidity flags.

    Sphericity and solidity are certified through the vanishing set: the
    union of supports of enumerated positive roots vanishing on the
    direction (resp. on the support direction of the whole chimney) must
    span a finite-type submatrix.
    """
    n = datum.n
    if shortening is None:
        shortening = tuple(Fraction(0) for _ in range(n))
    shortening = point(shortening)
    gens = direction.generators(datum)
    ch = ChimneyFilter(base, direction, shortening)
    encl = enclosure(datum, table, ch, "cl_delta")
    vanish_dir = _vanishing_support(datum, table, gens)
    splayed = datum.matrix.submatrix(sorted(vanish_dir)).is_finite_type()
    # support direction of the chimney: cone directions plus facet directions
    support_dirs = list(gens) + list(base.direction.generators(datum))
    vanish_support = _vanishing_support(datum, table, support_dirs)
    solid = datum.matrix.submatrix(sorted(vanish_support)).is_finite_type()
    full = len(vanish_support) == 0 and _spans_fully(support_dirs, n)
    return ChimneyDescription(encl, splayed, solid, full,
                              tuple(sorted(vanish_dir)))


def _vanishing_support(datum: RootDatum, table: RootTable,
                       directions: list) -> set:
    """Union of supports of enumerated positive roots vanishing on the span."""
    out = set()
    for alpha in table.positive:
        if all(evaluate(alpha, g) == 0 for g in directions):
            out.update(i for i, c in enumerate(alpha) if c)
    return out


def _spans_fully(directions: list, n: int) -> bool:
    from ._linalg import rank, vec
    return rank([vec(d) for d in directions]) == n
