"""Kac-Moody matrices, root generation systems and Weyl group combinatorics.

Roots are stored in simple-root coordinates (integer tuples over the index
set), so non-free systems stay representable; covectors are evaluated through
the pairing of the ambient datum.  Apartment-side geometry uses *essential
coordinates*: a point v is the tuple of values of the simple roots on it,
which realizes Hom(Q, R) and works uniformly for all data with the same
matrix.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import sympy

from .errors import (HeightBoundTooSmall, NotKacMoody, NotRealRoot,
                     PreconditionFailed, ResourceLimit)
from ._linalg import rank as _qrank, smith_invariants, vec

Coords = tuple  # tuple[int, ...] over the index set


# ---------------------------------------------------------------------------
# Kac-Moody matrices


@dataclass(frozen=True)
class KacMoodyMatrix:
    """A generalized Cartan matrix over an ordered index set."""

    entries: tuple
    labels: tuple

    @property
    def n(self) -> int:
        return len(self.labels)

    def a(self, i: int, j: int) -> int:
        return self.entries[i][j]

    @property
    def max_offdiagonal(self) -> int:
        """Largest |a_ij| off the diagonal (0 for rank one)."""
        vals = [abs(self.entries[i][j])
                for i in range(self.n) for j in range(self.n) if i != j]
        return max(vals, default=0)

    def submatrix(self, subset: Sequence[int]) -> "KacMoodyMatrix":
        idx = list(subset)
        ent = tuple(tuple(self.entries[i][j] for j in idx) for i in idx)
        return KacMoodyMatrix(ent, tuple(self.labels[i] for i in idx))

    def is_finite_type(self) -> bool:
        """All principal minors positive (empty matrix counts as finite)."""
        n = self.n
        m = sympy.Matrix(self.entries) if n else None
        for r in range(1, n + 1):
            for subset in itertools.combinations(range(n), r):
                if m[subset, subset].det() <= 0:
                    return False
        return True

    def is_affine_type(self) -> bool:
        """Indecomposable with det 0 and all proper principal minors > 0."""
        n = self.n
        if n == 0 or not self._indecomposable():
            return False
        m = sympy.Matrix(self.entries)
        if m.det() != 0:
            return False
        for r in range(1, n):
            for subset in itertools.combinations(range(n), r):
                if m[subset, subset].det() <= 0:
                    return False
        return True

    def _indecomposable(self) -> bool:
        n = self.n
        if n <= 1:
            return True
        seen = {0}
        stack = [0]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j not in seen and self.entries[i][j] != 0:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == n

    def invariant_positive_kernel(self) -> Optional[tuple]:
        """A rational c > 0 (componentwise) with A c = 0, if one exists.

        Such a c gives the Weyl-invariant linear form sum(c_i * alpha_i),
        nonnegative on the Tits cone; it exists exactly for affine components.
        """
        m = sympy.Matrix(self.entries)
        for v in m.nullspace():
            xs = [Fraction(sympy.Rational(x).p, sympy.Rational(x).q) for x in v]
            if all(x > 0 for x in xs) or all(x < 0 for x in xs):
                s = 1 if xs[0] > 0 else -1
                return tuple(s * x for x in xs)
        return None


def validate_matrix(entries: Sequence[Sequence[int]], labels=None) -> KacMoodyMatrix:
    """Check the three generalized-Cartan axioms; report every violation."""
    n = len(entries)
    violations = []
    for i, row in enumerate(entries):
        if len(row) != n:
            raise PreconditionFailed("matrix is not square")
        for j, x in enumerate(row):
            if x != int(x):
                raise PreconditionFailed(f"entry ({i},{j}) is not an integer")
    for i in range(n):
        if entries[i][i] != 2:
            violations.append(("i", i, i))
        for j in range(n):
            if i != j and entries[i][j] > 0:
                violations.append(("ii", i, j))
            if i != j and (entries[i][j] == 0) != (entries[j][i] == 0):
                violations.append(("iii", i, j))
    if violations:
        raise NotKacMoody(violations)
    if labels is None:
        labels = tuple(range(n))
    return KacMoodyMatrix(tuple(tuple(int(x) for x in r) for r in entries),
                          tuple(labels))


# ---------------------------------------------------------------------------
# Roots as elements of Q


@dataclass(frozen=True)
class Root:
    coords: Coords

    @property
    def height(self) -> int:
        return sum(self.coords)

    @property
    def sign(self) -> str:
        pos = any(c > 0 for c in self.coords)
        neg = any(c < 0 for c in self.coords)
        if pos and not neg:
            return "+"
        if neg and not pos:
            return "-"
        return "mixed" if (pos and neg) else "zero"

    def __neg__(self) -> "Root":
        return Root(tuple(-c for c in self.coords))

    def __add__(self, other: "Root") -> "Root":
        return Root(tuple(a + b for a, b in zip(self.coords, other.coords)))


def root(*coords) -> Root:
    if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
        coords = tuple(coords[0])
    return Root(tuple(int(c) for c in coords))


def height(coords: Coords) -> int:
    return sum(coords)


# ---------------------------------------------------------------------------
# Root generation systems


@dataclass(frozen=True)
class RootDatum:
    """Matrix + lattice Y with chosen simple roots and coroots."""

    matrix: KacMoodyMatrix
    rank_Y: int
    coroots: tuple   # vectors in Y = Z^rank_Y
    root_covectors: tuple  # covectors in X = Y^*

    def __post_init__(self):
        n = self.matrix.n
        for i in range(n):
            for j in range(n):
                val = sum(self.root_covectors[j][k] * self.coroots[i][k]
                          for k in range(self.rank_Y))
                if val != self.matrix.a(i, j):
                    raise PreconditionFailed(
                        f"pairing alpha_{j}(alpha_{i}^v) = {val} "
                        f"!= a[{i}][{j}] = {self.matrix.a(i, j)}")

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def is_free(self) -> bool:
        return _qrank([vec(r) for r in self.root_covectors]) == self.n

    @property
    def is_cofree(self) -> bool:
        return _qrank([vec(c) for c in self.coroots]) == self.n

    @property
    def is_cotorsion_free(self) -> bool:
        inv = smith_invariants([list(c) for c in self.coroots])
        return all(d in (0, 1) for d in inv)

    # -- evaluation helpers ------------------------------------------------
    def pair(self, q_coords: Coords, y: Sequence) -> Fraction:
        """Evaluate a Q-element (simple-root coordinates) on a Y-vector."""
        total = Fraction(0)
        for j, c in enumerate(q_coords):
            if c:
                total += c * sum(Fraction(self.root_covectors[j][k]) * Fraction(y[k])
                                 for k in range(self.rank_Y))
        return total

    def essential_coords(self, y: Sequence) -> tuple:
        """Image of a Y-vector in essential coordinates (alpha_i-values)."""
        out = []
        for i in range(self.n):
            out.append(sum(Fraction(self.root_covectors[i][k]) * Fraction(y[k])
                           for k in range(self.rank_Y)))
        return tuple(out)

    def coroot_essential(self, i: int) -> tuple:
        """Essential coordinates of the i-th simple coroot: row i of A."""
        return tuple(Fraction(self.matrix.a(i, j)) for j in range(self.n))

    def pairing_with_coroot(self, q_coords: Coords, i: int) -> int:
        """alpha(alpha_i^v) for alpha given in simple-root coordinates."""
        return sum(self.matrix.a(i, j) * q_coords[j] for j in range(self.n))


def simply_connected_datum(matrix: KacMoodyMatrix) -> RootDatum:
    """Y = Z^n with the coroots as basis; the only cofree+coadjoint datum."""
    n = matrix.n
    coroots = tuple(tuple(1 if k == i else 0 for k in range(n)) for i in range(n))
    covecs = tuple(tuple(matrix.a(i, j) for i in range(n)) for j in range(n))
    return RootDatum(matrix, n, coroots, covecs)


def minimal_adjoint_datum(matrix: KacMoodyMatrix) -> RootDatum:
    """Y = Q^* (dual of the root lattice); free and adjoint."""
    n = matrix.n
    # X = Q with basis the simple roots; Y its dual with the dual basis.
    covecs = tuple(tuple(1 if k == j else 0 for k in range(n)) for j in range(n))
    coroots = tuple(tuple(matrix.a(i, k) for k in range(n)) for i in range(n))
    return RootDatum(matrix, n, coroots, covecs)


def loop_sl2_datum() -> RootDatum:
    """The rank-one affine SL2 loop datum: Y = Zh, roots +/-alpha with
    alpha_0 = -alpha_1, coroots -/+ h."""
    matrix = validate_matrix([[2, -2], [-2, 2]])
    return RootDatum(matrix, 1, ((-1,), (1,)), ((-2,), (2,)))


@dataclass(frozen=True)
class DatumMorphism:
    """Lattice map plus index injection between two data (kmt convention:
    phi(coroot_i) = coroot'_i and root'_i o phi = root_i)."""

    source: RootDatum
    target: RootDatum
    lattice_map: tuple  # rows: images of source basis vectors in target Y

    def apply(self, y: Sequence) -> tuple:
        out = [0] * self.target.rank_Y
        for k, c in enumerate(y):
            if c:
                for l in range(self.target.rank_Y):
                    out[l] += c * self.lattice_map[k][l]
        return tuple(out)

    def check(self) -> bool:
        src, tgt = self.source, self.target
        for i in range(src.n):
            if self.apply(src.coroots[i]) != tuple(tgt.coroots[i]):
                return False
        for i in range(src.n):
            for k in range(src.rank_Y):
                basis = tuple(1 if l == k else 0 for l in range(src.rank_Y))
                lhs = sum(tgt.root_covectors[i][l] * self.apply(basis)[l]
                          for l in range(tgt.rank_Y))
                if lhs != src.root_covectors[i][k]:
                    return False
        return True


@dataclass(frozen=True)
class ExtendedDatum:
    datum: RootDatum
    morphism: DatumMorphism
    kind: str


def extend_datum(datum: RootDatum, kind: str) -> ExtendedDatum:
    """Build the sc / ell / mat extension with its defining morphism."""
    n, r = datum.n, datum.rank_Y
    if kind == "sc":
        # Y_sc = Y + sum Z u_i^v, coroot_i += u_i^v, roots extended by zero.
        rank = r + n
        coroots = tuple(tuple(datum.coroots[i]) + tuple(1 if k == i else 0 for k in range(n))
                        for i in range(n))
        covecs = tuple(tuple(datum.root_covectors[j]) + (0,) * n for j in range(n))
        new = RootDatum(datum.matrix, rank, coroots, covecs)
        # morphism: projection Y_sc -> Y, a morphism from the new datum to the old
        lattice_map = tuple(tuple(1 if l == k else 0 for l in range(r)) for k in range(r)) \
            + tuple((0,) * r for _ in range(n))
        morph = DatumMorphism(new, datum, lattice_map)
        return ExtendedDatum(new, morph, kind)
    if kind == "ell":
        # Y_ell = Y + sum Z v_i^v, root_i += v_i (dual basis), coroots unchanged.
        rank = r + n
        coroots = tuple(tuple(datum.coroots[i]) + (0,) * n for i in range(n))
        covecs = tuple(tuple(datum.root_covectors[j]) + tuple(1 if k == j else 0 for k in range(n))
                       for j in range(n))
        new = RootDatum(datum.matrix, rank, coroots, covecs)
        # morphism: injection Y -> Y_ell, from the old datum to the new
        lattice_map = tuple(tuple(1 if l == k else 0 for l in range(rank)) for k in range(r))
        morph = DatumMorphism(datum, new, lattice_map)
        return ExtendedDatum(new, morph, kind)
    if kind == "mat":
        if not (datum.is_free and datum.is_cofree and datum.is_cotorsion_free):
            raise PreconditionFailed("mat extension needs a free, cofree, "
                                     "cotorsion-free datum")
        s = _qrank([vec(row) for row in datum.matrix.entries])
        # psi: Y -> Z^n, y -> (alpha_i(y)); pick v_1..v_{n-s} in Y whose psi
        # images complete psi(Q^v) to full rank inside psi(Y).
        psi_rows = [datum.essential_coords(tuple(1 if l == k else 0 for l in range(r)))
                    for k in range(r)]
        base = [vec(datum.essential_coords(c)) for c in datum.coroots]
        from ._linalg import RowSpace
        rs = RowSpace(n)
        for b in base:
            rs.add(b)
        chosen = []
        for k in range(r):
            if rs.add(vec(psi_rows[k])):
                chosen.append(k)
        # Y_mat basis: the coroots followed by the chosen standard basis vectors.
        basis_vectors = [tuple(c) for c in datum.coroots] + \
            [tuple(1 if l == k else 0 for l in range(r)) for k in chosen]
        rank = len(basis_vectors)
        if rank != 2 * n - s:
            raise PreconditionFailed("unexpected mat dimension")
        coroots = tuple(tuple(1 if k == i else 0 for k in range(rank)) for i in range(n))
        covecs = tuple(tuple(int(datum.pair(tuple(1 if l == j else 0 for l in range(n)), bv))
                             for bv in basis_vectors) for j in range(n))
        new = RootDatum(datum.matrix, rank, coroots, covecs)
        morph = DatumMorphism(new, datum, tuple(basis_vectors))
        return ExtendedDatum(new, morph, kind)
    raise PreconditionFailed(f"unknown extension kind {kind!r}")


# ---------------------------------------------------------------------------
# Weyl elements


def _reflect_q(matrix: KacMoodyMatrix, i: int, coords: Coords) -> Coords:
    """s_i(alpha) = alpha - alpha(alpha_i^v) alpha_i in Q-coordinates."""
    d = sum(matrix.a(i, j) * coords[j] for j in range(matrix.n))
    out = list(coords)
    out[i] -= d
    return tuple(out)


@dataclass(frozen=True)
class WeylElement:
    datum: RootDatum
    word: tuple  # letters are simple indices, leftmost acts last

    def action_q(self, coords: Coords) -> Coords:
        for i in reversed(self.word):
            coords = _reflect_q(self.datum.matrix, i, coords)
        return coords

    def action_q_matrix(self) -> tuple:
        n = self.datum.n
        cols = [self.action_q(tuple(1 if k == j else 0 for k in range(n)))
                for j in range(n)]
        return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))

    def action_y(self, y: Sequence) -> tuple:
        for i in reversed(self.word):
            val = sum(self.datum.root_covectors[i][k] * y[k]
                      for k in range(self.datum.rank_Y))
            y = tuple(y[k] - val * self.datum.coroots[i][k]
                      for k in range(self.datum.rank_Y))
        return tuple(y)

    def action_essential(self, v: Sequence) -> tuple:
        """Action on essential coordinates: s_i(v)_j = v_j - a_ij v_i."""
        v = list(Fraction(x) for x in v)
        n = self.datum.n
        for i in reversed(self.word):
            vi = v[i]
            if vi:
                for j in range(n):
                    v[j] -= self.datum.matrix.a(i, j) * vi
        return tuple(v)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(self.datum, self.word + other.word)

    def inverse(self) -> "WeylElement":
        return WeylElement(self.datum, tuple(reversed(self.word)))

    def is_identity(self) -> bool:
        n = self.datum.n
        for j in range(n):
            e = tuple(1 if k == j else 0 for k in range(n))
            if self.action_q(e) != e:
                return False
        return True

    def reduced_word(self) -> tuple:
        """A reduced word, found by the descent algorithm on simple roots."""
        n = self.datum.n
        current = self
        letters = []
        while True:
            desc = None
            for i in range(n):
                img = current.action_q(tuple(1 if k == i else 0 for k in range(n)))
                if all(c <= 0 for c in img):
                    desc = i
                    break
            if desc is None:
                break
            letters.append(desc)
            current = current * WeylElement(self.datum, (desc,))
        if not current.is_identity():
            raise PreconditionFailed("descent failed; element not in W")
        return tuple(reversed(letters))

    @property
    def reduced_length(self) -> int:
        return len(self.reduced_word())


def weyl(datum: RootDatum, word: Sequence[int]) -> WeylElement:
    return WeylElement(datum, tuple(word))


# ---------------------------------------------------------------------------
# Root enumeration


@dataclass
class RootTable:
    datum: RootDatum
    height_bound: int
    real_positive: dict      # coords -> True
    imaginary_positive: dict  # coords -> mult (or None when not computed)

    @property
    def positive(self) -> list:
        out = list(self.real_positive) + list(self.imaginary_positive)
        out.sort(key=lambda c: (height(c), c))
        return out

    def is_real(self, coords: Coords) -> bool:
        c = tuple(coords)
        return c in self.real_positive or tuple(-x for x in c) in self.real_positive

    def is_root(self, coords: Coords) -> bool:
        c = tuple(coords)
        neg = tuple(-x for x in c)
        return (c in self.real_positive or c in self.imaginary_positive
                or neg in self.real_positive or neg in self.imaginary_positive)

    def mult(self, coords: Coords):
        c = tuple(coords)
        if not any(x > 0 for x in c):
            c = tuple(-x for x in c)
        if c in self.real_positive:
            return 1
        return self.imaginary_positive.get(c)

    def real_positive_sorted(self) -> list:
        return sorted(self.real_positive, key=lambda c: (height(c), c))


def _support_connected(matrix: KacMoodyMatrix, coords: Coords) -> bool:
    supp = [i for i, c in enumerate(coords) if c != 0]
    if not supp:
        return False
    seen = {supp[0]}
    stack = [supp[0]]
    sset = set(supp)
    while stack:
        i = stack.pop()
        for j in sset:
            if j not in seen and matrix.a(i, j) != 0:
                seen.add(j)
                stack.append(j)
    return seen == sset


def _descend_to_fundamental(matrix: KacMoodyMatrix, coords: Coords):
    """Apply simple reflections lowering height until no alpha_i^v-pairing is
    positive.  Returns (rep, ok) where ok is False if the orbit left Q+."""
    c = tuple(coords)
    n = matrix.n
    while True:
        if any(x < 0 for x in c):
            return c, False
        pos = None
        for i in range(n):
            d = sum(matrix.a(i, j) * c[j] for j in range(n))
            if d > 0:
                pos = (i, d)
                break
        if pos is None:
            return c, True
        i, d = pos
        nxt = list(c)
        nxt[i] -= d
        c = tuple(nxt)


def enumerate_roots(datum: RootDatum, height_bound: int,
                    multiplicities: bool = True,
                    orbit_cap: int = 200000,
                    mult_fn: Optional[Callable[[RootDatum, Coords], int]] = None
                    ) -> RootTable:
    """All positive roots of height <= height_bound.

    Real roots come from the Weyl orbit of the simple roots (breadth first,
    lexicographic tie-breaking, closed under the height bound).  Imaginary
    candidates are classified by descending into the fundamental cone; their
    multiplicities, when requested, are primitive-space dimensions computed by
    the enveloping-algebra module at the cone representative and transported
    along the orbit.
    """
    if height_bound < 1:
        raise PreconditionFailed("height bound must be >= 1")
    matrix = datum.matrix
    n = matrix.n
    simples = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    real: dict = {}
    frontier = sorted(simples)
    for s in frontier:
        real[s] = True
    while frontier:
        nxt = []
        for c in frontier:
            for i in range(n):
                img = _reflect_q(matrix, i, c)
                if any(x < 0 for x in img):
                    continue
                if height(img) > height_bound:
                    continue
                if img not in real:
                    real[img] = True
                    nxt.append(img)
            if len(real) > orbit_cap:
                raise ResourceLimit("real-root orbit exceeded the configured cap")
        frontier = sorted(nxt)

    imag: dict = {}
    rep_mult: dict = {}
    if mult_fn is None and multiplicities:
        from .envalg import primitive_dimension as _pd
        mult_fn = _pd
    for coords in _positive_lattice_points(n, height_bound):
        if coords in real:
            continue
        rep, ok = _descend_to_fundamental(matrix, coords)
        if not ok:
            continue
        if not any(rep):
            continue
        if not _support_connected(matrix, rep):
            continue
        if rep in real:
            continue  # descent landed on a real root: coords was real already
        if multiplicities:
            if rep not in rep_mult:
                rep_mult[rep] = mult_fn(datum, rep)
            m = rep_mult[rep]
            if m == 0:
                continue
            imag[coords] = m
        else:
            imag[coords] = None
    return RootTable(datum, height_bound, real, imag)


def _positive_lattice_points(n: int, bound: int):
    """Nonzero points of Q+ with height <= bound, in (height, lex) order."""
    for h in range(1, bound + 1):
        for comp in _compositions(h, n):
            yield comp


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# Prenilpotent pairs and intervals


@dataclass
class PairClassification:
    status: str                     # prenilpotent | not_prenilpotent | unknown
    witness_positive: Optional[WeylElement] = None
    witness_negative: Optional[WeylElement] = None
    interval: Optional[list] = None  # coords, ordered from alpha to beta
    obstruction: Optional[Coords] = None


def _pair_orbit_search(datum: RootDatum, a: Coords, b: Coords, depth: int,
                       want_positive: bool) -> Optional[WeylElement]:
    """BFS for w with w(a), w(b) both positive (or both negative)."""
    def good(p):
        if want_positive:
            return all(x >= 0 for x in p[0]) and all(x >= 0 for x in p[1])
        return all(x <= 0 for x in p[0]) and all(x <= 0 for x in p[1])

    matrix = datum.matrix
    n = matrix.n
    start = (a, b)
    if good(start):
        return WeylElement(datum, ())
    seen = {start: ()}
    frontier = [start]
    for _ in range(depth):
        nxt = []
        for state in frontier:
            for i in range(n):
                img = (_reflect_q(matrix, i, state[0]),
                       _reflect_q(matrix, i, state[1]))
                if img in seen:
                    continue
                seen[img] = (i,) + seen[state]
                if good(img):
                    return WeylElement(datum, seen[img])
                nxt.append(img)
        frontier = nxt
        if not frontier:
            break
    return None


def _inversion_set(datum: RootDatum, w: WeylElement) -> list:
    """N(w) = {gamma in Phi+ : w(gamma) < 0}, from a reduced word."""
    word = w.reduced_word()
    out = []
    n = datum.n
    # N(w) = {alpha_{i_k}, s_{i_k}(alpha_{i_{k-1}}), ...} for w = s_{i_1}...s_{i_k}
    for t in range(len(word)):
        gamma = tuple(1 if k == word[t] else 0 for k in range(n))
        for u in range(t + 1, len(word)):
            gamma = _reflect_q(datum.matrix, word[u], gamma)
        out.append(gamma)
    return out


def classify_pair(datum: RootDatum, alpha: Coords, beta: Coords,
                  search_depth: int = 12,
                  table: Optional[RootTable] = None) -> PairClassification:
    """Decide prenilpotence of a pair of real roots, with witnesses.

    Negative certificates: beta = -alpha, or an imaginary root on
    N*alpha + N*beta inside the enumerated region (imaginary positives are
    Weyl-stable, so such a root is incompatible with both witnesses).
    """
    alpha, beta = tuple(alpha), tuple(beta)
    cert_height = 3 * (abs(height(alpha)) + abs(height(beta)))
    if table is None:
        table = enumerate_roots(datum, cert_height, multiplicities=False)
    if not table.is_real(alpha):
        raise NotRealRoot(f"{alpha} is not an enumerated real root")
    if not table.is_real(beta):
        raise NotRealRoot(f"{beta} is not an enumerated real root")

    if beta == tuple(-x for x in alpha):
        return PairClassification("not_prenilpotent", obstruction=beta)

    if alpha == beta:
        return PairClassification("prenilpotent",
                                  witness_positive=_pair_orbit_search(
                                      datum, alpha, beta, search_depth, True),
                                  witness_negative=_pair_orbit_search(
                                      datum, alpha, beta, search_depth, False),
                                  interval=[alpha])

    # imaginary obstruction on the N-cone of the pair
    for p in range(0, table.height_bound + 1):
        for q in range(0, table.height_bound + 1):
            if p + q == 0:
                continue
            comb = tuple(p * a + q * b for a, b in zip(alpha, beta))
            if abs(height(comb)) > table.height_bound:
                continue
            cpos = comb if any(x > 0 for x in comb) else tuple(-x for x in comb)
            if cpos in table.imaginary_positive:
                return PairClassification("not_prenilpotent", obstruction=comb)

    w_pos = _pair_orbit_search(datum, alpha, beta, search_depth, True)
    w_neg = _pair_orbit_search(datum, alpha, beta, search_depth, False)
    if w_pos is None or w_neg is None:
        return PairClassification("unknown")

    # interval from the explicit nilpotent set w^-1 Phi+ ∩ w'^-1 Phi-
    u = w_neg * w_pos.inverse()
    w_pos_inv = w_pos.inverse()
    candidates = [w_pos_inv.action_q(g) for g in _inversion_set(datum, u)]
    interval = [alpha]
    interior = []
    for gamma in candidates:
        pq = _express_as_combination(gamma, alpha, beta)
        if pq is None:
            continue
        p, q = pq
        if p >= 1 and q >= 1:
            interior.append((Fraction(q, p), gamma))
    interior.sort(key=lambda t: (t[0], t[1]))
    interval.extend(g for _, g in interior)
    interval.append(beta)
    return PairClassification("prenilpotent", w_pos, w_neg, interval)


def _express_as_combination(gamma: Coords, alpha: Coords, beta: Coords):
    """gamma = p alpha + q beta with integer p, q >= 0, if possible."""
    coeff, _ = _solve_two(alpha, beta, gamma)
    if coeff is None:
        return None
    p, q = coeff
    if p.denominator != 1 or q.denominator != 1 or p < 0 or q < 0:
        return None
    return int(p), int(q)


def _solve_two(a: Coords, b: Coords, target: Coords):
    from ._linalg import solve_linear
    return solve_linear([vec(a), vec(b)], vec(target))


# ---------------------------------------------------------------------------
# Closed sets and ideals


@dataclass
class ClosureCheck:
    ok: bool
    violation: Optional[tuple] = None  # (alpha, beta, combo)


def _combination_reach(alpha: Coords, beta: Coords, bound: int):
    for p in range(1, bound + 1):
        for q in range(1, bound + 1):
            combo = tuple(p * a + q * b for a, b in zip(alpha, beta))
            h = height(combo)
            if h > bound:
                continue
            yield p, q, combo


def is_closed_set(table: RootTable, psi: Iterable[Coords],
                  predicate: Optional[Callable[[Coords], bool]] = None,
                  ignore_escapes: bool = False) -> ClosureCheck:
    """p,q >= 1, p a + q b in Delta => p a + q b in Psi, inside the bound.

    ``predicate`` extends membership beyond the explicit set; sums escaping
    the enumerated region raise unless the predicate certifies them.
    """
    pset = {tuple(x) for x in psi}
    in_psi = (lambda c: c in pset or (predicate is not None and predicate(c)))
    h = table.height_bound
    items = sorted(pset, key=lambda c: (height(c), c))
    for a in items:
        for b in items:
            for p in range(1, h + 1):
                for q in range(1, h + 1):
                    combo = tuple(p * x + q * y for x, y in zip(a, b))
                    hh = height(combo)
                    if hh > h or hh < -h:
                        if ignore_escapes or \
                                (predicate is not None and predicate(combo)):
                            continue
                        if _could_be_root_beyond(table, combo):
                            raise HeightBoundTooSmall(
                                f"sum {combo} escapes the enumerated region")
                        continue
                    if not any(combo):
                        continue
                    if table.is_root(combo) and not in_psi(combo):
                        return ClosureCheck(False, (a, b, combo))
    return ClosureCheck(True)


def is_ideal_set(table: RootTable, psi_prime: Iterable[Coords],
                 psi: Iterable[Coords],
                 prime_predicate: Optional[Callable[[Coords], bool]] = None,
                 psi_predicate: Optional[Callable[[Coords], bool]] = None,
                 ignore_escapes: bool = False) -> ClosureCheck:
    """alpha in Psi', beta in Psi, p,q>=1, pa+qb in Delta => pa+qb in Psi'."""
    prime = {tuple(x) for x in psi_prime}
    big = {tuple(x) for x in psi}
    in_prime = (lambda c: c in prime or (prime_predicate is not None and prime_predicate(c)))
    h = table.height_bound
    for a in sorted(prime, key=lambda c: (height(c), c)):
        for b in sorted(big, key=lambda c: (height(c), c)):
            for p in range(1, h + 1):
                for q in range(1, h + 1):
                    combo = tuple(p * x + q * y for x, y in zip(a, b))
                    hh = height(combo)
                    if hh > h or hh < -h:
                        if ignore_escapes or (prime_predicate is not None
                                              and prime_predicate(combo)):
                            continue
                        if _could_be_root_beyond(table, combo):
                            raise HeightBoundTooSmall(
                                f"sum {combo} escapes the enumerated region")
                        continue
                    if table.is_root(combo) and not in_prime(combo):
                        return ClosureCheck(False, (a, b, combo))
    return ClosureCheck(True)


def _could_be_root_beyond(table: RootTable, combo: Coords) -> bool:
    # positive or negative cone membership is necessary for roothood
    if not (all(x >= 0 for x in combo) or all(x <= 0 for x in combo)):
        return False
    # finite type enumerated past its highest root has no further roots
    if table.datum.matrix.is_finite_type():
        top = max((height(c) for c in table.real_positive), default=0)
        if top < table.height_bound:
            return False
    return True


def closed_set_predicates(table: RootTable, psi: Iterable[Coords],
                          psi_prime: Iterable[Coords],
                          predicate=None, prime_predicate=None,
                          ignore_escapes: bool = False) -> dict:
    return {
        "is_closed": is_closed_set(table, psi, predicate,
                                   ignore_escapes=ignore_escapes),
        "is_ideal": is_ideal_set(table, psi_prime, psi,
                                 prime_predicate=prime_predicate,
                                 psi_predicate=predicate,
                                 ignore_escapes=ignore_escapes),
    }


# ---------------------------------------------------------------------------
# Tits cone membership


@dataclass
class TitsConeResult:
    status: str                 # inside | outside_certified | indeterminate
    representative: Optional[tuple] = None
    word: Optional[tuple] = None
    certificate: Optional[tuple] = None  # invariant form used for outside
    open_interior: Optional[bool] = None


def tits_cone_membership(datum: RootDatum, v: Sequence, step_cap: int = 500
                         ) -> TitsConeResult:
    """Descent algorithm on essential coordinates.

    While some alpha_i(v) < 0 apply s_i (smallest i); reaching the closed
    fundamental chamber proves membership.  A Weyl-invariant positive kernel
    form that is negative on v certifies non-membership.  The interior flag
    holds when the fixpoint's vanishing set spans a finite-type submatrix.
    """
    matrix = datum.matrix
    n = matrix.n
    v = tuple(Fraction(x) for x in v)
    cert = matrix.invariant_positive_kernel()
    if cert is not None:
        val = sum(c * x for c, x in zip(cert, v))
        if val < 0:
            return TitsConeResult("outside_certified", certificate=cert)
        # affine boundary: the invariant form vanishes on the cone only at 0
        if val == 0 and any(x != 0 for x in v):
            return TitsConeResult("outside_certified", certificate=cert)
    current = v
    word: list = []
    for _ in range(step_cap):
        neg = next((i for i in range(n) if current[i] < 0), None)
        if neg is None:
            zero_set = [i for i in range(n) if current[i] == 0]
            open_flag = matrix.submatrix(zero_set).is_finite_type()
            return TitsConeResult("inside", representative=current,
                                  word=tuple(word), open_interior=open_flag)
        word.append(neg)
        vi = current[neg]
        current = tuple(current[j] - matrix.a(neg, j) * vi for j in range(n))
    # last resort: if -v is strictly inside and the type is infinite, v is out
    if not matrix.is_finite_type():
        opp = tits_cone_membership_descent_only(datum, tuple(-x for x in v), step_cap)
        if opp is not None and opp[1]:
            return TitsConeResult("outside_certified",
                                  certificate=("opposite_interior",))
    return TitsConeResult("indeterminate")


def tits_cone_membership_descent_only(datum: RootDatum, v, step_cap):
    matrix = datum.matrix
    n = matrix.n
    current = tuple(Fraction(x) for x in v)
    for _ in range(step_cap):
        neg = next((i for i in range(n) if current[i] < 0), None)
        if neg is None:
            strict = all(current[i] > 0 for i in range(n)) or \
                matrix.submatrix([i for i in range(n) if current[i] == 0]).is_finite_type()
            return current, strict
        vi = current[neg]
        current = tuple(current[j] - matrix.a(neg, j) * vi for j in range(n))
    return None
