import random
from fractions import Fraction as F

import pytest

from kmt import rings
from kmt.apartment import FinitePointSet, f_omega
from kmt.envalg import build_context
from kmt.errors import (CharacterDegenerate, NotGroupLike, NotIdeal,
                        SupportEscapesPsi)
from kmt.groupfilt import (GroupLikeElement, conjugation_solve,
                           decompose, degree_bound_audit,
                           density_counterexample_6_10, evaluate_factors,
                           exp_element, factorize, is_group_like,
                           omega_membership, split_off_left)
from kmt.rootdata import simply_connected_datum, validate_matrix


def random_group_element(ctx, rng, bound=3, count=None):
    entries = []
    basis = list(ctx.basis)
    if count is not None:
        basis = rng.sample(basis, min(count, len(basis)))
    for b in basis:
        entries.append((b.index, F(rng.randint(-bound, bound),
                                   rng.choice([1, 1, 2]))))
    rng.shuffle(entries)
    return evaluate_factors(ctx, entries)


class TestGroupLike:
    def test_exp_is_group_like(self, a1t_ctx):
        for b in a1t_ctx.basis:
            g = exp_element(a1t_ctx, b.index, F(2, 5))
            assert is_group_like(g)

    def test_products_and_inverses_stay_group_like(self, a1t_ctx):
        rng = random.Random(4)
        for _ in range(10):
            u = random_group_element(a1t_ctx, rng, count=4)
            v = random_group_element(a1t_ctx, rng, count=4)
            assert is_group_like(u * v)
            assert is_group_like(u.antipode())
            assert u * u.antipode() == a1t_ctx.one()

    def test_group_axioms_at_truncation(self, a1t_ctx):
        rng = random.Random(8)
        for _ in range(5):
            u = random_group_element(a1t_ctx, rng, count=3)
            v = random_group_element(a1t_ctx, rng, count=3)
            w = random_group_element(a1t_ctx, rng, count=3)
            assert (u * v) * w == u * (v * w)

    def test_rejects_non_group_like(self, a1t_ctx):
        bad = a1t_ctx.one() + a1t_ctx.basis_element(0).scale(F(1)) \
            + a1t_ctx.basis_element(0) * a1t_ctx.basis_element(0)
        with pytest.raises(NotGroupLike):
            GroupLikeElement(bad)


class TestFactorize:
    def test_single_factor(self, a1t_ctx):
        g = exp_element(a1t_ctx, 2, F(7, 3))
        form = factorize(g)
        nz = form.nonzero()
        assert nz == [(2, F(7, 3))]

    def test_round_trip_many(self, a1t_ctx, a2_ctx, hyp3_ctx):
        rng = random.Random(99)
        for ctx in (a1t_ctx, a2_ctx, hyp3_ctx):
            for _ in range(25):
                u = random_group_element(ctx, rng)
                form = factorize(u)
                assert form.evaluate() == u

    def test_reversed_product_produces_commutator_term(self, a2_ctx):
        # [exp]a e1 . [exp]b e2 with the peel order e2-first picks up the
        # commutator coordinate +-ab on the interval root
        a, b = F(2), F(5)
        i1 = a2_ctx.basis_by_root[(1, 0)][0]
        i2 = a2_ctx.basis_by_root[(0, 1)][0]
        iz = a2_ctx.basis_by_root[(1, 1)][0]
        u = exp_element(a2_ctx, i1, a) * exp_element(a2_ctx, i2, b)
        form = factorize(u)   # context order puts e2 = (0,1) first
        got = dict(form.nonzero())
        assert got[i1] == a and got[i2] == b
        assert got.get(iz, F(0)) in (a * b, -a * b)

    def test_support_escape(self, a1t_ctx):
        g = exp_element(a1t_ctx, 0, F(1)) * exp_element(a1t_ctx, 1, F(1))
        with pytest.raises(SupportEscapesPsi):
            factorize(g, psi=[a1t_ctx.basis[0].root])

    def test_fingerprint_recorded(self, a1t_ctx):
        form = factorize(exp_element(a1t_ctx, 0, F(1)))
        assert "real" in form.sequence_fingerprint
        assert "mitzman" in form.sequence_fingerprint


class TestDecompose:
    def test_semidirect_simple_split(self, a1t_ctx):
        # Psi = Delta+, Psi' = Delta+ minus a simple root: u = exp(l e) . u'
        rng = random.Random(6)
        alpha = (0, 1)
        psi = list(a1t_ctx.roots)
        psi_prime = [r for r in psi if r != alpha]
        u = random_group_element(a1t_ctx, rng)
        dec = decompose(u, psi_prime, psi, require="ideal")
        nz = dec.part_first.nonzero()
        assert all(a1t_ctx.basis[b].root == alpha for b, _ in nz)
        assert dec.first_element * dec.second_element == u

    def test_both_orders_round_trip(self, a1t_ctx):
        # both parts closed: Psi' = Delta+ minus a simple root, rest = {alpha}
        rng = random.Random(61)
        psi = list(a1t_ctx.roots)
        psi_prime = [r for r in psi if r != (0, 1)]
        for _ in range(10):
            u = random_group_element(a1t_ctx, rng, count=5)
            d1 = decompose(u, psi_prime, psi, prime_side="right")
            assert d1.first_element * d1.second_element == u
            d2 = decompose(u, psi_prime, psi, prime_side="left")
            assert d2.first_element * d2.second_element == u
            # uniqueness: refactorizing the parts reproduces the coefficients
            again = decompose(d1.first_element * d1.second_element,
                              psi_prime, psi, prime_side="right")
            assert again.part_first.entries == d1.part_first.entries

    def test_already_inside(self, a1t_ctx):
        psi = list(a1t_ctx.roots)
        psi_prime = [r for r in psi if sum(r) >= 2]
        u = exp_element(a1t_ctx, a1t_ctx.basis_by_root[(1, 1)][0], F(3))
        dec = decompose(u, psi_prime, psi, require="ideal")
        assert dec.first_element == a1t_ctx.one()
        assert dec.second_element == u

    def test_ideal_conjugation_stability(self, a1t_ctx):
        # conjugates of U_{Psi'} elements stay supported on U(Psi')
        rng = random.Random(17)
        psi = list(a1t_ctx.roots)
        psi_prime = {r for r in psi if sum(r) >= 2}
        from kmt.groupfilt import _supported_on
        for _ in range(5):
            u = random_group_element(a1t_ctx, rng, count=4)
            v = exp_element(a1t_ctx, a1t_ctx.basis_by_root[(1, 1)][0],
                            F(rng.randint(-2, 2)))
            conj = u * v * u.antipode()
            assert _supported_on(a1t_ctx, conj, psi_prime)

    def test_not_ideal_raises(self, a1t_ctx):
        psi = list(a1t_ctx.roots)
        bad_prime = [(0, 1)]   # a simple root is not an ideal
        with pytest.raises(NotIdeal):
            decompose(exp_element(a1t_ctx, 0, F(1)), bad_prime, psi,
                      require="ideal")

    def test_degree_quotient_additive(self, a1t_ctx):
        # U(d)/U(d+1) is additive: image of a product is the sum of images
        rng = random.Random(41)
        d = 2
        deg_d = [r for r in a1t_ctx.roots if sum(r) == d]
        psi_d = [r for r in a1t_ctx.roots if sum(r) >= d]
        psi_d1 = [r for r in a1t_ctx.roots if sum(r) >= d + 1]

        def image(u):
            ent, _ = split_off_left(u, set(deg_d))
            return {b: lam for b, lam in ent}

        for _ in range(10):
            parts1 = [(a1t_ctx.basis_by_root[r][0], F(rng.randint(-3, 3)))
                      for r in psi_d]
            parts2 = [(a1t_ctx.basis_by_root[r][0], F(rng.randint(-3, 3)))
                      for r in psi_d]
            u1 = evaluate_factors(a1t_ctx, parts1)
            u2 = evaluate_factors(a1t_ctx, parts2)
            img = image(u1 * u2)
            img1, img2 = image(u1), image(u2)
            for b in img:
                assert img[b] == img1.get(b, F(0)) + img2.get(b, F(0))

    def test_images_commute_in_quotient(self, a1t_ctx):
        # alpha, beta in Psi with alpha + beta in Psi' forces commuting images
        rng = random.Random(43)
        psi = [r for r in a1t_ctx.roots if sum(r) <= 2]
        psi_prime = [r for r in psi if sum(r) == 2]
        from kmt.groupfilt import _supported_on
        for _ in range(5):
            u = exp_element(a1t_ctx, 0, F(rng.randint(-3, 3)))
            v = exp_element(a1t_ctx, 1, F(rng.randint(-3, 3)))
            comm = u * v * u.antipode() * v.antipode()
            assert _supported_on(a1t_ctx, comm,
                                 {r for r in a1t_ctx.roots if sum(r) >= 2})


class TestOmegaMembership:
    def setup_method(self):
        datum = simply_connected_datum(validate_matrix([[2, -2], [-2, 2]]))
        self.ctx = build_context(datum, 4, "positive",
                                 rings.PAdicRationals(2))
        self.datum = datum

    def test_origin_is_integrality(self):
        omega = FinitePointSet.of((0, 0))
        f = lambda root: f_omega(self.datum, omega, root)
        good = exp_element(self.ctx, 0, F(6)) * exp_element(self.ctx, 2, F(3))
        assert omega_membership(good, f).ok
        bad = exp_element(self.ctx, 0, F(1, 2))
        rep = omega_membership(bad, f)
        assert not rep.ok
        offending = [r for r in rep.factors if not r.ok]
        assert offending and offending[0].lam == F(1, 2)

    def test_monotone_in_omega(self):
        rng = random.Random(3)
        small = FinitePointSet.of((0, 0))
        big = FinitePointSet.of((0, 0), (-1, 1))
        f_small = lambda root: f_omega(self.datum, small, root)
        f_big = lambda root: f_omega(self.datum, big, root)
        for _ in range(20):
            entries = [(b.index, F(rng.randint(-4, 4) * 2))
                       for b in self.ctx.basis]
            u = evaluate_factors(self.ctx, entries)
            if omega_membership(u, f_big).ok:
                assert omega_membership(u, f_small).ok

    def test_subgroup_closure(self):
        rng = random.Random(31)
        omega = FinitePointSet.of((0, 0), (-2, 2))
        f = lambda root: f_omega(self.datum, omega, root)

        def random_member():
            entries = []
            for b in self.ctx.basis:
                level = f(self.ctx.signed_root(b.root))
                k = max(0, int(level.r)) if level.kind != "inf" else 10
                entries.append((b.index,
                                F(rng.randint(-2, 2) * 2 ** k)))
            return evaluate_factors(self.ctx, entries)

        for _ in range(10):
            u, v = random_member(), random_member()
            assert omega_membership(u * v, f).ok
            assert omega_membership(u.antipode(), f).ok


class TestDensity:
    def test_m3_full_report(self):
        rep = density_counterexample_6_10(3)
        assert rep.quotient_order == 16
        assert rep.word_group_order == 8
        assert not rep.missing_in_word_group
        assert rep.ab2_identity and rep.ab4_is_one and rep.ab2_equals_ba2
        assert rep.complement_dimension == 10
        assert rep.complement_weights == [(0, 0), (0, 1), (1, 0), (1, 1),
                                          (2, 0), (2, 1), (3, 0)]

    def test_m4_same_failure(self):
        rep = density_counterexample_6_10(4)
        assert rep.quotient_order == 16
        assert rep.word_group_order == 8
        assert not rep.missing_in_word_group

    def test_char_zero_commutators_generate(self, a1t_ctx):
        # over Q each degree quotient is generated by commutator classes
        # (exp e_i) h (exp -e_i) h^-1 with h one degree lower
        from kmt._linalg import RowSpace, vec
        ctx = a1t_ctx
        for deg in range(2, 5):
            lower = [b for b in ctx.basis if sum(b.root) == deg - 1]
            target = [b for b in ctx.basis if sum(b.root) == deg]
            if not target:
                continue
            span = RowSpace(len(ctx.basis))
            for i in range(2):
                ei = exp_element(ctx, ctx.basis_by_root[
                    tuple(1 if k == i else 0 for k in range(2))][0], F(1))
                for b in lower:
                    h = exp_element(ctx, b.index, F(1))
                    comm = ei * h * ei.antipode() * h.antipode()
                    ent, _ = split_off_left(comm, {x.root for x in target})
                    coords = [F(0)] * len(ctx.basis)
                    for bidx, lam in ent:
                        coords[bidx] = lam
                    span.add(vec(coords))
            assert span.rank >= len(target)


class TestConjugationSolve:
    def test_identity_input(self, a1t_ctx):
        sol = conjugation_solve(a1t_ctx, [F(3), F(2)], a1t_ctx.one())
        assert sol.verified and sol.v == a1t_ctx.one()

    def test_single_exponential(self, a1t_ctx):
        u = exp_element(a1t_ctx, a1t_ctx.basis_by_root[(0, 1)][0], F(1))
        sol = conjugation_solve(a1t_ctx, [F(3), F(2)], u)
        assert sol.verified

    def test_degenerate_character(self, a1t_ctx):
        with pytest.raises(CharacterDegenerate):
            conjugation_solve(a1t_ctx, [F(2), F(1)], a1t_ctx.one())
        with pytest.raises(CharacterDegenerate):
            # delta(t) = 1 even though the simple values differ from 1
            conjugation_solve(a1t_ctx, [F(2), F(1, 2)], a1t_ctx.one())

    def test_random_pairs(self, a1t_ctx):
        rng = random.Random(2012)
        for _ in range(10):
            u = random_group_element(a1t_ctx, rng, count=5)
            sol = conjugation_solve(a1t_ctx, [F(3), F(2)], u)
            assert sol.verified


class TestDegreeBoundAudit:
    def test_a1t_bound_three(self, a1t):
        audit = degree_bound_audit(a1t, 8)
        assert audit.ok and audit.bound == 3
        assert audit.max_ratio <= 3

    def test_a2_bound_two(self, a2):
        audit = degree_bound_audit(a2, 3)
        assert audit.ok and audit.max_ratio <= 2

    def test_rank_one_vacuous(self, a1):
        audit = degree_bound_audit(a1, 3)
        assert audit.ok and audit.max_ratio is None
