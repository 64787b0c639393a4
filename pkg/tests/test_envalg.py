import random
from fractions import Fraction as F

import pytest

from kmt import rings
from kmt.envalg import (build_context, commutator_constants,
                        exponential_sequence, mitzman_lambda, mitzman_weight,
                        primitive_dimension, primitive_space, twisted_exp)
from kmt.errors import (ContextMismatch, InsufficientDepth, NotAffineContext,
                        ResourceLimit)
from kmt.rootdata import simply_connected_datum, validate_matrix


# ---------------------------------------------------------------------------
# contexts


class TestBuildContext:
    def test_a1_basis(self, a1):
        ctx = build_context(a1, 3)
        assert [tuple(m) for m in ctx.monomials] == \
            [(), ((0, 1),), ((0, 2),), ((0, 3),)]

    def test_a2_degree_two(self, a2_ctx):
        ps = primitive_space(a2_ctx, (1, 1))
        assert ps.dimension == 1

    def test_hyperbolic_f2_quotient_complement(self, hyp3):
        # the staircase below m*alpha and 2*alpha+beta carries the ten-element
        # basis 1, e, e^(2), e^(3), f, ef, e^(2)f, e*f, e(e*f), e^(2)*f
        ctx = build_context(hyp3, 3, "positive", rings.PrimeField(2))
        by_weight = {w: len(ix) for w, ix in ctx.monos_by_weight.items()}
        assert by_weight[(1, 1)] == 2      # ef and e*f
        assert by_weight[(2, 1)] == 3      # e^(2)f, e(e*f), e^(2)*f
        staircase = [(0, 0), (1, 0), (2, 0), (3, 0), (0, 1), (1, 1), (2, 1)]
        assert sum(by_weight[w] for w in staircase) == 10

    def test_negative_side_mirrors(self, a2):
        neg = build_context(a2, 3, "negative")
        pos = build_context(a2, 3, "positive")
        assert len(neg.basis) == len(pos.basis)
        assert neg.signed_root(neg.basis[0].root)[0] <= 0

    def test_height_bound_validation(self, a2):
        from kmt.errors import PreconditionFailed
        with pytest.raises(PreconditionFailed):
            build_context(a2, 0)


class TestMultiply:
    def test_divided_power_binomials(self, a1):
        ctx = build_context(a1, 5)
        for n in range(1, 4):
            for m in range(1, 5 - n + 1):
                en = ctx.monomial_element(((0, n),))
                em = ctx.monomial_element(((0, m),))
                prod = en * em
                k = ctx.mono_index[((0, n + m),)]
                from math import comb
                assert prod.coeffs == {k: F(comb(n + m, n))}

    def test_unit(self, a1t_ctx):
        e = a1t_ctx.basis_element(0)
        assert (a1t_ctx.one() * e) == e == (e * a1t_ctx.one())

    def test_a2_commutator_is_bracket(self, a2_ctx):
        i0 = a2_ctx.basis_by_root[(1, 0)][0]
        i1 = a2_ctx.basis_by_root[(0, 1)][0]
        iz = a2_ctx.basis_by_root[(1, 1)][0]
        e1, e2 = a2_ctx.basis_element(i0), a2_ctx.basis_element(i1)
        z = a2_ctx.basis_element(iz)
        comm = e1 * e2 - e2 * e1
        assert comm in (z, z.scale(F(-1)))

    def test_truncation_flag(self, a2_ctx):
        iz = a2_ctx.basis_by_root[(1, 1)][0]
        top = a2_ctx.monomial_element(((iz, 2),))   # weight height 4 = bound
        res = top * a2_ctx.basis_element(0)
        assert res.truncated

    def test_context_mismatch(self, a2_ctx, a1t_ctx):
        with pytest.raises(ContextMismatch):
            a2_ctx.one() * a1t_ctx.one()


class TestBialgebra:
    def test_primitive_coproduct(self, a1t_ctx):
        e = a1t_ctx.basis_element(0)
        cop = e.coproduct()
        k = next(iter(e.coeffs))
        assert cop == {(k, 0): F(1), (0, k): F(1)}

    def test_counit_vanishes_off_identity(self, a1t_ctx):
        for k, mono in enumerate(a1t_ctx.monomials[:10]):
            el = a1t_ctx.monomial_element(mono)
            if mono:
                assert el.counit() == F(0)
            else:
                assert el.counit() == F(1)

    def test_antipode_involution(self, a1t_ctx):
        rng = random.Random(1)
        for _ in range(10):
            coeffs = {k: F(rng.randint(-3, 3)) for k in
                      rng.sample(range(len(a1t_ctx.monomials)), 5)}
            from kmt.envalg import AlgebraElement
            el = AlgebraElement(a1t_ctx, coeffs)
            assert el.antipode().antipode() == el

    def test_antipode_antimorphism(self, a1t_ctx):
        rng = random.Random(2)
        els = []
        from kmt.envalg import AlgebraElement
        for _ in range(4):
            coeffs = {k: F(rng.randint(-2, 2)) for k in
                      rng.sample(range(len(a1t_ctx.monomials) // 2), 4)}
            els.append(AlgebraElement(a1t_ctx, coeffs))
        for a in els[:2]:
            for b in els[2:]:
                lhs = (a * b).antipode()
                rhs = b.antipode() * a.antipode()
                assert lhs.coeffs == rhs.coeffs

    def test_coassociativity_on_monomials(self, a2_ctx):
        # (nabla x id) nabla = (id x nabla) nabla
        for k, mono in enumerate(a2_ctx.monomials):
            el = a2_ctx.monomial_element(mono)
            cop = el.coproduct()
            lhs = {}
            for (k1, k2), c in cop.items():
                for (a, b), c2 in a2_ctx.monomial_element(
                        a2_ctx.monomials[k1]).coproduct().items():
                    lhs[(a, b, k2)] = lhs.get((a, b, k2), F(0)) + c * c2
            rhs = {}
            for (k1, k2), c in cop.items():
                for (a, b), c2 in a2_ctx.monomial_element(
                        a2_ctx.monomials[k2]).coproduct().items():
                    rhs[(k1, a, b)] = rhs.get((k1, a, b), F(0)) + c * c2
            assert {k: v for k, v in lhs.items() if v} == \
                {k: v for k, v in rhs.items() if v}

    def test_serre_elements_vanish(self, a2_ctx, hyp3_ctx):
        for ctx in (a2_ctx, hyp3_ctx):
            a = ctx.datum.matrix
            for i in range(2):
                for j in range(2):
                    if i == j:
                        continue
                    m = 1 - a.a(i, j)
                    if m > ctx.height_bound - 1:
                        continue
                    ei = ctx.basis_element(ctx.basis_by_root[
                        tuple(1 if k == i else 0 for k in range(2))][0])
                    x = ctx.basis_element(ctx.basis_by_root[
                        tuple(1 if k == j else 0 for k in range(2))][0])
                    for _ in range(m):
                        x = ei * x - x * ei
                    assert x.is_zero()


class TestPrimitives:
    def test_simple_root_lattice(self, a2_ctx):
        ps = primitive_space(a2_ctx, (1, 0))
        assert ps.dimension == 1
        assert ps.lattice[0] == a2_ctx.basis_element(
            a2_ctx.basis_by_root[(1, 0)][0])

    def test_delta_rank_one(self, a1t_ctx):
        assert primitive_space(a1t_ctx, (1, 1)).dimension == 1

    def test_hyperbolic_2a_plus_b(self, hyp3_ctx):
        # rank one with generator ad(e^(2))f
        ps = primitive_space(hyp3_ctx, (2, 1))
        assert ps.dimension == 1
        sl = hyp3_ctx.slice
        _, e = sl.generator_vec(0)
        _, f = sl.generator_vec(1)
        wt, gen = sl.ad_divided(0, 2, (0, 1), f)
        from kmt._linalg import lattice_contains
        assert lattice_contains(hyp3_ctx.root_lattice_basis[(2, 1)], gen)

    def test_dimension_cap(self, a1t):
        with pytest.raises(ResourceLimit):
            primitive_dimension(a1t, (6, 6), word_dim_cap=100)


class TestExponentialSequences:
    def test_real_is_divided_power(self, a1t_ctx):
        i = a1t_ctx.basis_by_root[(0, 1)][0]
        seq = exponential_sequence(a1t_ctx, i)
        assert seq.strategy == "real"
        for n in range(len(seq.terms)):
            mono = ((i, n),) if n else ()
            assert seq.terms[n] == a1t_ctx.monomial_element(mono)

    def test_zero_sequence(self, a1t_ctx):
        seq = exponential_sequence(a1t_ctx, a1t_ctx.zero())
        assert seq.terms[0] == a1t_ctx.one()
        assert all(t.is_zero() for t in seq.terms[1:])

    def test_coproduct_condition(self, a1t_ctx):
        iz = a1t_ctx.basis_by_root[(1, 1)][0]
        seq = exponential_sequence(a1t_ctx, iz)
        for n in range(2, len(seq.terms)):
            cop = seq.terms[n].coproduct()
            expect = {}
            for p in range(n + 1):
                for k1, c1 in seq.terms[p].coeffs.items():
                    for k2, c2 in seq.terms[n - p].coeffs.items():
                        expect[(k1, k2)] = expect.get((k1, k2), F(0)) + c1 * c2
            assert cop == {k: v for k, v in expect.items() if v}

    def test_binomial_congruence_mod_higher(self, a1t_ctx):
        # x^[n] x^[m] = binom(n+m, n) x^[n+m] modulo multiples r >= 2
        from math import comb
        iz = a1t_ctx.basis_by_root[(1, 1)][0]
        seq = exponential_sequence(a1t_ctx, iz)
        lhs = seq.terms[1] * seq.terms[2]
        rhs = seq.terms[3].scale(F(comb(3, 1)))
        diff = lhs - rhs
        for k in diff.coeffs:
            mono = a1t_ctx.monomials[k]
            assert any(a1t_ctx.basis[b].root in ((2, 2), (3, 3))
                       for b, _ in mono)

    def test_mitzman_strategy_on_affine(self, a1t_ctx):
        iz = a1t_ctx.basis_by_root[(1, 1)][0]
        seq = exponential_sequence(a1t_ctx, iz, strategy="mitzman_affine")
        assert seq.strategy == "mitzman_affine"

    def test_mitzman_requires_loop(self, hyp3_ctx):
        iz = hyp3_ctx.basis_by_root[(1, 1)][0]
        with pytest.raises(NotAffineContext):
            exponential_sequence(hyp3_ctx, iz, strategy="mitzman_affine")

    def test_solver_strategy_on_hyperbolic(self, hyp3_ctx):
        iz = hyp3_ctx.basis_by_root[(1, 1)][0]
        seq = exponential_sequence(hyp3_ctx, iz)
        assert seq.strategy == "solver"
        cop = seq.terms[2].coproduct()
        expect = {}
        for p in range(3):
            for k1, c1 in seq.terms[p].coeffs.items():
                for k2, c2 in seq.terms[2 - p].coeffs.items():
                    expect[(k1, k2)] = expect.get((k1, k2), F(0)) + c1 * c2
        assert cop == {k: v for k, v in expect.items() if v}


class TestTwistedExp:
    def test_zero_scalar(self, a1t_ctx):
        iz = a1t_ctx.basis_by_root[(1, 1)][0]
        seq = exponential_sequence(a1t_ctx, iz)
        assert twisted_exp(seq, F(0)) == a1t_ctx.one()

    def test_group_like_and_inverse(self, a1t_ctx):
        from kmt.groupfilt import is_group_like
        iz = a1t_ctx.basis_by_root[(1, 1)][0]
        seq = exponential_sequence(a1t_ctx, iz)
        g = twisted_exp(seq, F(5, 3))
        assert is_group_like(g)
        assert g * g.antipode() == a1t_ctx.one()
        assert g.antipode() * g == a1t_ctx.one()

    def test_insufficient_depth(self, a1t_ctx):
        iz = a1t_ctx.basis_by_root[(1, 1)][0]
        seq = exponential_sequence(a1t_ctx, iz, n_max=1)
        with pytest.raises(InsufficientDepth):
            twisted_exp(seq, F(1))


class TestPBW:
    @pytest.mark.parametrize("weight", [(1, 1), (2, 2), (3, 3), (2, 1)])
    def test_unimodular_a1t(self, a1t_ctx, weight):
        assert a1t_ctx.pbw_unimodularity(weight) in (1, -1)

    def test_unimodular_hyp(self, hyp3_ctx):
        for wt in hyp3_ctx.monos_by_weight:
            if sum(wt) == 0:
                continue
            assert hyp3_ctx.pbw_unimodularity(wt) in (1, -1), wt


class TestMitzman:
    def test_lambda2(self):
        assert mitzman_lambda(2) == {((1, 2),): F(1, 2), ((2, 1),): F(1, 2)}

    def test_lambda3(self):
        # Z1^(3) + (1/2) Z1 Z2 + (1/3) Z3
        assert mitzman_lambda(3) == {((1, 3),): F(1, 6),
                                     ((1, 1), (2, 1)): F(1, 2),
                                     ((3, 1),): F(1, 3)}

    def test_powers_specialization(self):
        for n in range(9):
            assert mitzman_lambda(n, [F(7) ** j for j in range(1, n + 1)]) \
                == F(7) ** n

    def test_geometric_specialization(self):
        t, Z = F(2), F(5)
        for n in range(1, 9):
            binom = F(1)
            for k in range(n):
                binom *= F(Z + n - 1 - k, k + 1)
            val = mitzman_lambda(n, [t ** j * Z for j in range(1, n + 1)])
            assert val == t ** n * binom

    def test_first_specialization(self):
        # Z_i = 0 for i >= 2 gives Lambda_n = Z1^(n)
        z = F(3)
        for n in range(1, 9):
            fact = F(1)
            for t in range(1, n + 1):
                fact *= t
            assert mitzman_lambda(n, [z] + [F(0)] * (n - 1)) == z ** n / fact

    def test_convolution(self):
        rng = random.Random(13)
        for n in range(9):
            zs = [F(rng.randint(-5, 5)) for _ in range(n + 1)]
            zps = [F(rng.randint(-5, 5)) for _ in range(n + 1)]
            lhs = mitzman_lambda(n, [a + b for a, b in zip(zs, zps)])
            rhs = sum(mitzman_lambda(p, zs) * mitzman_lambda(n - p, zps)
                      for p in range(n + 1))
            assert lhs == rhs

    def test_weights(self):
        assert all(mitzman_weight(n) for n in range(9))


class TestCommutatorConstants:
    def test_a2_against_sl3_oracle(self, a2):
        from tests_oracles import sl3_constant
        oracle = sl3_constant()
        tab = commutator_constants(a2, (1, 0), (0, 1))
        assert set(tab.constants) == {(1, 1)}
        assert abs(tab.constants[(1, 1)]) == abs(oracle) == 1

    def test_b2_against_sp4_oracle(self, b2):
        from tests_oracles import sp4_constants
        c11, c12 = sp4_constants()
        tab = commutator_constants(b2, (1, 0), (0, 1))
        assert len(tab.interval) == 4
        assert set(tab.constants) == {(1, 1), (1, 2)}
        assert abs(tab.constants[(1, 1)]) == abs(c11)
        assert abs(tab.constants[(1, 2)]) == abs(c12)

    def test_commuting_pair_empty_table(self):
        aa = simply_connected_datum(validate_matrix([[2, 0], [0, 2]]))
        tab = commutator_constants(aa, (1, 0), (0, 1))
        assert tab.constants == {}

    def test_not_prenilpotent(self, a1t):
        from kmt.errors import NotPrenilpotent
        with pytest.raises(NotPrenilpotent):
            commutator_constants(a1t, (0, 1), (1, 0))
