from fractions import Fraction as F

import pytest

from kmt.errors import NotKacMoody, NotRealRoot, PreconditionFailed
from kmt.rootdata import (classify_pair, closed_set_predicates,
                          enumerate_roots, extend_datum, is_ideal_set,
                          tits_cone_membership, validate_matrix, weyl)


class TestValidateMatrix:
    def test_affine_sl2(self):
        m = validate_matrix([[2, -2], [-2, 2]])
        assert m.max_offdiagonal == 2

    def test_rank_one_empty_max(self):
        assert validate_matrix([[2]]).max_offdiagonal == 0

    def test_zero_symmetry_violation(self):
        with pytest.raises(NotKacMoody) as exc:
            validate_matrix([[2, -1], [0, 2]])
        assert any(v[0] == "iii" for v in exc.value.violations)

    def test_all_violations_reported(self):
        with pytest.raises(NotKacMoody) as exc:
            validate_matrix([[1, 3], [0, 2]])
        kinds = {v[0] for v in exc.value.violations}
        assert kinds == {"i", "ii", "iii"}

    def test_type_detection(self):
        assert validate_matrix([[2, -1], [-1, 2]]).is_finite_type()
        assert validate_matrix([[2, -2], [-2, 2]]).is_affine_type()
        hyp = validate_matrix([[2, -3], [-3, 2]])
        assert not hyp.is_finite_type() and not hyp.is_affine_type()


class TestData:
    def test_a1_simply_connected(self, a1):
        assert a1.rank_Y == 1
        assert a1.coroots == ((1,),)
        assert a1.pair((1,), (1,)) == 2  # alpha(alpha^v) = 2

    def test_a1t_not_free(self, a1t):
        # alpha_0 = -alpha_1 as covectors: rank of roots is 1
        assert not a1t.is_free
        assert a1t.is_cofree and a1t.is_cotorsion_free

    def test_a2_free(self, a2):
        assert a2.is_free  # det A = 3 != 0

    def test_loop_datum_flags(self, loop_datum):
        assert not loop_datum.is_free and not loop_datum.is_cofree


class TestExtendDatum:
    def test_sc_dimension_and_flags(self, a1t):
        ext = extend_datum(a1t, "sc")
        assert ext.datum.rank_Y == 4
        assert ext.datum.is_cofree and ext.datum.is_cotorsion_free
        assert ext.morphism.check()

    def test_sc_on_nonfree_loop(self, loop_datum):
        ext = extend_datum(loop_datum, "sc")
        assert ext.datum.is_cofree and ext.datum.is_cotorsion_free
        assert ext.morphism.check()

    def test_ell_free_with_direct_factor(self, a2):
        from kmt._linalg import smith_invariants
        ext = extend_datum(a2, "ell")
        assert ext.datum.rank_Y == 4
        assert ext.datum.is_free
        # Q is a direct factor of X^ell: invariant factors of the root matrix
        inv = smith_invariants([list(r) for r in ext.datum.root_covectors])
        assert all(d == 1 for d in inv)
        assert ext.morphism.check()

    def test_sc_projection_recovers(self, a2):
        ext = extend_datum(a2, "sc")
        # forgetting the u-coordinates is the defining morphism
        for i in range(a2.n):
            assert ext.morphism.apply(ext.datum.coroots[i]) == a2.coroots[i]

    def test_mat_dimension(self, a2):
        ext = extend_datum(a2, "mat")
        assert ext.datum.rank_Y == 2  # 2r - s = 4 - 2
        assert ext.datum.is_free and ext.datum.is_cofree
        assert ext.datum.is_cotorsion_free
        assert ext.morphism.check()

    def test_mat_precondition(self, a1t):
        with pytest.raises(PreconditionFailed):
            extend_datum(a1t, "mat")  # not free

    def test_sc_always_cofree_cotorsionfree(self, a1, a2, a1t, hyp3):
        for d in (a1, a2, a1t, hyp3):
            e = extend_datum(d, "sc").datum
            assert e.is_cofree and e.is_cotorsion_free
            e2 = extend_datum(d, "ell").datum
            assert e2.is_free


class TestEnumerateRoots:
    def test_a1t_height5(self, a1t):
        t = enumerate_roots(a1t, 5)
        # delta = alpha_0 + alpha_1; reals are alpha_i + n delta
        assert set(t.real_positive) == {(0, 1), (1, 0), (1, 2), (2, 1),
                                        (2, 3), (3, 2)}
        assert t.imaginary_positive == {(1, 1): 1, (2, 2): 1}

    def test_hyperbolic_smallest_roots(self, hyp3):
        t = enumerate_roots(hyp3, 4)
        assert (1, 3) in t.real_positive and (3, 1) in t.real_positive
        for im in ((1, 1), (2, 1), (1, 2)):
            assert im in t.imaginary_positive

    def test_height_one_gives_simples(self, a2, hyp3):
        for d in (a2, hyp3):
            t = enumerate_roots(d, 1)
            assert t.positive == [(0, 1), (1, 0)]
            assert all(t.mult(c) == 1 for c in t.positive)

    def test_weyl_invariance_of_mult(self, a1t):
        t = enumerate_roots(a1t, 4)
        for coords in t.positive:
            for i in range(2):
                img = weyl(a1t, (i,)).action_q(coords)
                if any(x < 0 for x in img):
                    continue
                if sum(img) <= 4:
                    assert t.mult(img) == t.mult(coords)

    def test_degree_bound(self, a1t, a2):
        # height(s_i alpha) <= (1 + M) height(alpha) off the flipped simple
        for datum in (a1t, a2):
            M = datum.matrix.max_offdiagonal
            t = enumerate_roots(datum, 8, multiplicities=False)
            for coords in t.positive:
                for i in range(datum.n):
                    if coords == tuple(1 if k == i else 0 for k in range(datum.n)):
                        continue
                    img = weyl(datum, (i,)).action_q(coords)
                    assert sum(img) <= (1 + M) * sum(coords)


class TestWeylElement:
    def test_reduced_length(self, a2):
        assert weyl(a2, (0, 1, 0)).reduced_length == 3
        assert weyl(a2, (0, 0)).reduced_length == 0
        assert weyl(a2, (0, 1, 0, 1)).reduced_length == 2  # braid: s0s1s0s1 = s1s0

    def test_exchange_condition_signs(self, a1t, a2):
        # every word of length <= 6 sends Delta+ minus its inversion set into
        # Delta+: check signs of images of enumerated positive roots
        import itertools
        for datum in (a1t, a2):
            t = enumerate_roots(datum, 5, multiplicities=False)
            for length in range(7):
                for word in itertools.product(range(datum.n), repeat=length):
                    w = weyl(datum, word)
                    neg = 0
                    for coords in t.positive:
                        img = w.action_q(coords)
                        assert all(x >= 0 for x in img) or all(x <= 0 for x in img)
                        if all(x <= 0 for x in img):
                            neg += 1
                    assert neg <= w.reduced_length
                if length > 3 and datum.n == 2:
                    break  # the dihedral pattern repeats; keep the loop short

    def test_action_matrices_consistent(self, a2):
        w = weyl(a2, (0, 1))
        m = w.action_q_matrix()
        for j in range(2):
            e = tuple(1 if k == j else 0 for k in range(2))
            img = w.action_q(e)
            assert tuple(m[i][j] for i in range(2)) == img


class TestClassifyPair:
    def test_a2_simple_pair(self, a2):
        res = classify_pair(a2, (1, 0), (0, 1))
        assert res.status == "prenilpotent"
        assert res.interval == [(1, 0), (1, 1), (0, 1)]
        w, wn = res.witness_positive, res.witness_negative
        assert all(x >= 0 for x in w.action_q((1, 0)))
        assert all(x <= 0 for x in wn.action_q((0, 1)))

    def test_pair_with_itself(self, a2):
        res = classify_pair(a2, (1, 0), (1, 0))
        assert res.status == "prenilpotent" and res.interval == [(1, 0)]

    def test_a1t_opposite_sides_of_delta(self, a1t):
        res = classify_pair(a1t, (0, 1), (1, 0))
        assert res.status == "not_prenilpotent"
        assert res.obstruction == (1, 1)

    def test_opposite_pair(self, a2):
        res = classify_pair(a2, (1, 0), (-1, 0))
        assert res.status == "not_prenilpotent"

    def test_not_real_raises(self, a1t):
        with pytest.raises(NotRealRoot):
            classify_pair(a1t, (1, 1), (1, 0))


class TestClosedSets:
    def test_singleton_closed_not_ideal(self, a2):
        t = enumerate_roots(a2, 3, multiplicities=False)
        out = closed_set_predicates(t, [(1, 0)], [(1, 0)])
        assert out["is_closed"].ok
        chk = is_ideal_set(t, [(1, 0)], [(1, 0), (0, 1), (1, 1)])
        assert not chk.ok and chk.violation[2] == (1, 1)

    def test_degree_filter_is_ideal(self, a1t):
        t = enumerate_roots(a1t, 5, multiplicities=False)
        psi_d = [c for c in t.positive if sum(c) >= 2]
        chk = is_ideal_set(t, psi_d, t.positive,
                           prime_predicate=lambda c: sum(c) >= 2)
        assert chk.ok

    def test_delta_plus_minus_simple_is_ideal(self, a1t):
        t = enumerate_roots(a1t, 5, multiplicities=False)
        psi = [c for c in t.positive if c != (0, 1)]
        chk = is_ideal_set(t, psi, t.positive,
                           prime_predicate=lambda c: c != (0, 1) and all(
                               x >= 0 for x in c))
        assert chk.ok


class TestTitsCone:
    def test_dominant_inside(self, a1t):
        r = tits_cone_membership(a1t, (F(1), F(2)))
        assert r.status == "inside" and r.word == ()

    def test_negative_delta_outside(self, a1t):
        # delta is Weyl invariant and nonnegative on the cone
        r = tits_cone_membership(a1t, (-3, 1))
        assert r.status == "outside_certified"
        assert r.certificate == (F(1), F(1))

    def test_positive_delta_inside(self, a1t):
        r = tits_cone_membership(a1t, (5, -1))
        assert r.status == "inside"
        rep = r.representative
        assert all(x >= 0 for x in rep)

    def test_finite_type_everything_inside(self, a2):
        for v in ((3, -5), (-2, -7), (1, 1)):
            assert tits_cone_membership(a2, v).status == "inside"

    def test_indefinite_indeterminate(self, hyp3):
        r = tits_cone_membership(hyp3, (1, -1), step_cap=60)
        assert r.status in ("indeterminate", "outside_certified")
