"""Independent matrix oracles shared by the unit and acceptance suites.

Commutator constants are recomputed here with plain nilpotent matrices over
Q; these stay deliberately decoupled from the enveloping-algebra code paths
they check.
"""

from fractions import Fraction as F


def mat_mul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)]


def mat_exp_nilpotent(x):
    n = len(x)
    out = [[F(1) if i == j else F(0) for j in range(n)] for i in range(n)]
    term = [[F(1) if i == j else F(0) for j in range(n)] for i in range(n)]
    k = 1
    while True:
        term = mat_mul(term, x)
        if all(all(v == 0 for v in row) for row in term):
            break
        fact = F(1)
        for t in range(1, k + 1):
            fact *= t
        out = [[out[i][j] + term[i][j] / fact for j in range(n)]
               for i in range(n)]
        k += 1
    return out


def elem(n, i, j, c=F(1)):
    m = [[F(0)] * n for _ in range(n)]
    m[i][j] = F(c)
    return m


def mat_scale(c, a):
    return [[c * v for v in row] for row in a]


def mat_add(a, b):
    return [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(a, b)]


def group_commutator(e_a, e_b, r, rp):
    big_a = mat_exp_nilpotent(mat_scale(r, e_a))
    big_b = mat_exp_nilpotent(mat_scale(rp, e_b))
    inv_a = mat_exp_nilpotent(mat_scale(-r, e_a))
    inv_b = mat_exp_nilpotent(mat_scale(-rp, e_b))
    return mat_mul(mat_mul(big_a, big_b), mat_mul(inv_a, inv_b))


def sl3_constant():
    """(exp r E12, exp r' E23) = exp(C r r' E13): the constant C."""
    e_a, e_b = elem(3, 0, 1), elem(3, 1, 2)
    vals = set()
    for (r, rp) in ((F(1), F(1)), (F(2), F(3)), (F(-1), F(5))):
        k = group_commutator(e_a, e_b, r, rp)
        assert k[0][1] == 0 and k[1][2] == 0
        vals.add(k[0][2] / (r * rp))
    assert len(vals) == 1
    return vals.pop()


def sp4_constants():
    """(C11, C12) for the length-four interval in a 4x4 realization:
    commutator = exp(C11 r r' X11) exp(C12 r r'^2 X12) with X11 = [e1, e2]
    and X12 = [[e1, e2], e2] / 2."""
    e1 = elem(4, 1, 2)
    e2 = mat_add(elem(4, 0, 1), elem(4, 2, 3))
    x11 = mat_add(mat_mul(e1, e2), mat_scale(F(-1), mat_mul(e2, e1)))
    x12 = mat_scale(F(1, 2),
                    mat_add(mat_mul(x11, e2),
                            mat_scale(F(-1), mat_mul(e2, x11))))
    outs = set()
    for (r, rp) in ((F(1), F(1)), (F(2), F(3)), (F(5), F(-2))):
        k = group_commutator(e1, e2, r, rp)
        u = k[0][2] / x11[0][2]
        v = (k[0][3] - (u * u / 2) * mat_mul(x11, x11)[0][3]) / x12[0][3]
        recon = mat_mul(mat_exp_nilpotent(mat_scale(u, x11)),
                        mat_exp_nilpotent(mat_scale(v, x12)))
        assert recon == k, "oracle factorization failed"
        outs.add((u / (r * rp), v / (r * rp * rp)))
    assert len(outs) == 1
    return outs.pop()
