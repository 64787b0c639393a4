"""Command-line front end: root enumeration plus the reproduction demos.

Every demo reruns one worked computation on its pinned inputs and prints one PASS/FAIL
line per checked identity; ``--format json`` emits the structured report on
stdout instead.  Exit codes: 0 all checks pass, 1 a check failed, 2 usage or
input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from importlib import resources

from . import serialize
from .errors import KmtError, UnknownDemo
from .rootdata import enumerate_roots, simply_connected_datum, validate_matrix

DEMOS = ("sl2-exp", "free-product", "counterexample-6-10", "conjugate-solve",
         "mitzman", "commutator-constants", "enclosure", "fixator-compare")


def fixture_path(name: str) -> str:
    return str(resources.files("kmt").joinpath("data", name))


def _max_height_cap() -> int:
    return int(os.environ.get("KMT_MAX_HEIGHT", "24"))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="kmt",
        description="exact Kac-Moody computations: roots, enveloping algebra, "
                    "loop matrices, apartment geometry")
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command")

    p_roots = sub.add_parser("roots", parents=[shared],
                             help="enumerate positive roots")
    p_roots.add_argument("--matrix", required=True,
                         help="root datum document (.json or .toml)")
    p_roots.add_argument("--height", type=int, required=True)
    p_roots.add_argument("--no-mult", action="store_true",
                         help="skip multiplicity computation")

    p_demo = sub.add_parser("demo", parents=[shared],
                            help="reproduction demos")
    p_demo.add_argument("name", choices=DEMOS)
    p_demo.add_argument("--n", type=int, default=1, help="loop index for sl2-exp")
    p_demo.add_argument("--lambda", dest="lam", default="1/3",
                        help="scalar for sl2-exp")
    p_demo.add_argument("--window", type=int, default=8)
    p_demo.add_argument("--m", type=int, default=3,
                        help="matrix order for counterexample-6-10")

    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        if args.command == "roots":
            return cmd_roots(args)
        return cmd_demo(args)
    except (KmtError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(serialize.dumps({"error": type(exc).__name__,
                               "message": str(exc)}), file=sys.stderr)
        return 2


def cmd_roots(args) -> int:
    if args.height < 1 or args.height > _max_height_cap():
        print(serialize.dumps({"error": "UsageError",
                               "message": f"height must be in 1..{_max_height_cap()} "
                                          "(KMT_MAX_HEIGHT)"}), file=sys.stderr)
        return 2
    datum = serialize.load_datum(args.matrix)
    table = enumerate_roots(datum, args.height,
                            multiplicities=not args.no_mult)
    rows = serialize.roots_json(table)
    if args.format == "json":
        print(serialize.dumps(rows))
    else:
        for r in rows:
            kind = "real" if r["real"] else "imaginary"
            print(f"{r['root']}  mult={r['mult']}  {kind}")
    return 0


class Checks:
    def __init__(self):
        self.entries = []

    def add(self, name: str, ok: bool, detail=None):
        self.entries.append({"check": name, "pass": bool(ok),
                             "detail": detail})

    @property
    def ok(self) -> bool:
        return all(e["pass"] for e in self.entries)

    def emit(self, fmt: str, extra=None) -> int:
        if fmt == "json":
            payload = {"checks": self.entries, "pass": self.ok}
            if extra:
                payload.update(extra)
            print(serialize.dumps(payload))
        else:
            for e in self.entries:
                mark = "PASS" if e["pass"] else "FAIL"
                detail = f"  [{e['detail']}]" if e["detail"] else ""
                print(f"{mark}  {e['check']}{detail}")
        return 0 if self.ok else 1


def cmd_demo(args) -> int:
    name = args.name
    if name == "sl2-exp":
        return demo_sl2_exp(args)
    if name == "free-product":
        return demo_free_product(args)
    if name == "counterexample-6-10":
        return demo_counterexample(args)
    if name == "conjugate-solve":
        return demo_conjugate_solve(args)
    if name == "mitzman":
        return demo_mitzman(args)
    if name == "commutator-constants":
        return demo_commutators(args)
    if name == "enclosure":
        return demo_enclosure(args)
    if name == "fixator-compare":
        return demo_fixator(args)
    raise UnknownDemo(name)


def demo_sl2_exp(args) -> int:
    from .loopsl2 import pi_exp_h, pi_h_divided, pi_lambda_terms, p_truncate, p_mul
    checks = Checks()
    lam = Fraction(args.lam)
    n, window = args.n, args.window
    for nn in range(1, 4):
        ok = all(pi_h_divided(nn, p) == pi_lambda_terms(nn, p)[p]
                 for p in range(7))
        checks.add(f"pi(h_{nn}^[p]) matches binom(h+p-1,p) for p<=6", ok)
    mat = pi_exp_h(n, lam, window)
    u, v = mat.entry(0, 0), mat.entry(1, 1)
    geo = {n * k: lam ** k for k in range(window // n + 1)}
    checks.add("diagonal is the geometric series and 1 - lam t^n",
               u == geo and v == {0: Fraction(1), n: -lam})
    prod = p_truncate(p_mul(u, v), (0, window))
    checks.add("diagonal entries multiply to 1 at the window",
               prod == {0: Fraction(1)})
    return checks.emit(args.format,
                       {"matrix": serialize.laurent_matrix_json(mat)})


def demo_free_product(args) -> int:
    from .loopsl2 import (ValuedFieldModel, free_product_normal_form,
                          integral_membership, strict_inclusion_witness)
    checks = Checks()
    model = ValuedFieldModel(2)
    g = strict_inclusion_witness(model)
    nf = free_product_normal_form(g)
    checks.add("normal form has length 3", nf.length() == 3,
               f"factors {[(k, sorted(q.items())) for k, q in nf.factors]}")
    checks.add("normal form recomposes to the input", nf.recompose() == g)
    inner = integral_membership(g, "U0_pm_plus", model)
    outer = integral_membership(g, "U0_plusplus", model)
    checks.add("integral entries (U0_pm_plus)", inner.member)
    checks.add("not integrally generated (U0_plusplus fails)",
               not outer.member, f"witness {outer.witness}")
    return checks.emit(args.format)


def demo_counterexample(args) -> int:
    from .groupfilt import density_counterexample_6_10
    rep = density_counterexample_6_10(args.m)
    checks = Checks()
    checks.add("quotient group order 16", rep.quotient_order == 16)
    checks.add("word group order 8", rep.word_group_order == 8,
               f"order {rep.word_group_order}")
    checks.add("(ab)^2 = 1 + e*f + e^(2)*f", rep.ab2_identity)
    checks.add("(ab)^4 = 1", rep.ab4_is_one)
    checks.add("(ab)^2 = (ba)^2", rep.ab2_equals_ba2)
    checks.add("missing element [exp]e^(2)*f not generated",
               not rep.missing_in_word_group)
    checks.add("quotient complement dimension 10 (m=3 basis list)",
               rep.complement_dimension == 10 or args.m != 3,
               f"dim {rep.complement_dimension}")
    return checks.emit(args.format, {"orders": [rep.word_group_order,
                                                rep.quotient_order]})


def demo_conjugate_solve(args) -> int:
    from .envalg import build_context
    from .groupfilt import conjugation_solve, evaluate_factors
    import random
    checks = Checks()
    datum = simply_connected_datum(validate_matrix([[2, -2], [-2, 2]]))
    ctx = build_context(datum, 6)
    chi = [Fraction(3), Fraction(2)]
    rng = random.Random(20120229)
    for trial in range(3):
        entries = [(b.index, Fraction(rng.randint(-2, 2))) for b in ctx.basis]
        u = evaluate_factors(ctx, entries)
        sol = conjugation_solve(ctx, chi, u)
        checks.add(f"v t v^-1 t^-1 = u at truncation (trial {trial})",
                   sol.verified)
    return checks.emit(args.format)


def demo_mitzman(args) -> int:
    from .envalg import mitzman_lambda, mitzman_weight
    import random
    checks = Checks()
    l2 = mitzman_lambda(2)
    checks.add("Lambda_2 = Z1^(2) + (1/2) Z2",
               l2 == {((1, 2),): Fraction(1, 2), ((2, 1),): Fraction(1, 2)})
    ok = all(mitzman_lambda(nn, [Fraction(5) ** j for j in range(1, nn + 1)])
             == Fraction(5) ** nn for nn in range(1, 9))
    checks.add("Z_i = Z^i gives Lambda_n = Z^n (n<=8)", ok)
    t, Z = Fraction(3), Fraction(-2)
    ok = True
    for nn in range(1, 9):
        val = mitzman_lambda(nn, [t ** j * Z for j in range(1, nn + 1)])
        binom = Fraction(1)
        for k in range(nn):
            binom *= Fraction(Z + nn - 1 - k, k + 1)
        ok = ok and val == t ** nn * binom
    checks.add("Z_i = t^i Z gives Lambda_n = t^n binom(Z+n-1, n) (n<=8)", ok)
    rng = random.Random(9)
    ok = True
    for nn in range(9):
        zs = [Fraction(rng.randint(-4, 4)) for _ in range(nn + 1)]
        zps = [Fraction(rng.randint(-4, 4)) for _ in range(nn + 1)]
        lhs = mitzman_lambda(nn, [a + b for a, b in zip(zs, zps)])
        rhs = sum(mitzman_lambda(p, zs) * mitzman_lambda(nn - p, zps)
                  for p in range(nn + 1))
        ok = ok and lhs == rhs
    checks.add("convolution identity (n<=8)", ok)
    checks.add("weight homogeneity (n<=8)",
               all(mitzman_weight(nn) for nn in range(9)))
    return checks.emit(args.format)


def demo_commutators(args) -> int:
    from .envalg import commutator_constants
    checks = Checks()
    a2 = simply_connected_datum(validate_matrix([[2, -1], [-1, 2]]))
    tab = commutator_constants(a2, (1, 0), (0, 1))
    checks.add("A2: C_{1,1} = +/-1",
               set(tab.constants) == {(1, 1)} and tab.constants[(1, 1)] in (1, -1),
               f"C = {tab.constants}")
    b2 = simply_connected_datum(validate_matrix([[2, -1], [-2, 2]]))
    tab2 = commutator_constants(b2, (1, 0), (0, 1))
    checks.add("B2 pair: interval of length 4 with integer constants",
               len(tab2.interval) == 4
               and all(isinstance(c, int) for c in tab2.constants.values()),
               f"C = {tab2.constants}")
    extra = {"a2": serialize.commutator_json(tab),
             "b2": serialize.commutator_json(tab2)}
    return checks.emit(args.format, extra)


def demo_enclosure(args) -> int:
    from .apartment import FinitePointSet, enclosure, point
    checks = Checks()
    datum = simply_connected_datum(validate_matrix([[2, -2], [-2, 2]]))
    table = enumerate_roots(datum, 5, multiplicities=False)
    x, y = point(0, 0), point(2, 1)
    omega = FinitePointSet.of(x, y)
    encl = enclosure(datum, table, omega, "cl_delta")
    seg_ok = all(encl.contains(tuple(a + Fraction(t, 12) * (b - a)
                                     for a, b in zip(x, y)))
                 for t in range(13))
    checks.add("cl({x,y}) contains the segment [x,y]", seg_ok)
    e_si = enclosure(datum, table, omega, "cl_si")
    e_sharp = enclosure(datum, table, omega, "cl_sharp")
    e_conv = enclosure(datum, table, omega, "conv")
    grid = [(Fraction(i, 2), Fraction(j, 2))
            for i in range(-6, 10) for j in range(-6, 10)]
    chain_ok = all((not e_conv.contains(g) or encl.contains(g))
                   and (not encl.contains(g) or e_si.contains(g))
                   and (not e_si.contains(g) or e_sharp.contains(g))
                   for g in grid)
    checks.add("conv <= cl <= cl_si <= cl_sharp on the sample grid", chain_ok)
    encl2 = enclosure(datum, table, encl, "cl_delta")
    same = {(h.alpha, str(h.level)) for h in encl.halfspaces} == \
        {(h.alpha, str(h.level)) for h in encl2.halfspaces}
    checks.add("enclosure is idempotent", same)
    return checks.emit(args.format,
                       {"halfspaces": serialize.halfspaces_json(encl)})


def demo_fixator(args) -> int:
    from .apartment import (FinitePointSet, fixator_compare, point,
                            weyl_fixator_generators)
    checks = Checks()
    datum = simply_connected_datum(validate_matrix([[2, -2], [-2, 2]]))
    table = enumerate_roots(datum, 6, multiplicities=False)
    y = FinitePointSet.of((Fraction(1, 2), Fraction(1, 2)))
    gens = weyl_fixator_generators(datum, table, y)
    checks.add("no wall contains y", gens == [])
    cmp_ = fixator_compare(datum, table, y, search_cap=20)
    checks.add("a bigger fixator is witnessed",
               cmp_.status == "strictly_larger_with_witness" and cmp_.certified)
    if cmp_.witness is not None:
        yy = point(Fraction(1, 2), Fraction(1, 2))
        checks.add("the witness fixes y and is not the identity",
                   cmp_.witness.apply(yy) == yy
                   and not cmp_.witness.is_identity())
    return checks.emit(args.format)


if __name__ == "__main__":
    raise SystemExit(main())
