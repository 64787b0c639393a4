"""Exact coefficient rings.

Ring elements are plain Python values (``int``, ``Fraction``, or small
tuples); the ring object supplies the operations.  Everything is exact: no
floats anywhere.  Structure constants of the enveloping algebra are integers,
so any ring only needs ``of_int`` besides its own arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any


INF = Fraction(10**12)  # sentinel valuation of 0; compared, never added to itself


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Ring:
    """Base interface; subclasses set ``zero``, ``one`` and override ops."""

    characteristic: int = 0
    tag: str = "ring"

    zero: Any
    one: Any

    def of_int(self, n: int):
        raise NotImplementedError

    def of_fraction(self, fr):
        fr = Fraction(fr)
        if fr.denominator == 1:
            return self.of_int(fr.numerator)
        return self.mul(self.of_int(fr.numerator),
                        self.inv(self.of_int(fr.denominator)))

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero

    def inv(self, a):
        raise NotImplementedError(f"{self.tag}: no inverses")

    def valuation(self, a) -> Fraction:
        raise NotImplementedError(f"{self.tag}: no valuation")

    def to_str(self, a) -> str:
        return str(a)

    def __repr__(self):
        return self.tag


class Rationals(Ring):
    tag = "Q"
    zero = Fraction(0)
    one = Fraction(1)

    def of_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / Fraction(a)


class Integers(Ring):
    tag = "Z"
    zero = 0
    one = 1

    def of_int(self, n):
        return int(n)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b


class PrimeField(Ring):
    """Integers mod p, p prime."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.tag = f"F{p}"
        self.zero = 0
        self.one = 1 % p

    def of_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.p - 2, self.p)


class PAdicRationals(Ring):
    """The rationals with the p-adic valuation: the exact valued-field model.

    ``O`` is the set of elements with valuation >= 0, the uniformizer is p,
    and the value group is Z.
    """

    def __init__(self, p: int = 2):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.tag = f"Q(v{p})"
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def of_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / Fraction(a)

    def uniformizer(self):
        return Fraction(self.p)

    def valuation(self, a) -> Fraction:
        if a == 0:
            return INF
        a = Fraction(a)
        v = 0
        num, den = a.numerator, a.denominator
        while num % self.p == 0:
            num //= self.p
            v += 1
        while den % self.p == 0:
            den //= self.p
            v -= 1
        return Fraction(v)

    def in_ring_of_integers(self, a) -> bool:
        return a == 0 or self.valuation(a) >= 0


class PolyTwo(Ring):
    """Polynomials over Q in two commuting symbols r, r'.

    Elements are dicts {(i, j): Fraction} mapping exponent pairs to nonzero
    coefficients, stored as immutable frozensets of items internally?  No:
    plain dicts kept canonical (no zero values).  Used for symbolic
    commutator extraction; no inverses, no valuation.
    """

    tag = "Q[r,r']"
    zero: dict = {}

    def __init__(self):
        self.one = {(0, 0): Fraction(1)}

    @staticmethod
    def monomial(i: int, j: int, c=Fraction(1)) -> dict:
        if c == 0:
            return {}
        return {(i, j): Fraction(c)}

    def of_int(self, n):
        if n == 0:
            return {}
        return {(0, 0): Fraction(n)}

    def add(self, a, b):
        out = dict(a)
        for k, v in b.items():
            s = out.get(k, Fraction(0)) + v
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        return out

    def neg(self, a):
        return {k: -v for k, v in a.items()}

    def mul(self, a, b):
        out: dict = {}
        for (i1, j1), v1 in a.items():
            for (i2, j2), v2 in b.items():
                k = (i1 + i2, j1 + j2)
                s = out.get(k, Fraction(0)) + v1 * v2
                if s == 0:
                    out.pop(k, None)
                else:
                    out[k] = s
        return out

    def is_zero(self, a) -> bool:
        return not a

    def to_str(self, a) -> str:
        if not a:
            return "0"
        parts = []
        for (i, j) in sorted(a):
            c = a[(i, j)]
            term = str(c)
            if i:
                term += f"*r^{i}"
            if j:
                term += f"*s^{j}"
            parts.append(term)
        return " + ".join(parts)


def ring_from_spec(spec: str) -> Ring:
    """Parse a ring description like ``Q``, ``Z``, ``F2``, ``Q(v3)``."""
    spec = spec.strip()
    if spec in ("Q", "rationals"):
        return Rationals()
    if spec in ("Z", "integers"):
        return Integers()
    if spec.startswith("F"):
        return PrimeField(int(spec[1:]))
    if spec.startswith("Q(v") and spec.endswith(")"):
        return PAdicRationals(int(spec[3:-1]))
    raise ValueError(f"unknown ring spec {spec!r}")
