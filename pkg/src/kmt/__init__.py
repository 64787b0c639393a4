"""Exact computations for split Kac-Moody theory over valued fields.

Subpackages by area:

- :mod:`kmt.rootdata` -- Kac-Moody matrices, root generation systems, Weyl
  combinatorics, root enumeration, prenilpotent pairs, the Tits cone;
- :mod:`kmt.envalg` -- the integral divided-power enveloping algebra at a
  height truncation: PBW bases, exponential sequences, twisted exponentials,
  the polynomial recurrence for affine exponentials, commutator constants;
- :mod:`kmt.loopsl2` -- the affine sl2 loop realization, free-product normal
  forms, valued-field congruence subgroups, SL_m lattice-chain filtrations;
- :mod:`kmt.apartment` -- the affine apartment: extended values, concave
  functions, enclosures, chimneys, fixator generators, the Tits preorder;
- :mod:`kmt.groupfilt` -- group-like elements: factorization, decompositions,
  valuation-level membership, the density counterexample over F2 and the
  conjugation solver;
- :mod:`kmt.cli` -- the ``kmt`` command-line front end.
"""

from . import apartment, envalg, groupfilt, loopsl2, rings, rootdata

__all__ = ["apartment", "envalg", "groupfilt", "loopsl2", "rings", "rootdata"]
__version__ = "0.1.0"
