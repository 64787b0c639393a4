"""Exception hierarchy for the kmt package.

Every error that an operation contract mentions gets its own class so callers
can discriminate without string matching.
"""

from __future__ import annotations


class KmtError(Exception):
    """Base class for all package errors."""


class NotKacMoody(KmtError):
    """A matrix axiom is violated; carries (axiom, i, j) for each violation."""

    def __init__(self, violations):
        self.violations = list(violations)
        msg = "; ".join(f"axiom {a} at ({i},{j})" for a, i, j in self.violations)
        super().__init__(f"not a Kac-Moody matrix: {msg}")


class PreconditionFailed(KmtError):
    pass


class ResourceLimit(KmtError):
    pass


class NotRealRoot(KmtError):
    pass


class HeightBoundTooSmall(KmtError):
    pass


class ContextMismatch(KmtError):
    pass


class NonIntegralStructure(KmtError):
    """An integral form check failed; signals a bug, not a user error."""


class NotHomogeneous(KmtError):
    pass


class NoIntegralSolution(KmtError):
    def __init__(self, degree, message=""):
        self.degree = degree
        super().__init__(message or f"no integral group-like lift at degree {degree}")


class InsufficientDepth(KmtError):
    pass


class NotPrenilpotent(KmtError):
    pass


class NonIntegralConstant(KmtError):
    pass


class NotAffineContext(KmtError):
    pass


class NotInUPlus(KmtError):
    pass


class TruncationTooShallow(KmtError):
    pass


class UnsupportedOmega(KmtError):
    pass


class UnsupportedFilterShape(KmtError):
    pass


class NotGroupLike(KmtError):
    pass


class SupportEscapesPsi(KmtError):
    pass


class NotClosed(KmtError):
    pass


class NotIdeal(KmtError):
    pass


class CharacterDegenerate(KmtError):
    def __init__(self, root, message=""):
        self.root = root
        super().__init__(message or f"character takes value 1 on root {root}")


class UnknownDemo(KmtError):
    pass
