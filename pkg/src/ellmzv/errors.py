"""Exception types raised across the package."""


class EMZVError(Exception):
    """Base class for all errors raised by ellmzv."""


class NonzeroConstantTerm(EMZVError, ValueError):
    """A q-series that must lie in q*Q[T^{+-1}][[q]] has a nonzero q^0 term."""


class NonSquare(EMZVError, ValueError):
    pass


class OddIndex(EMZVError, ValueError):
    pass


class EvenWeight(EMZVError, ValueError):
    pass


class UnsupportedLength(EMZVError, ValueError):
    pass


class WeightMismatch(EMZVError, ValueError):
    """Objects of different weight were combined into one graded object."""


class OrderMismatch(EMZVError, ValueError):
    """Truncation orders differ where an explicit common order is required."""


class UnknownConstant(EMZVError, ValueError):
    pass


class NotUpperHalfPlane(EMZVError, ValueError):
    pass


class PoleAtLatticePoint(EMZVError, ValueError):
    pass


class BoundaryOne(EMZVError, ValueError):
    """Iterated integral with first or last index 1 needs regularization."""


class ToleranceNotMet(EMZVError, ArithmeticError):
    pass
