"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`BiodilateError`, so callers can catch the whole family at once.
Most also derive from :class:`ValueError` because they flag inputs that
fall outside an operation's domain.
"""


class BiodilateError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(BiodilateError, ValueError):
    pass


class NonFiniteInput(BiodilateError, ValueError):
    pass


class ZeroVector(BiodilateError, ValueError):
    pass


# numkernel
class Defective(BiodilateError, ValueError):
    """Eigenvector matrix too ill-conditioned to treat the input as diagonalizable."""


class NoConvergence(BiodilateError, ArithmeticError):
    pass


class NotPSD(BiodilateError, ValueError):
    pass


class NotHermitian(BiodilateError, ValueError):
    pass


# biortho
class BiorthogonalityViolation(BiodilateError, ValueError):
    pass


class NonPositiveKappa(BiodilateError, ValueError):
    pass


class SingularWithModulusPolicy(BiodilateError, ValueError):
    pass


class ExplicitKappaInvalid(BiodilateError, ValueError):
    pass


class ReconstructionFailure(BiodilateError, ValueError):
    pass


# qsim
class NonUnitaryGate(BiodilateError, ValueError):
    pass


class IndexOutOfRange(BiodilateError, IndexError):
    pass


class ValueOutOfRange(BiodilateError, ValueError):
    pass


class UnnormalizedTarget(BiodilateError, ValueError):
    pass


class ZeroProbabilityBranch(BiodilateError, ArithmeticError):
    """The requested post-selection outcome has (numerically) zero probability."""


# dilate
class NonUnitaryRepresentation(BiodilateError, ValueError):
    pass


class NotPowerOfTwoDim(BiodilateError, ValueError):
    pass


class NonUnitarySummand(BiodilateError, ValueError):
    pass


class NotAContraction(BiodilateError, ValueError):
    """``1 - V^dagger V`` is not positive semidefinite, so no defect operator exists."""
