"""Exception hierarchy shared by all qameans modules."""


class QameansError(Exception):
    """Base class for all library errors."""


class UsageError(QameansError):
    """A call violated an operation's contract (bad arguments, mismatched domains)."""


class DomainError(QameansError):
    """An argument lies outside the working interval of a generator or mean."""


class RangeError(QameansError):
    """A target value lies outside the range of the function being inverted."""


class NotMonotone(QameansError):
    """A generator's first derivative changes sign or vanishes on the grid."""


class DegenerateSecondDerivative(QameansError):
    """The second derivative is numerically zero everywhere: the generator is
    affine-equivalent and produces the arithmetic mean."""


class SignChange(QameansError):
    """The second derivative changes sign (or dips to zero) on the grid, so the
    slope/curvature ratio is not defined as a sign-constant profile."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NonpositiveM(QameansError):
    """A profile handed to the generator reconstruction is not strictly positive."""


class CandidateRejected(QameansError):
    """A randomly sampled candidate profile failed to dominate the target profile
    even after re-sampling."""
