"""Exception types shared across the library.

Class names double as the stable error names printed by the CLI.
"""


class ReductionLabError(Exception):
    """Base class for all library-specific failures."""


class NotEssentiallyNonnegative(ReductionLabError):
    """A matrix required to be Metzler has a negative off-diagonal entry."""


class NotIrreducible(ReductionLabError):
    """The off-diagonal adjacency digraph is not strongly connected."""


class NoConvergence(ReductionLabError):
    """An iterative solver exhausted its budget before meeting tolerance."""

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class SingularResolvent(ReductionLabError):
    """xi*I - M is singular within pivot tolerance, so no resolvent exists."""


class DimensionTooLarge(ReductionLabError):
    """Input exceeds the size limit of the characteristic-polynomial oracle."""


class InvalidAlpha(ReductionLabError):
    """Mixing weight alpha falls outside [0, 1]."""


class NonPositiveDiffusion(ReductionLabError):
    """Diffusion coefficient is not strictly positive on the grid."""


class NegativeKernel(ReductionLabError):
    """Integral kernel samples contain a negative value."""


class NonUniformGrid(ReductionLabError):
    """Second differences require a uniformly spaced parameter grid."""


class ZeroSpectralRadius(ReductionLabError):
    """log(rho) is undefined because the spectral radius vanished."""


class NoSignChange(ReductionLabError):
    """Threshold bracket endpoints do not straddle zero."""


class NotMonotoneOnBracket(ReductionLabError):
    """Preliminary sweep found non-monotone values on a threshold bracket."""


class OverflowRisk(ReductionLabError):
    """Semigroup norm accumulation left the representable range."""


class ParseError(ReductionLabError):
    """Malformed scenario or matrix text."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InvariantViolation(ReductionLabError):
    """Parsed data violates a documented family invariant."""
