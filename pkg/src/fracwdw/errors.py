"""Exception hierarchy and warnings used across the package."""


class FracwdwError(Exception):
    """Base class for all package-specific errors."""


class PoleError(FracwdwError):
    """Gamma function requested at a non-positive integer."""


class NonConvergence(FracwdwError):
    """A series did not enter monotone decay within the term budget."""


class CancellationError(FracwdwError):
    """Catastrophic cancellation: the compensated accumulator cannot reach
    the requested absolute tolerance.  For modal evaluations this signals
    that the mode index is too large for double-double summation."""


class QuadratureError(FracwdwError):
    """Richardson estimate between successive panel counts exceeded the
    quadrature tolerance."""


class DifferentiationError(FracwdwError):
    """Finite-difference noise estimate exceeded tolerance."""


class RootBracketError(FracwdwError):
    """Root refinement escaped its bracket."""


class SingularModeError(FracwdwError):
    """A modal determinant fell below the singularity threshold."""


class ConfigError(FracwdwError):
    """Invalid configuration: unknown key or violated parameter constraint."""


class IoError(FracwdwError):
    """Input file missing or malformed."""


class StrictModeViolation(UserWarning):
    """Inversion hypotheses (second-regime order one and matching kernel
    exponents) are not satisfied; results may be unreliable."""


class LemmaHypothesisViolation(UserWarning):
    """Large-mode determinant limits are only guaranteed when each regime's
    kernel exponent exceeds its kernel power; the configuration violates
    this."""
