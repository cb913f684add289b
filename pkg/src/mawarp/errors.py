"""Exception types shared across the package.

The CLI maps these onto exit codes: input/precondition problems exit with
status 2, numerical aborts (lost ellipticity, coefficient blow-up, leaving
the chart domain) with status 3.
"""


class MawarpError(Exception):
    """Base class for all package-specific errors."""


class DomainError(MawarpError):
    """A state left the declared chart domain (including the safety margin)."""


class ChartError(MawarpError):
    """Chart selector does not exist or does not match the curvature sign."""


class CurvaturePositivityError(MawarpError):
    """The prescribed curvature is not strictly positive where required."""


class IrregularCurveError(MawarpError):
    """A curve failed the regularity threshold min|g'| >= tol * max|g'|."""


class ConvexityError(MawarpError):
    """A curve or transformed graph failed a strict-convexity requirement."""


class OrientationError(MawarpError):
    """Boundary curve is traversed with the wrong curvature sign."""


class FrameError(MawarpError):
    """A supplied 3-frame is not orthonormal (or not positively oriented)."""


class EllipticityError(MawarpError):
    """The ellipticity quantity D = AC - B^2 + E became nonpositive."""


class BlowupError(MawarpError):
    """Power-series coefficients grow too fast for the requested strip height."""


class StripRangeError(MawarpError):
    """Requested evaluation range lies outside the solved strip."""


class MetricSignError(MawarpError):
    """Neither sign makes the solution metric positive definite."""


class InsufficientDataError(MawarpError):
    """Not enough annuli/samples for the requested analysis."""


class ExpressionError(MawarpError):
    """Curvature-expression parse or evaluation failure, with position info."""

    def __init__(self, message, pos=None):
        super().__init__(message)
        self.pos = pos


class ConfigError(MawarpError):
    """Run-configuration parse/validation failure.

    ``errors`` is a list of (line, col, message) triples, 1-based.
    """

    def __init__(self, errors):
        self.errors = list(errors)
        lines = "; ".join(f"line {ln}, col {co}: {msg}" for ln, co, msg in self.errors)
        super().__init__(lines or "invalid configuration")
