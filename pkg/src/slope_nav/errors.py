"""Exception types raised by the slope-nav numerical core."""


class SlopeNavError(Exception):
    """Base class for all slope-nav errors."""


class DomainError(SlopeNavError):
    """Point outside a chart's working domain, or non-finite geometry there."""


class DegenerateMetricError(SlopeNavError):
    """Induced metric is singular or indefinite at the requested point."""


class ZeroVectorError(SlopeNavError):
    """A nonzero tangent vector is required."""


class ConvexityError(SlopeNavError):
    """Wind force exceeds the strong-convexity bound in strict mode."""


class RootSelectionError(SlopeNavError):
    """No admissible positive root of the degree-four metric equation.

    Carries all candidate roots for diagnosis.
    """

    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = tuple(candidates)


class SingularCError(SlopeNavError):
    """The C denominator vanished; signals out-of-domain input or a bug."""


class NearSingularEError(SlopeNavError):
    """The E denominator of the spray terms is below the safe threshold."""


class OracleUnavailableError(SlopeNavError):
    """Finite-difference oracle could not produce a trustworthy result."""


class FrameUndefinedError(SlopeNavError):
    """Downhill frame is undefined where the gravitational wind vanishes."""


class FrontFailureError(SlopeNavError):
    """Every direction of a time-front sweep failed to integrate."""


class ConfigError(SlopeNavError):
    """Scenario configuration is missing, malformed, or inconsistent."""
