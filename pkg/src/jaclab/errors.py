"""Exception hierarchy shared by all jaclab modules."""


class JaclabError(Exception):
    """Base class for every error raised by jaclab."""


class QuadratureError(JaclabError):
    pass


class ToleranceNotMet(QuadratureError):
    """The adaptive integrator ran out of subdivisions.

    ``estimate`` and ``error`` carry the best value reached so callers can
    still report it.
    """

    def __init__(self, message, estimate=float("nan"), error=float("inf")):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class DivergentIntegral(ToleranceNotMet):
    """Graded refinement toward a flagged endpoint showed non-decaying panel mass."""


class InvalidIntegrand(QuadratureError):
    """The integrand returned NaN or an infinity at an interior node."""


class InvalidDensity(JaclabError):
    pass


class UndefinedAtOrigin(JaclabError):
    pass


class ParameterDomainError(JaclabError, ValueError):
    pass


class EnergyOverflow(JaclabError):
    def __init__(self, message, log_value):
        super().__init__(message)
        self.log_value = log_value


class BoundaryViolation(JaclabError):
    pass


class NoAdmissibleRays(JaclabError):
    pass


class FitRefused(JaclabError):
    pass


class ConfigError(JaclabError):
    pass
