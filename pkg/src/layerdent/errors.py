"""Exception types raised by layerdent."""


class LayerdentError(Exception):
    """Base class for all layerdent errors."""


class StabilityViolation(LayerdentError, ValueError):
    """Engineering constants violate positive definiteness."""


class InvalidModuli(LayerdentError, ValueError):
    """Stiffness moduli are not positive definite."""


class DegenerateRoots(LayerdentError, ValueError):
    """The characteristic quartic has equal or complex roots."""


class SingularZ(LayerdentError, ArithmeticError):
    """The layer/substrate coupling determinant cancels."""


class QuadratureNotConverged(LayerdentError, ArithmeticError):
    """A quadrature failed to reach the requested tolerance."""


class NoBracket(LayerdentError, ArithmeticError):
    """A root-finder target lies outside the bracketing interval."""


class DomainError(LayerdentError, ValueError):
    """An argument lies outside the domain of the model."""


class ConfigError(LayerdentError, ValueError):
    """A run configuration is malformed or inconsistent."""


class SmallContactWarning(UserWarning):
    """Contact radius is no longer small compared to the layer thickness."""
