class DomainError(ValueError):
    """Argument outside the domain where a quantity is defined."""


class DivergenceError(DomainError):
    """Quantity is infinite at the requested argument (e.g. K'(0))."""


class GeodesicError(DomainError):
    """Degenerate geodesic, such as coincident endpoints."""


class PreconditionError(ValueError):
    """Input set violates a transform's precondition."""


class ResolutionError(ValueError):
    """Grid too coarse for the requested operation."""


class ScheduleError(ValueError):
    """Invalid dispersion schedule."""


class ConfigurationError(ValueError):
    """Invalid configuration for an estimator or check."""
