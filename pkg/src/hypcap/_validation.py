"""Input checks shared by estimators and the CLI."""
from __future__ import annotations

from .exceptions import ConfigurationError, DomainError
from .set_model import BoundaryChart, DiameterSet, GridSet, Hedgehog

SET_TYPES = (Hedgehog, DiameterSet, GridSet, BoundaryChart)


def check_set(X, allowed=SET_TYPES, name="X"):
    if not isinstance(X, allowed):
        names = ", ".join(t.__name__ for t in allowed)
        raise DomainError(f"{name} must be one of {names}, got {type(X).__name__}")
    return X


def check_orientation(o):
    if o not in (1, -1):
        raise ConfigurationError("orientation must be +1 or -1")
    return int(o)


def check_unit_interval(x, name, closed_low=True):
    ok = (0 <= x < 1) if closed_low else (0 < x < 1)
    if not ok:
        raise DomainError(f"{name} must lie in {'[' if closed_low else '('}0, 1), got {x!r}")
    return float(x)
