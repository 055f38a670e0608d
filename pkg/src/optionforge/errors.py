"""Exception hierarchy shared by all pricing modules."""

from __future__ import annotations


class PricingError(Exception):
    """Base class for every error raised by this package."""


class DomainError(PricingError):
    """An input violates a domain invariant. Carries the offending field name."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class InvalidDates(PricingError):
    """Expiry date does not fall strictly after the purchase date."""


class OutOfDomain(PricingError):
    """A lookup point lies outside the computed grid."""


class SingularMatrix(PricingError):
    """Tridiagonal elimination hit a vanishing pivot."""


class QuadratureError(PricingError):
    """Heat time underflowed; the integral representation is unusable."""


class CapacityError(PricingError):
    """Requested simulation exceeds the configured memory cap."""
