"""Core domain types, validation, day-count conversion, and payoffs.

Everything here is an immutable value object or a pure function; the
pricing modules build on these without adding state.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from datetime import date

from .errors import DomainError, InvalidDates

DAYS_PER_YEAR = 365  # ACT/365 fixed


class OptionKind(enum.Enum):
    """European option flavour. Serialized as "call" / "put"; the legacy
    numeric codes 0 (call) and 1 (put) are also accepted on parse."""

    CALL = "call"
    PUT = "put"

    @classmethod
    def parse(cls, value: object) -> "OptionKind":
        if isinstance(value, OptionKind):
            return value
        if isinstance(value, str):
            text = value.strip().lower()
            if text in ("call", "0"):
                return cls.CALL
            if text in ("put", "1"):
                return cls.PUT
        if isinstance(value, int) and not isinstance(value, bool):
            if value == 0:
                return cls.CALL
            if value == 1:
                return cls.PUT
        raise DomainError("option_type", f"expected 'call', 'put', 0 or 1, got {value!r}")


@dataclass(frozen=True)
class OptionContract:
    """Terms of a European vanilla option.

    Attributes:
        kind: call or put.
        spot: current underlying price S (>= 0; 0 is a legal boundary state).
        strike: exercise price E (> 0).
        rate: continuously compounded risk-free rate r, per annum decimal.
        sigma: volatility, per annum decimal (> 0).
        maturity: time to expiry in years (> 0), ACT/365.
    """

    kind: OptionKind
    spot: float
    strike: float
    rate: float
    sigma: float
    maturity: float


@dataclass(frozen=True)
class DatePair:
    """Purchase/expiry calendar dates; expiry must fall strictly later."""

    purchase_date: date
    expiry_date: date


def validate_contract(c: OptionContract) -> OptionContract:
    """Return ``c`` unchanged iff every invariant holds, else raise DomainError
    naming the violated field."""
    checks = (
        ("spot", c.spot, c.spot >= 0, "must be >= 0"),
        ("strike", c.strike, c.strike > 0, "must be > 0"),
        ("rate", c.rate, True, ""),
        ("sigma", c.sigma, c.sigma > 0, "must be > 0"),
        ("maturity", c.maturity, c.maturity > 0, "must be > 0"),
    )
    for field, value, ok, why in checks:
        if not isinstance(value, (int, float)) or not math.isfinite(value):
            raise DomainError(field, f"must be finite, got {value!r}")
        if not ok:
            raise DomainError(field, f"{why}, got {value!r}")
    if not isinstance(c.kind, OptionKind):
        raise DomainError("option_type", f"expected OptionKind, got {c.kind!r}")
    return c


def year_fraction(d: DatePair) -> float:
    """ACT/365 year fraction between purchase and expiry dates."""
    days = (d.expiry_date - d.purchase_date).days
    if days <= 0:
        raise InvalidDates(
            f"expiry_date {d.expiry_date.isoformat()} must be strictly after "
            f"purchase_date {d.purchase_date.isoformat()}"
        )
    return days / DAYS_PER_YEAR


def payoff(kind: OptionKind, s: float, e: float) -> float:
    """Option value at expiry: max(s - e, 0) for calls, max(e - s, 0) for puts."""
    if kind is OptionKind.CALL:
        return max(s - e, 0.0)
    return max(e - s, 0.0)
