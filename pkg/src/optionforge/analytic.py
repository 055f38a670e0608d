"""Closed-form Black-Scholes pricing and put-call parity checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

from .contracts import OptionContract, OptionKind, validate_contract
from .errors import DomainError

Method = Literal["analytic", "crank_nicolson", "heat_kernel", "monte_carlo"]


@dataclass(frozen=True)
class D1D2:
    """The standardized log-moneyness arguments of the normal CDF."""

    d1: float
    d2: float


@dataclass(frozen=True)
class PriceQuote:
    """A price plus the method that produced it and method-specific diagnostics."""

    price: float
    method: Method
    diagnostics: dict = field(default_factory=dict)


def std_normal_cdf(x: float) -> float:
    """Standard normal CDF via the complementary error function.

    N(x) = erfc(-x / sqrt(2)) / 2; the libm erfc keeps the absolute error
    well below 1e-10 over the whole real line and avoids the 1 - N(-x)
    cancellation in the tails.
    """
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def discount_factor(rate: float, tau: float) -> float:
    return math.exp(-rate * tau)


def d1_d2(c: OptionContract) -> D1D2:
    """d1 = [ln(S/E) + (r + sigma^2/2) tau] / (sigma sqrt(tau)), d2 = d1 - sigma sqrt(tau)."""
    validate_contract(c)
    if c.spot <= 0:
        raise DomainError("spot", "must be > 0 for d1/d2 (use boundary formulas at S=0)")
    vol_sqrt_tau = c.sigma * math.sqrt(c.maturity)
    d1 = (math.log(c.spot / c.strike) + (c.rate + 0.5 * c.sigma**2) * c.maturity) / vol_sqrt_tau
    return D1D2(d1=d1, d2=d1 - vol_sqrt_tau)


def price_call(c: OptionContract) -> PriceQuote:
    """European call price S N(d1) - E e^{-r tau} N(d2); exactly 0 at S = 0."""
    validate_contract(c)
    if c.kind is not OptionKind.CALL:
        raise DomainError("option_type", "price_call expects a call contract")
    if c.spot == 0.0:
        return PriceQuote(price=0.0, method="analytic", diagnostics={"boundary": "spot=0"})
    d = d1_d2(c)
    price = c.spot * std_normal_cdf(d.d1) - c.strike * discount_factor(
        c.rate, c.maturity
    ) * std_normal_cdf(d.d2)
    return PriceQuote(price=price, method="analytic", diagnostics={"d1": d.d1, "d2": d.d2})


def price_put(c: OptionContract) -> PriceQuote:
    """European put price E e^{-r tau} N(-d2) - S N(-d1); at S = 0 this is the
    discounted strike."""
    validate_contract(c)
    if c.kind is not OptionKind.PUT:
        raise DomainError("option_type", "price_put expects a put contract")
    df = discount_factor(c.rate, c.maturity)
    if c.spot == 0.0:
        return PriceQuote(price=c.strike * df, method="analytic", diagnostics={"boundary": "spot=0"})
    d = d1_d2(c)
    price = c.strike * df * std_normal_cdf(-d.d2) - c.spot * std_normal_cdf(-d.d1)
    return PriceQuote(price=price, method="analytic", diagnostics={"d1": d.d1, "d2": d.d2})


def price(c: OptionContract) -> PriceQuote:
    """Dispatch on contract kind."""
    return price_call(c) if c.kind is OptionKind.CALL else price_put(c)


def parity_gap(call_price: float, put_price: float, c: OptionContract) -> float:
    """(C - P) - (S - E e^{-r tau}); zero for arbitrage-free European prices."""
    forward = c.spot - c.strike * discount_factor(c.rate, c.maturity)
    return (call_price - put_price) - forward


__all__ = [
    "D1D2",
    "PriceQuote",
    "Method",
    "std_normal_cdf",
    "discount_factor",
    "d1_d2",
    "price_call",
    "price_put",
    "price",
    "parity_gap",
]
