"""Boundary conversions shared by the CLI and the HTTP service.

Humans supply percent rates and calendar dates; the library wants
decimals and year fractions.  All conversion happens here, once, so the
two front ends cannot drift apart.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Mapping

from . import gbm
from .analytic import PriceQuote, discount_factor, price as analytic_price
from .contracts import DatePair, OptionContract, OptionKind, validate_contract, year_fraction
from .errors import DomainError
from .heat_kernel import QuadratureSpec, price_via_heat_kernel
from .pde import GridSpec, default_s_max, price_crank_nicolson

METHOD_ALIASES: Mapping[str, str] = {
    "analytic": "analytic",
    "cn": "crank_nicolson",
    "crank_nicolson": "crank_nicolson",
    "heat": "heat_kernel",
    "heat_kernel": "heat_kernel",
    "mc": "monte_carlo",
    "monte_carlo": "monte_carlo",
}

DEFAULT_GRID_POINTS = 400
DEFAULT_MC_PATHS = 1_000_000


def resolve_method(name: str | None) -> str:
    if name is None:
        return "analytic"
    try:
        return METHOD_ALIASES[name.strip().lower()]
    except KeyError:
        raise DomainError(
            "method", f"expected one of {sorted(set(METHOD_ALIASES))}, got {name!r}"
        ) from None


def build_contract(
    option_type: object,
    spot: float,
    strike: float,
    rate: float,
    sigma: float,
    maturity: float,
) -> OptionContract:
    """Assemble and validate a contract from already-decimal fields."""
    return validate_contract(
        OptionContract(
            kind=OptionKind.parse(option_type),
            spot=float(spot),
            strike=float(strike),
            rate=float(rate),
            sigma=float(sigma),
            maturity=float(maturity),
        )
    )


@dataclass(frozen=True)
class ConvertedRequest:
    """A human-facing request after percent and date conversion."""

    contract: OptionContract
    time_days: int


def convert_price_request(
    option_type: object,
    spot: float,
    strike: float,
    rate_pct: float,
    vol_pct: float,
    purchase_date: date,
    expiry_date: date,
) -> ConvertedRequest:
    """rate = rate_pct / 100, sigma = vol_pct / 100, maturity via ACT/365."""
    pair = DatePair(purchase_date=purchase_date, expiry_date=expiry_date)
    maturity = year_fraction(pair)
    contract = build_contract(
        option_type, spot, strike, rate_pct / 100.0, vol_pct / 100.0, maturity
    )
    return ConvertedRequest(
        contract=contract, time_days=(expiry_date - purchase_date).days
    )


def price_with_method(
    contract: OptionContract,
    method: str,
    *,
    grid: GridSpec | None = None,
    quad: QuadratureSpec | None = None,
    n_paths: int = DEFAULT_MC_PATHS,
    n_steps: int = 1,
    seed: int = 0,
) -> PriceQuote:
    """Dispatch to the requested pricing route.

    The heat-kernel route cannot take the log of spot = 0, so that one
    boundary state is answered with its closed-form value; the finite
    difference quote is floored at zero (Crank-Nicolson without smoothing
    may oscillate a hair negative, within the documented grid bound).
    """
    method = resolve_method(method)
    if method == "analytic":
        return analytic_price(contract)
    if method == "heat_kernel":
        if contract.spot == 0.0:
            price = (
                0.0
                if contract.kind is OptionKind.CALL
                else contract.strike * discount_factor(contract.rate, contract.maturity)
            )
            return PriceQuote(price=price, method="heat_kernel", diagnostics={"boundary": "spot=0"})
        return price_via_heat_kernel(contract, quad or QuadratureSpec())
    if method == "crank_nicolson":
        if grid is None:
            grid = GridSpec(
                n_space=DEFAULT_GRID_POINTS,
                n_time=DEFAULT_GRID_POINTS,
                s_max=default_s_max(contract),
            )
        _, quote = price_crank_nicolson(contract, grid)
        if quote.price < 0.0:
            quote = PriceQuote(
                price=0.0,
                method=quote.method,
                diagnostics={**quote.diagnostics, "raw_price": quote.price},
            )
        return quote
    quote, _ = gbm.mc_price(contract, n_paths, n_steps, seed)
    return quote


def display_price(price: float) -> str:
    """Two decimals, banker's rounding; the full-precision price travels
    alongside this string, never instead of it."""
    return str(Decimal(repr(price)).quantize(Decimal("0.01"), rounding=ROUND_HALF_EVEN))


def quote_payload(quote: PriceQuote, inputs: dict) -> dict:
    """The JSON body served by the CLI and the HTTP endpoint."""
    return {
        "price": quote.price,
        "price_display": display_price(quote.price),
        "method": quote.method,
        "inputs": inputs,
        "diagnostics": quote.diagnostics,
    }
