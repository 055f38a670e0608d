"""JSON pricing service and static host for the web calculator.

POST /api/price takes the human-facing request (percent fields, calendar
dates), GET /api/health is a liveness probe, and "/" serves the built
web UI when an assets directory is available.  Pricing runs on a bounded
thread pool so long finite-difference or Monte Carlo requests never
block the health check.
"""

from __future__ import annotations

import asyncio
import concurrent.futures
import hashlib
import json
import logging
import os
import sys
import time
from datetime import date
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, ConfigDict

from . import __version__, api
from .errors import (
    CapacityError,
    DomainError,
    InvalidDates,
    OutOfDomain,
    QuadratureError,
    SingularMatrix,
)
from .pde import GridSpec, default_s_max

logger = logging.getLogger("optionforge.service")
if not logger.handlers:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(asctime)s %(name)s %(message)s"))
    logger.addHandler(handler)
    logger.setLevel(logging.INFO)

PLACEHOLDER_PAGE = """<!doctype html>
<html><head><title>optionforge</title></head>
<body><h1>optionforge pricing service</h1>
<p>The web calculator assets are not built. The JSON API is live at
<code>POST /api/price</code>; health at <code>GET /api/health</code>.</p>
</body></html>"""


class GridOverrides(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n_space: int | None = None
    n_time: int | None = None
    s_max: float | None = None
    theta: float | None = None
    smoothing: Literal["none", "rannacher"] | None = None


class PriceRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    option_type: str | int
    spot: float
    strike: float
    rate_pct: float
    vol_pct: float
    purchase_date: date
    expiry_date: date
    method: str = "analytic"
    grid: GridOverrides | None = None


def _error_field(exc: Exception) -> str:
    if isinstance(exc, DomainError):
        # Internal decimal fields surface under their percent names.
        return {"rate": "rate_pct", "sigma": "vol_pct"}.get(exc.field, exc.field)
    if isinstance(exc, InvalidDates):
        return "expiry_date"
    return "request"


def create_app(
    assets_dir: Path | None = None, max_workers: int | None = None
) -> FastAPI:
    app = FastAPI(title="optionforge", version=__version__)
    executor = concurrent.futures.ThreadPoolExecutor(
        max_workers=max_workers or os.cpu_count() or 4
    )

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        errors = [
            {"field": ".".join(str(part) for part in err["loc"] if part != "body"),
             "message": err["msg"]}
            for err in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"errors": errors})

    @app.api_route("/api/health", methods=["GET", "HEAD"])
    async def health():
        return {"status": "ok", "version": __version__}

    @app.post("/api/price")
    async def price(request: PriceRequest):
        started = time.perf_counter()
        try:
            converted = api.convert_price_request(
                request.option_type,
                request.spot,
                request.strike,
                request.rate_pct,
                request.vol_pct,
                request.purchase_date,
                request.expiry_date,
            )
            method = api.resolve_method(request.method)
        except (DomainError, InvalidDates) as exc:
            return JSONResponse(
                status_code=400,
                content={"errors": [{"field": _error_field(exc), "message": str(exc)}]},
            )

        contract = converted.contract
        grid = None
        if request.grid is not None:
            g = request.grid
            grid = GridSpec(
                n_space=g.n_space if g.n_space is not None else api.DEFAULT_GRID_POINTS,
                n_time=g.n_time if g.n_time is not None else api.DEFAULT_GRID_POINTS,
                s_max=g.s_max if g.s_max is not None else default_s_max(contract),
                theta=g.theta if g.theta is not None else 0.5,
                smoothing=g.smoothing if g.smoothing is not None else "none",
            )

        loop = asyncio.get_running_loop()
        try:
            quote = await loop.run_in_executor(
                executor, lambda: api.price_with_method(contract, method, grid=grid)
            )
        except (DomainError, InvalidDates) as exc:
            return JSONResponse(
                status_code=400,
                content={"errors": [{"field": _error_field(exc), "message": str(exc)}]},
            )
        except (SingularMatrix, QuadratureError, OutOfDomain, CapacityError) as exc:
            return JSONResponse(
                status_code=422,
                content={"errors": [{"field": "request", "message": str(exc)}]},
            )

        inputs = {
            "option_type": contract.kind.value,
            "spot": request.spot,
            "strike": request.strike,
            "rate_pct": request.rate_pct,
            "vol_pct": request.vol_pct,
            "purchase_date": request.purchase_date.isoformat(),
            "expiry_date": request.expiry_date.isoformat(),
            "time_days": converted.time_days,
            "maturity_years": contract.maturity,
        }
        payload = api.quote_payload(quote, inputs)
        digest = hashlib.sha256(
            json.dumps(inputs, sort_keys=True).encode()
        ).hexdigest()[:12]
        logger.info(
            "price method=%s inputs=%s price=%.10g latency_ms=%.1f",
            quote.method,
            digest,
            quote.price,
            1e3 * (time.perf_counter() - started),
        )
        return payload

    if assets_dir is not None and Path(assets_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(assets_dir), html=True), name="webui")
    else:

        @app.get("/", response_class=HTMLResponse)
        async def index():
            return PLACEHOLDER_PAGE

    return app


def default_assets_dir() -> Path | None:
    """frontend/dist next to the repository root, when built."""
    candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    return candidate if candidate.is_dir() else None
