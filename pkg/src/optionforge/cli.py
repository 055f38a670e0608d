"""Command-line front end: price, converge, surface, simulate, serve.

Exit codes: 0 success, 2 usage or validation failure, 3 numeric or
runtime failure.
"""

from __future__ import annotations

import functools
import json
import os
import sys
from pathlib import Path

import click

from . import __version__, api
from .errors import (
    CapacityError,
    DomainError,
    InvalidDates,
    OutOfDomain,
    QuadratureError,
    SingularMatrix,
)
from .gbm import GbmSpec, format_paths_csv, simulate_paths
from .pde import (
    GridSpec,
    SigmaSweepSpec,
    convergence_base_grid,
    convergence_study,
    default_s_max,
    format_surface_csv,
    sigma_surface,
    surface_filename,
)

VALIDATION_EXIT = 2
NUMERIC_EXIT = 3


def _fail(code: int, exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(code)


def handles_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (DomainError, InvalidDates) as exc:
            _fail(VALIDATION_EXIT, exc)
        except (SingularMatrix, QuadratureError, OutOfDomain, CapacityError, OSError) as exc:
            _fail(NUMERIC_EXIT, exc)

    return wrapper


def contract_options(fn):
    for opt in reversed(
        [
            click.option("--type", "option_type", required=True, help="call or put (0/1 accepted)."),
            click.option("--spot", type=float, required=True, help="Spot price S."),
            click.option("--strike", type=float, required=True, help="Strike price E."),
            click.option("--rate", type=float, required=True, help="Risk-free rate, decimal per annum."),
            click.option("--maturity", type=float, required=True, help="Time to expiry in years."),
        ]
    ):
        fn = opt(fn)
    return fn


def parse_grid(text: str | None) -> tuple[int, int] | None:
    if text is None:
        return None
    try:
        m, n = text.lower().split("x")
        return int(m), int(n)
    except ValueError:
        raise click.UsageError(f"--grid expects MxN, e.g. 400x400, got {text!r}") from None


def _grid_spec(contract, grid, smax, theta=0.5, smoothing="none") -> GridSpec | None:
    dims = parse_grid(grid)
    if dims is None and smax is None:
        return None
    m, n = dims if dims else (api.DEFAULT_GRID_POINTS, api.DEFAULT_GRID_POINTS)
    return GridSpec(
        n_space=m,
        n_time=n,
        s_max=smax if smax is not None else default_s_max(contract),
        theta=theta,
        smoothing=smoothing,
    )


@click.group()
@click.version_option(__version__)
def main():
    """European option pricing engine: closed form, Crank-Nicolson finite
    differences, heat-kernel quadrature, and GBM Monte Carlo."""


@main.command()
@contract_options
@click.option("--sigma", type=float, required=True, help="Volatility, decimal per annum.")
@click.option(
    "--method",
    default="analytic",
    help="analytic | cn | heat | mc (default analytic).",
)
@click.option("--grid", default=None, help="Finite-difference dims MxN (cn only).")
@click.option("--smax", type=float, default=None, help="Grid truncation (cn only).")
@click.option("--seed", type=int, default=0, help="Monte Carlo seed (mc only).")
@click.option("--paths", type=int, default=api.DEFAULT_MC_PATHS, help="Monte Carlo paths (mc only).")
@handles_errors
def price(option_type, spot, strike, rate, maturity, sigma, method, grid, smax, seed, paths):
    """Price one contract and print the quote as JSON."""
    contract = api.build_contract(option_type, spot, strike, rate, sigma, maturity)
    quote = api.price_with_method(
        contract,
        method,
        grid=_grid_spec(contract, grid, smax),
        n_paths=paths,
        seed=seed,
    )
    inputs = {
        "option_type": contract.kind.value,
        "spot": contract.spot,
        "strike": contract.strike,
        "rate": contract.rate,
        "sigma": contract.sigma,
        "maturity_years": contract.maturity,
        "time_days": round(contract.maturity * 365),
    }
    click.echo(json.dumps(api.quote_payload(quote, inputs)))


@main.command()
@contract_options
@click.option("--sigma", type=float, required=True, help="Volatility, decimal per annum.")
@click.option("--levels", type=int, default=5, help="Number of doubling refinement levels (>= 3).")
@click.option("--theta", type=float, default=0.5, help="Scheme weight: 0.5 Crank-Nicolson, 1 implicit.")
@click.option("--base", type=int, default=50, help="Coarsest grid size (n_space = n_time).")
@click.option("--smax", type=float, default=None, help="Override the study truncation.")
@click.option(
    "--out",
    type=click.Path(file_okay=False, path_type=Path),
    default=None,
    help="Directory for convergence.csv and convergence.png.",
)
@handles_errors
def converge(option_type, spot, strike, rate, maturity, sigma, levels, theta, base, smax, out):
    """Grid-convergence study against the closed form."""
    contract = api.build_contract(option_type, spot, strike, rate, sigma, maturity)
    base_grid = convergence_base_grid(contract, n=base, theta=theta)
    if smax is not None:
        base_grid = GridSpec(
            n_space=base_grid.n_space,
            n_time=base_grid.n_time,
            s_max=smax,
            theta=theta,
            smoothing="rannacher",
        )
    rows = convergence_study(contract, levels, base_grid)

    def order_text(row):
        if row.observed_order is not None:
            return f"{row.observed_order:.4f}"
        return "exact" if row.error == 0.0 else "-"

    click.echo(f"{'n_space':>8} {'n_time':>8} {'h':>12} {'error':>14} {'order':>8}")
    for row in rows:
        click.echo(
            f"{row.n_space:>8} {row.n_time:>8} {row.h:>12.6g} {row.error:>14.6e} {order_text(row):>8}"
        )
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        csv_lines = ["n_space,n_time,h,error,observed_order"]
        csv_lines += [
            f"{r.n_space},{r.n_time},{r.h:.17g},{r.error:.17g},{order_text(r)}" for r in rows
        ]
        (out / "convergence.csv").write_text("\n".join(csv_lines) + "\n")
        from .figures import convergence_figure

        convergence_figure(rows, out / "convergence.png", theta)
        click.echo(f"wrote {out / 'convergence.csv'} and {out / 'convergence.png'}", err=True)


@main.command()
@contract_options
@click.option("--sigma", type=float, default=0.2, show_default=True,
              help="Nominal volatility; each sweep entry replaces it.")
@click.option("--sigmas", default=None, help="Comma-separated explicit volatility list.")
@click.option("--seed", type=int, default=None, help="Seed for uniform draws in [0.05, 0.95].")
@click.option("--count", type=int, default=None, help="Number of seeded draws.")
@click.option("--grid", default=None, help="Override sweep grid dims MxN (default 10x29).")
@click.option("--smax", type=float, default=None, help="Override grid truncation.")
@click.option("--workers", type=int, default=1, help="Concurrent solves (results identical).")
@click.option(
    "--outdir",
    type=click.Path(file_okay=False, path_type=Path),
    required=True,
    help="Directory receiving one CSV per volatility.",
)
@click.option("--plot", is_flag=True, help="Also render price profiles to surfaces.png.")
@handles_errors
def surface(option_type, spot, strike, rate, maturity, sigma, sigmas, seed, count,
            grid, smax, workers, outdir, plot):
    """Crank-Nicolson solution surfaces over a volatility sweep, as CSV."""
    contract = api.build_contract(option_type, spot, strike, rate, sigma, maturity)
    sweep = SigmaSweepSpec(
        sigmas=tuple(float(s) for s in sigmas.split(",")) if sigmas else None,
        seed=seed,
        count=count,
    )
    grid_spec = _grid_spec(contract, grid, smax)
    result = sigma_surface(contract, sweep, grid=grid_spec, workers=workers)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for sig, price_grid in result.surfaces:
        path = outdir / surface_filename(sig)
        path.write_text(format_surface_csv(price_grid))
        written.append(str(path))
    if plot and result.surfaces:
        from .figures import surface_profiles_figure

        surface_profiles_figure(result.surfaces, outdir / "surfaces.png")
    manifest = {
        "written": written,
        "failures": [{"sigma": s, "error": msg} for s, msg in result.failures],
    }
    click.echo(json.dumps(manifest))
    if not written:
        sys.exit(NUMERIC_EXIT)


@main.command()
@click.option("--s0", type=float, required=True, help="Initial asset price.")
@click.option("--mu", type=float, required=True, help="Drift, decimal per annum.")
@click.option("--sigma", type=float, required=True, help="Volatility, decimal per annum.")
@click.option("--horizon", type=float, required=True, help="Simulation horizon in years.")
@click.option("--steps", type=int, required=True, help="Time steps per path.")
@click.option("--paths", type=int, required=True, help="Number of paths.")
@click.option("--seed", type=int, required=True, help="RNG seed.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True,
              help="Output CSV file.")
@click.option("--workers", type=int, default=1, help="Concurrent blocks (results identical).")
@click.option("--plot", is_flag=True, help="Also render a fan chart next to the CSV.")
@handles_errors
def simulate(s0, mu, sigma, horizon, steps, paths, seed, out, workers, plot):
    """Simulate geometric-Brownian-motion paths to CSV."""
    spec = GbmSpec(
        s0=s0, mu=mu, sigma=sigma, horizon=horizon, n_steps=steps, n_paths=paths, seed=seed
    )
    path_set = simulate_paths(spec, workers=workers)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(format_paths_csv(path_set))
    if plot:
        from .figures import paths_figure

        paths_figure(path_set, out.with_suffix(".png"))
    click.echo(f"wrote {paths} paths to {out}", err=True)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=None,
              help="Defaults to OPTIONFORGE_PORT or 8080.")
@click.option("--assets", type=click.Path(file_okay=False, path_type=Path), default=None,
              help="Static web UI directory served at '/'.")
@click.option("--workers", type=int, default=None,
              help="Pricing thread pool size (default: CPU count).")
@handles_errors
def serve(host, port, assets, workers):
    """Run the JSON pricing service (and web UI, when assets exist)."""
    import uvicorn

    from .service import create_app, default_assets_dir

    if port is None:
        port = int(os.environ.get("OPTIONFORGE_PORT", "8080"))
    app = create_app(assets_dir=assets or default_assets_dir(), max_workers=workers)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
