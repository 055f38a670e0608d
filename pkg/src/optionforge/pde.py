"""Theta-scheme finite-difference solver for the Black-Scholes equation.

Crank-Nicolson (theta = 1/2) on a uniform asset-price grid, marching in
time-to-expiry from the payoff, with closed-form boundary rows, an O(M)
tridiagonal solve per step, optional Rannacher start-up smoothing, a
grid-convergence study, and a volatility-sweep surface generator.
"""

from __future__ import annotations

import concurrent.futures
import math
from dataclasses import dataclass, replace
from typing import Literal

import numpy as np

from .analytic import PriceQuote, discount_factor, price as analytic_price
from .contracts import OptionContract, OptionKind
from .errors import DomainError, OutOfDomain, SingularMatrix

Smoothing = Literal["none", "rannacher"]

PIVOT_RTOL = 1e-14

# Grid dimensions used by the volatility sweep unless overridden: 11 space
# nodes (10 intervals) by 29 time steps.
SWEEP_DEFAULT_SPACE = 10
SWEEP_DEFAULT_TIME = 29


@dataclass(frozen=True)
class GridSpec:
    """Finite-difference lattice layout.

    n_space: number of asset-price intervals M (nodes are 0..M).
    n_time: number of time steps N.
    s_max: truncation of the asset domain; must exceed the strike.
    theta: implicitness weight (1/2 = Crank-Nicolson, 1 = fully implicit).
    smoothing: "rannacher" replaces the first two steps by four fully
        implicit half-steps, restoring second order for kinked payoffs.
    """

    n_space: int
    n_time: int
    s_max: float
    theta: float = 0.5
    smoothing: Smoothing = "none"

    def __post_init__(self):
        if self.n_space < 3:
            raise DomainError("n_space", f"must be >= 3, got {self.n_space}")
        if self.n_time < 1:
            raise DomainError("n_time", f"must be >= 1, got {self.n_time}")
        if not (self.s_max > 0 and math.isfinite(self.s_max)):
            raise DomainError("s_max", f"must be positive and finite, got {self.s_max}")
        if not 0.0 <= self.theta <= 1.0:
            raise DomainError("theta", f"must be in [0, 1], got {self.theta}")
        if self.smoothing not in ("none", "rannacher"):
            raise DomainError("smoothing", f"must be 'none' or 'rannacher', got {self.smoothing}")


@dataclass(frozen=True)
class PriceGrid:
    """Solution matrix over the lattice.

    values[i, j] is the option value at asset node i and time-to-expiry
    j * dt; column 0 is the payoff, the last column is the present value.
    """

    values: np.ndarray
    s_nodes: np.ndarray
    t_nodes: np.ndarray


@dataclass(frozen=True)
class TridiagonalSystem:
    """Banded system lower/diag/upper with right-hand side rhs."""

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        n = len(self.diag)
        if len(self.rhs) != n or len(self.lower) != n - 1 or len(self.upper) != n - 1:
            raise DomainError(
                "system",
                f"inconsistent dimensions: diag {n}, rhs {len(self.rhs)}, "
                f"lower {len(self.lower)}, upper {len(self.upper)}",
            )


def default_s_max(c: OptionContract) -> float:
    """Standard truncation: far enough that the asymptotic boundary error
    is negligible next to grid error."""
    return 4.0 * max(c.strike, c.spot)


def convergence_base_grid(c: OptionContract, n: int = 50, theta: float = 0.5) -> GridSpec:
    """Coarsest grid for order studies.

    Truncation sits at ~5/3 of the contract scale, snapped so the spot is
    a node at every doubling level: interpolation between nodes would
    otherwise jitter the measured order.  Tighter than the pricing
    default on purpose; a wide domain leaves the first-order time error
    of the theta=1 control buried under the O(dS^2) space term at
    reachable resolutions.
    """
    target = 5.0 / 3.0 * max(c.strike, c.spot)
    s_max = target
    if c.spot > 0:
        k = max(1, round(n * c.spot / target))
        snapped = n * c.spot / k
        if snapped > 1.05 * c.strike:
            s_max = snapped
    return GridSpec(n_space=n, n_time=n, s_max=s_max, theta=theta, smoothing="rannacher")


def _validate_for_grid(c: OptionContract) -> None:
    # Mirrors contract validation but admits sigma = 0: the degenerate
    # scheme is well defined (pure discounting / identity marching).
    for field, value in (
        ("spot", c.spot),
        ("strike", c.strike),
        ("rate", c.rate),
        ("sigma", c.sigma),
        ("maturity", c.maturity),
    ):
        if not math.isfinite(value):
            raise DomainError(field, f"must be finite, got {value!r}")
    if c.spot < 0:
        raise DomainError("spot", f"must be >= 0, got {c.spot!r}")
    if c.strike <= 0:
        raise DomainError("strike", f"must be > 0, got {c.strike!r}")
    if c.sigma < 0:
        raise DomainError("sigma", f"must be >= 0, got {c.sigma!r}")
    if c.maturity <= 0:
        raise DomainError("maturity", f"must be > 0, got {c.maturity!r}")


def build_grid(c: OptionContract, g: GridSpec) -> tuple[float, float, np.ndarray]:
    """Uniform lattice: dS = s_max / M, dt = T / N, nodes S_i = i dS."""
    _validate_for_grid(c)
    if g.s_max <= c.strike:
        raise DomainError("s_max", f"must exceed the strike {c.strike}, got {g.s_max}")
    ds = g.s_max / g.n_space
    dt = c.maturity / g.n_time
    s_nodes = ds * np.arange(g.n_space + 1, dtype=float)
    return ds, dt, s_nodes


def cn_coefficients(
    i, dt: float, sigma: float, rate: float, theta: float = 0.5
):
    """Theta-weighted tridiagonal row entries at interior node index i.

    The dt-scaled spatial operator on S_i = i dS has row
    (A_i, B_i, C_i) = (dt (sigma^2 i^2 - r i)/2, -dt (sigma^2 i^2 + r),
    dt (sigma^2 i^2 + r i)/2); this returns theta * (A_i, B_i, C_i).
    The implicit half of a step uses weight theta, the explicit half
    1 - theta.  Row sum is -theta dt r: per-step discounting.
    Accepts a scalar or array of node indices.
    """
    i = np.asarray(i, dtype=float)
    sig2_i2 = (sigma * i) ** 2
    a = 0.5 * theta * dt * (sig2_i2 - rate * i)
    b = -theta * dt * (sig2_i2 + rate)
    c = 0.5 * theta * dt * (sig2_i2 + rate * i)
    return a, b, c


def solve_tridiagonal(sys: TridiagonalSystem) -> np.ndarray:
    """Thomas elimination, O(n).

    Raises SingularMatrix when a pivot falls below 1e-14 of the largest
    coefficient magnitude.  Plain Python lists in the sweeps: the solver
    sits inside the time-marching loop and numpy scalar indexing would
    triple its cost.
    """
    a = sys.lower.tolist()
    b = sys.diag.tolist()
    c = sys.upper.tolist()
    d = sys.rhs.tolist()
    n = len(b)
    scale = max(
        max(abs(v) for v in b),
        max((abs(v) for v in a), default=0.0),
        max((abs(v) for v in c), default=0.0),
    )
    tol = PIVOT_RTOL * scale
    pivot = b[0]
    if abs(pivot) <= tol:
        raise SingularMatrix(f"zero pivot at row 0 (|{pivot}| <= {tol})")
    cp = [0.0] * n
    dp = [0.0] * n
    cp[0] = c[0] / pivot if n > 1 else 0.0
    dp[0] = d[0] / pivot
    for i in range(1, n):
        pivot = b[i] - a[i - 1] * cp[i - 1]
        if abs(pivot) <= tol:
            raise SingularMatrix(f"zero pivot at row {i} (|{pivot}| <= {tol})")
        if i < n - 1:
            cp[i] = c[i] / pivot
        dp[i] = (d[i] - a[i - 1] * dp[i - 1]) / pivot
    x = [0.0] * n
    x[n - 1] = dp[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return np.asarray(x)


def boundary_values(kind: OptionKind, strike: float, rate: float, s_max: float, tau: float):
    """Closed-form values at the grid edges at time-to-expiry tau.

    Call: worthless at S = 0, S - E discounted at the far boundary.
    Put: discounted strike at S = 0, worthless at the far boundary.
    """
    df = discount_factor(rate, tau)
    if kind is OptionKind.CALL:
        return 0.0, s_max - strike * df
    return strike * df, 0.0


def _step_plan(n_time: int, dt: float, theta: float, smoothing: Smoothing):
    """Sub-steps per stored time level as (dt, theta, level_fraction).

    level_fraction positions the sub-step's end inside its level, so the
    marcher can evaluate time-to-expiry as (level - 1 + fraction) * dt;
    stored levels then land on exactly j * dt, bit-identical to the grid's
    t_nodes, rather than drifting through accumulation.
    """
    plan: list[list[tuple[float, float, float]]] = []
    rannacher_levels = min(2, n_time) if smoothing == "rannacher" else 0
    for j in range(n_time):
        if j < rannacher_levels:
            plan.append([(dt / 2.0, 1.0, 0.5), (dt / 2.0, 1.0, 1.0)])
        else:
            plan.append([(dt, theta, 1.0)])
    return plan


def price_crank_nicolson(c: OptionContract, g: GridSpec) -> tuple[PriceGrid, PriceQuote]:
    """March the payoff from expiry to the present and interpolate at spot.

    Each step solves (I - B_imp) U_new = (I + B_exp) U_old + boundary
    terms on the interior nodes, where B is the tridiagonal operator from
    cn_coefficients split into theta / (1 - theta) halves; boundary rows
    are imposed from boundary_values at the step's time-to-expiry.
    """
    _validate_for_grid(c)
    ds, dt, s_nodes = build_grid(c, g)
    m = g.n_space
    n = g.n_time

    values = np.empty((m + 1, n + 1))
    values[:, 0] = np.maximum(
        s_nodes - c.strike if c.kind is OptionKind.CALL else c.strike - s_nodes, 0.0
    )
    t_nodes = dt * np.arange(n + 1)

    interior = np.arange(1, m)
    u = values[:, 0].copy()
    tau = 0.0
    for j, substeps in enumerate(_step_plan(n, dt, g.theta, g.smoothing), start=1):
        for dt_step, theta_step, fraction in substeps:
            a_im, b_im, c_im = cn_coefficients(interior, dt_step, c.sigma, c.rate, theta_step)
            a_ex, b_ex, c_ex = cn_coefficients(
                interior, dt_step, c.sigma, c.rate, 1.0 - theta_step
            )
            tau_new = (j - 1 + fraction) * dt
            lo_old, hi_old = boundary_values(c.kind, c.strike, c.rate, g.s_max, tau)
            lo_new, hi_new = boundary_values(c.kind, c.strike, c.rate, g.s_max, tau_new)

            rhs = u[1:m] + b_ex * u[1:m]
            rhs[1:] += a_ex[1:] * u[1 : m - 1]
            rhs[:-1] += c_ex[:-1] * u[2:m]
            rhs[0] += a_ex[0] * lo_old + a_im[0] * lo_new
            rhs[-1] += c_ex[-1] * hi_old + c_im[-1] * hi_new

            u[1:m] = solve_tridiagonal(
                TridiagonalSystem(
                    lower=-a_im[1:], diag=1.0 - b_im, upper=-c_im[:-1], rhs=rhs
                )
            )
            u[0], u[m] = lo_new, hi_new
            tau = tau_new
        values[:, j] = u

    grid = PriceGrid(values=values, s_nodes=s_nodes, t_nodes=t_nodes)
    quote = PriceQuote(
        price=interpolate_price(grid, c.spot),
        method="crank_nicolson",
        diagnostics={
            "n_space": m,
            "n_time": n,
            "s_max": g.s_max,
            "theta": g.theta,
            "smoothing": g.smoothing,
        },
    )
    return grid, quote


def interpolate_price(grid: PriceGrid, spot: float) -> float:
    """Linear interpolation on the final time level; exact at the nodes."""
    s = grid.s_nodes
    if spot < 0.0 or spot > s[-1]:
        raise OutOfDomain(f"spot {spot} outside the grid domain [0, {s[-1]}]")
    column = grid.values[:, -1]
    idx = int(np.searchsorted(s, spot))
    if idx == 0 or s[idx] == spot:
        return float(column[idx])
    w = (spot - s[idx - 1]) / (s[idx] - s[idx - 1])
    return float((1.0 - w) * column[idx - 1] + w * column[idx])


@dataclass(frozen=True)
class ConvergenceLevel:
    """One refinement level of a grid-convergence study."""

    n_space: int
    n_time: int
    h: float
    error: float
    observed_order: float | None  # None on the coarsest level or when exact


def convergence_study(
    c: OptionContract, levels: int, base: GridSpec
) -> list[ConvergenceLevel]:
    """Error vs the closed form under simultaneous (dS, dt) halving.

    Rannacher smoothing is forced on so the payoff kink does not mask the
    scheme's order; the reference at sigma = 0 is the discounted intrinsic
    value (the exact degenerate solution).  observed_order between levels
    is log2(err_l / err_{l+1}).
    """
    if levels < 3:
        raise DomainError("levels", f"need >= 3 refinement levels, got {levels}")
    if c.sigma > 0:
        reference = analytic_price(c).price
    else:
        df = discount_factor(c.rate, c.maturity)
        intrinsic = c.spot - c.strike * df
        reference = max(intrinsic, 0.0) if c.kind is OptionKind.CALL else max(-intrinsic, 0.0)

    rows: list[ConvergenceLevel] = []
    for level in range(levels):
        factor = 2**level
        g = replace(
            base,
            n_space=base.n_space * factor,
            n_time=base.n_time * factor,
            smoothing="rannacher",
        )
        _, quote = price_crank_nicolson(c, g)
        error = abs(quote.price - reference)
        order = None
        if rows:
            prev = rows[-1].error
            if prev > 0.0 and error > 0.0:
                order = math.log2(prev / error)
        rows.append(
            ConvergenceLevel(
                n_space=g.n_space,
                n_time=g.n_time,
                h=g.s_max / g.n_space,
                error=error,
                observed_order=order,
            )
        )
    return rows


@dataclass(frozen=True)
class SigmaSweepSpec:
    """Either an explicit volatility list or (seed, count) uniform draws
    from [0.05, 0.95]."""

    sigmas: tuple[float, ...] | None = None
    seed: int | None = None
    count: int | None = None

    def __post_init__(self):
        explicit = self.sigmas is not None
        seeded = self.seed is not None and self.count is not None
        if explicit == seeded:
            raise DomainError(
                "sweep", "give either an explicit sigma list or both seed and count"
            )
        if seeded and self.count < 1:
            raise DomainError("count", f"must be >= 1, got {self.count}")

    def resolve(self) -> tuple[float, ...]:
        if self.sigmas is not None:
            return tuple(float(s) for s in self.sigmas)
        rng = np.random.default_rng(self.seed)
        return tuple(rng.uniform(0.05, 0.95, self.count).tolist())


@dataclass(frozen=True)
class SweepResult:
    """Per-sigma grids plus any per-sigma failures (sigma, message)."""

    surfaces: list[tuple[float, PriceGrid]]
    failures: list[tuple[float, str]]


def sigma_surface(
    c_base: OptionContract,
    sweep: SigmaSweepSpec,
    grid: GridSpec | None = None,
    workers: int = 1,
) -> SweepResult:
    """One solve per volatility; a failing sigma is reported, not fatal.

    Results are ordered by the sweep's sigma order and independent of the
    worker count.
    """
    sigmas = sweep.resolve()
    if grid is None:
        grid = GridSpec(
            n_space=SWEEP_DEFAULT_SPACE,
            n_time=SWEEP_DEFAULT_TIME,
            s_max=default_s_max(c_base),
        )

    def solve_one(sigma: float):
        g, _ = price_crank_nicolson(replace(c_base, sigma=sigma), grid)
        return g

    outcomes: list[PriceGrid | Exception] = [None] * len(sigmas)  # type: ignore[list-item]
    if workers <= 1:
        for pos, sigma in enumerate(sigmas):
            try:
                outcomes[pos] = solve_one(sigma)
            except Exception as exc:  # noqa: BLE001 - reported per sigma
                outcomes[pos] = exc
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {pos: pool.submit(solve_one, s) for pos, s in enumerate(sigmas)}
            for pos, fut in futures.items():
                try:
                    outcomes[pos] = fut.result()
                except Exception as exc:  # noqa: BLE001
                    outcomes[pos] = exc

    surfaces: list[tuple[float, PriceGrid]] = []
    failures: list[tuple[float, str]] = []
    for sigma, outcome in zip(sigmas, outcomes):
        if isinstance(outcome, Exception):
            failures.append((sigma, str(outcome)))
        else:
            surfaces.append((sigma, outcome))
    return SweepResult(surfaces=surfaces, failures=failures)


def surface_filename(sigma: float) -> str:
    return f"surface_sigma={sigma!r}.csv"


def format_surface_csv(grid: PriceGrid) -> str:
    """Rows are time levels: header "t,<S_0>,...,<S_M>", then
    "tau_j,U[0][j],...,U[M][j]" per level, 17 significant digits."""
    lines = ["t," + ",".join(f"{s:.17g}" for s in grid.s_nodes)]
    for j, tau in enumerate(grid.t_nodes):
        row = grid.values[:, j]
        lines.append(f"{tau:.17g}," + ",".join(f"{v:.17g}" for v in row))
    return "\n".join(lines) + "\n"
