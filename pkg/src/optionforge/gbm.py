"""Seeded geometric-Brownian-motion paths and a Monte Carlo price check.

Stepping is log-Euler, S_{k+1} = S_k exp((mu - sigma^2/2) dt +
sigma sqrt(dt) phi_k), which is exact in distribution for constant
coefficients, so the Monte Carlo estimate carries sampling error only.

Reproducibility scheme: paths are generated in fixed blocks of
``BLOCK_PATHS``; block b draws from PCG64 seeded with
SeedSequence(entropy=seed, spawn_key=(b,)).  Path i is row i % BLOCK_PATHS
of block i // BLOCK_PATHS, so its values depend only on (seed, i) and the
step count, never on the total path count, the worker count, or
scheduling order.  Reductions sum per block (numpy pairwise) and combine
block totals in index order with math.fsum.
"""

from __future__ import annotations

import concurrent.futures
import math
from dataclasses import dataclass

import numpy as np

from .analytic import PriceQuote, discount_factor
from .contracts import OptionContract, OptionKind, validate_contract
from .errors import CapacityError, DomainError

BLOCK_PATHS = 16384
DEFAULT_CELL_CAP = 2**27  # ~1 GiB of float64


@dataclass(frozen=True)
class GbmSpec:
    """Simulation request: dS/S = sigma dX + mu dt discretized on n_steps."""

    s0: float
    mu: float
    sigma: float
    horizon: float
    n_steps: int
    n_paths: int
    seed: int

    def __post_init__(self):
        if not (self.s0 > 0 and math.isfinite(self.s0)):
            raise DomainError("s0", f"must be > 0, got {self.s0}")
        if not math.isfinite(self.mu):
            raise DomainError("mu", f"must be finite, got {self.mu}")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise DomainError("sigma", f"must be > 0, got {self.sigma}")
        if not (self.horizon > 0 and math.isfinite(self.horizon)):
            raise DomainError("horizon", f"must be > 0, got {self.horizon}")
        if self.n_steps < 1:
            raise DomainError("n_steps", f"must be >= 1, got {self.n_steps}")
        if self.n_paths < 1:
            raise DomainError("n_paths", f"must be >= 1, got {self.n_paths}")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed", f"must be a 64-bit unsigned integer, got {self.seed}")


@dataclass(frozen=True)
class PathSet:
    """Simulated realizations, one row per path, column 0 pinned at s0."""

    paths: np.ndarray
    spec: GbmSpec

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.spec.horizon, self.spec.n_steps + 1)


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(block,))))


def _check_capacity(n_paths: int, n_steps: int, max_cells: int) -> None:
    cells = n_paths * (n_steps + 1)
    if cells > max_cells:
        raise CapacityError(
            f"{n_paths} paths x {n_steps} steps needs {cells} cells, cap is {max_cells}"
        )


def _block_spans(n_paths: int):
    for block in range(0, (n_paths + BLOCK_PATHS - 1) // BLOCK_PATHS):
        start = block * BLOCK_PATHS
        yield block, start, min(start + BLOCK_PATHS, n_paths)


def simulate_paths(
    spec: GbmSpec, *, workers: int = 1, max_cells: int = DEFAULT_CELL_CAP
) -> PathSet:
    """Generate the full path matrix (n_paths, n_steps + 1)."""
    _check_capacity(spec.n_paths, spec.n_steps, max_cells)
    dt = spec.horizon / spec.n_steps
    drift = (spec.mu - 0.5 * spec.sigma**2) * dt
    vol = spec.sigma * math.sqrt(dt)
    out = np.empty((spec.n_paths, spec.n_steps + 1))
    out[:, 0] = spec.s0

    def fill_block(block: int, start: int, stop: int) -> None:
        normals = _block_rng(spec.seed, block).standard_normal((stop - start, spec.n_steps))
        log_increments = drift + vol * normals
        out[start:stop, 1:] = spec.s0 * np.exp(np.cumsum(log_increments, axis=1))

    spans = list(_block_spans(spec.n_paths))
    if workers <= 1:
        for block, start, stop in spans:
            fill_block(block, start, stop)
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda span: fill_block(*span), spans))
    return PathSet(paths=out, spec=spec)


def _terminal_payoff_sums(
    c: OptionContract, n_paths: int, n_steps: int, seed: int
) -> tuple[float, float, float]:
    """Block-streamed sums of the terminal payoff, its square, and S_T.

    Drift is the risk-free rate regardless of any mu: pricing is
    risk-neutral.  Returns (sum, sum_of_squares, sum_terminal).
    """
    dt = c.maturity / n_steps
    drift = (c.rate - 0.5 * c.sigma**2) * dt
    vol = c.sigma * math.sqrt(dt)
    sums: list[float] = []
    sums_sq: list[float] = []
    sums_terminal: list[float] = []
    for block, start, stop in _block_spans(n_paths):
        normals = _block_rng(seed, block).standard_normal((stop - start, n_steps))
        log_total = drift * n_steps + vol * normals.sum(axis=1)
        terminal = c.spot * np.exp(log_total)
        if c.kind is OptionKind.CALL:
            pay = np.maximum(terminal - c.strike, 0.0)
        else:
            pay = np.maximum(c.strike - terminal, 0.0)
        sums.append(float(np.sum(pay)))
        sums_sq.append(float(np.sum(pay * pay)))
        sums_terminal.append(float(np.sum(terminal)))
    return math.fsum(sums), math.fsum(sums_sq), math.fsum(sums_terminal)


def mc_price(
    c: OptionContract,
    n_paths: int,
    n_steps: int = 1,
    seed: int = 0,
    *,
    max_cells: int = DEFAULT_CELL_CAP,
) -> tuple[PriceQuote, float]:
    """Discounted-mean payoff estimate and its standard error."""
    validate_contract(c)
    if n_paths < 1:
        raise DomainError("n_paths", f"must be >= 1, got {n_paths}")
    if n_steps < 1:
        raise DomainError("n_steps", f"must be >= 1, got {n_steps}")
    _check_capacity(n_paths, n_steps, max_cells)
    total, total_sq, _ = _terminal_payoff_sums(c, n_paths, n_steps, seed)
    mean = total / n_paths
    df = discount_factor(c.rate, c.maturity)
    if n_paths > 1:
        variance = max(total_sq - n_paths * mean * mean, 0.0) / (n_paths - 1)
        std_error = df * math.sqrt(variance / n_paths)
    else:
        std_error = math.inf
    quote = PriceQuote(
        price=df * mean,
        method="monte_carlo",
        diagnostics={
            "std_error": std_error,
            "n_paths": n_paths,
            "n_steps": n_steps,
            "seed": seed,
        },
    )
    return quote, std_error


def format_paths_csv(paths: PathSet) -> str:
    """Header "path_id,t_0,...,t_n", one row per path, 17 significant digits."""
    n = paths.spec.n_steps
    lines = ["path_id," + ",".join(f"t_{k}" for k in range(n + 1))]
    for i, row in enumerate(paths.paths):
        lines.append(f"{i}," + ",".join(f"{v:.17g}" for v in row))
    return "\n".join(lines) + "\n"
