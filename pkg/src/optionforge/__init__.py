"""European vanilla option pricing engine.

Four mutually cross-checking routes to the same price: the Black-Scholes
closed form, a Crank-Nicolson finite-difference solver, a heat-kernel
quadrature, and a geometric-Brownian-motion Monte Carlo estimate.
"""

from .analytic import (
    D1D2,
    PriceQuote,
    d1_d2,
    parity_gap,
    price,
    price_call,
    price_put,
    std_normal_cdf,
)
from .contracts import (
    DatePair,
    OptionContract,
    OptionKind,
    payoff,
    validate_contract,
    year_fraction,
)
from .errors import (
    CapacityError,
    DomainError,
    InvalidDates,
    OutOfDomain,
    PricingError,
    QuadratureError,
    SingularMatrix,
)
from .gbm import GbmSpec, PathSet, mc_price, simulate_paths
from .heat_kernel import (
    HeatCoords,
    QuadratureSpec,
    TransformConstants,
    from_heat_value,
    heat_kernel_convolution,
    price_via_heat_kernel,
    to_heat_coords,
    transform_constants,
    transformed_payoff,
)
from .pde import (
    ConvergenceLevel,
    GridSpec,
    PriceGrid,
    SigmaSweepSpec,
    TridiagonalSystem,
    build_grid,
    cn_coefficients,
    convergence_study,
    interpolate_price,
    price_crank_nicolson,
    sigma_surface,
    solve_tridiagonal,
)

__version__ = "0.1.0"
