"""Shared fixtures: the flagship contract and a seeded contract battery."""

from __future__ import annotations

import numpy as np
import pytest

from optionforge import OptionContract, OptionKind

BATTERY_SEED = 20140206
BATTERY_STRIKE = 100.0


def make_battery(n: int = 50, seed: int = BATTERY_SEED) -> list[OptionContract]:
    """Deterministic mixed-kind battery: S/E in [0.5, 2], sigma in
    [0.1, 0.8], r in [0, 0.1], maturity in [0.05, 2] years."""
    rng = np.random.default_rng(seed)
    contracts = []
    for i in range(n):
        ratio = rng.uniform(0.5, 2.0)
        sigma = rng.uniform(0.1, 0.8)
        rate = rng.uniform(0.0, 0.1)
        tau = rng.uniform(0.05, 2.0)
        kind = OptionKind.CALL if i % 2 == 0 else OptionKind.PUT
        contracts.append(
            OptionContract(kind, BATTERY_STRIKE * ratio, BATTERY_STRIKE, rate, sigma, tau)
        )
    return contracts


@pytest.fixture(scope="session")
def battery() -> list[OptionContract]:
    return make_battery()


@pytest.fixture
def flagship_call() -> OptionContract:
    return OptionContract(OptionKind.CALL, 100.0, 120.0, 0.02, 0.5, 89 / 365)


@pytest.fixture
def flagship_put() -> OptionContract:
    return OptionContract(OptionKind.PUT, 100.0, 120.0, 0.02, 0.5, 89 / 365)
