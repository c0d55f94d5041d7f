import numpy as np
import pytest

from epigame import ModelParams


def example_params(zeta: float) -> ModelParams:
    """Reference parameter set used across the suite: alpha=3, lambda=0.5, mu=1, c=3."""
    return ModelParams(alpha=3.0, lam=0.5, mu=1.0, c=3.0, zeta=zeta)


def random_valid_params(rng: np.random.Generator, above_threshold: bool | None = None) -> ModelParams:
    """Random parameters satisfying the payoff ordering (c > 1, zeta > c + 1)."""
    for _ in range(1000):
        alpha = rng.uniform(0.2, 4.0)
        mu = rng.uniform(0.2, 2.5)
        if above_threshold is True:
            lo = mu / (2.0 * alpha)
            if lo >= 0.95:
                continue
            lam = rng.uniform(lo * 1.05, 1.0)
        elif above_threshold is False:
            lam = min(1.0, rng.uniform(0.1, 0.95) * mu / (2.0 * alpha))
            if lam <= 0.0:
                continue
        else:
            lam = rng.uniform(0.05, 1.0)
        c = rng.uniform(1.5, 5.0)
        zeta = rng.uniform(c + 1.5, c + 9.0)
        return ModelParams(alpha=alpha, lam=lam, mu=mu, c=c, zeta=zeta)
    raise RuntimeError("failed to draw valid parameters")


@pytest.fixture
def rng():
    return np.random.default_rng(20260826)
