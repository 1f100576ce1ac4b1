import warnings

import numpy as np
import pytest

import maxent_copula as mc

warnings.filterwarnings("ignore", message=".*starlette.testclient.*")

_MODELS = {}


def cached_model(key, factory):
    """Session-wide model cache; kernel tables are expensive to rebuild."""
    if key not in _MODELS:
        _MODELS[key] = mc.build_model(factory())
    return _MODELS[key]


@pytest.fixture(scope="session")
def independence_model():
    return cached_model("t2", lambda: mc.PowerDiagonal(2.0, 2))


@pytest.fixture(scope="session")
def plinear02_model():
    return cached_model("plinear0.2", lambda: mc.PiecewiseLinearDiagonal(0.2, 2))


@pytest.fixture(scope="session")
def two_block_model():
    def factory():
        blocks = [mc.PowerDiagonal(2.0, 2), mc.PowerDiagonal(2.0, 2)]
        return mc.SplicedDiagonal(blocks, [0.5, 0.5])

    return cached_model("two_block_t2", factory)


def plinear_density(u, v, alpha):
    """Closed-form bivariate density for the piecewise-linear diagonal,
    on the ordered triangle u <= v (six regions)."""
    a = alpha
    if v < a or u >= 1.0 - a:
        return 0.0
    if u < a:
        if v < 1.0 - a:
            return np.exp((a - v) / (2 * a)) / (2 * a)
        return np.exp((2 * a - 1.0) / (2 * a)) / a
    if v < 1.0 - a:
        return np.exp((u - v) / (2 * a)) / (4 * a)
    return np.exp((u + a - 1.0) / (2 * a)) / (2 * a)


def power_density(u, v, alpha):
    """Closed-form bivariate density for delta = t^alpha, u <= v."""
    al = alpha
    return (al / 4.0) * (2.0 - al * u ** (al - 1.0)) \
        * (1.0 - u ** (al - 1.0)) ** (-al / (2.0 * al - 2.0)) \
        * v ** (al - 2.0) \
        * (1.0 - v ** (al - 1.0)) ** ((2.0 - al) / (2.0 * al - 2.0))
