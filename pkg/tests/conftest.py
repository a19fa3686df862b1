"""Pytest configuration and fixtures for xxzbethe tests."""

import numpy as np
import pytest

from xxzbethe import BetheState, BoundaryCase, ModelParams, Side
from xxzbethe.golden import table1, table2
from xxzbethe.solver import newton_refine


def make_params(case, *, n=2, two_s=1, r=1, q=3, **overrides):
    """ModelParams with generic boundary values for the given case."""
    values = {
        "alpha_minus": 0.31 + 0.47j,
        "alpha_plus": -0.22 + 0.83j,
        "beta_minus": 0.41 - 0.17j,
        "beta_plus": 0.26 + 0.35j,
        "theta": 0.37 + 0.11j,
    }
    case = BoundaryCase(case)
    if case == BoundaryCase.CASE1_ALPHA_BETA:
        sides = (overrides.get("free_alpha_side", Side.MINUS), overrides.get("free_beta_side", Side.MINUS))
        values.pop("alpha_plus" if sides[0] == Side.MINUS else "alpha_minus")
        values.pop("beta_plus" if sides[1] == Side.MINUS else "beta_minus")
    elif case == BoundaryCase.CASE2_ALPHA_ALPHA:
        values.pop("beta_minus")
        values.pop("beta_plus")
    else:
        values.pop("alpha_minus")
        values.pop("alpha_plus")
    values.update(overrides)
    return ModelParams(n=n, two_s=two_s, r=r, q=q, case=case, **values)


SUPPORTED = [
    (BoundaryCase.CASE1_ALPHA_BETA, 1),
    (BoundaryCase.CASE1_ALPHA_BETA, 2),
    (BoundaryCase.CASE2_ALPHA_ALPHA, 1),
    (BoundaryCase.CASE2_ALPHA_ALPHA, 2),
    (BoundaryCase.CASE3_BETA_BETA, 1),
]


@pytest.fixture
def params_factory():
    """Build ModelParams for a case with generic boundary values."""
    return make_params


@pytest.fixture(params=SUPPORTED, ids=lambda p: f"{p[0].value}-r{p[1]}")
def supported_params(request):
    """Spin-1/2, N=2, q=3 params for every supported case and r parity."""
    case, r = request.param
    return make_params(case, r=r)


@pytest.fixture
def random_points():
    """Deterministic generic spectral parameters."""
    rng = np.random.default_rng(1234)
    return [complex(rng.uniform(-0.5, 0.5), rng.uniform(-np.pi, np.pi)) for _ in range(10)]


@pytest.fixture
def random_state():
    """A BetheState with generic (non-solution) roots for Case 2, N=2, q=3."""
    params = make_params(BoundaryCase.CASE2_ALPHA_ALPHA, r=1)
    rng = np.random.default_rng(99)
    roots = [complex(rng.uniform(0.1, 0.6), rng.uniform(-2.5, 2.5)) for _ in range(params.m_roots)]
    return BetheState(params=params, roots=roots)


@pytest.fixture(scope="session")
def table1_params():
    """Parameters of the spin-1/2 reference table."""
    return table1().params


@pytest.fixture(scope="session")
def table2_params():
    """Parameters of the spin-1 reference table."""
    return table2().params


@pytest.fixture(scope="session")
def refined_table1():
    """Newton-refined states for every level of the spin-1/2 table."""
    table = table1()
    return [newton_refine(BetheState(params=table.params, roots=roots)) for roots in table.roots]


@pytest.fixture(scope="session")
def refined_table2():
    """Newton-refined states for every level of the spin-1 table."""
    table = table2()
    return [newton_refine(BetheState(params=table.params, roots=roots)) for roots in table.roots]
