"""Shared fixtures: the benchmark problem configurations."""

import pytest

from aimsolve import ExtReal, ReducedParams, make_setup


@pytest.fixture(scope="session")
def linear_setup():
    """kappa=1, a_tilde=1, gamma=1, l=0, beta=0.5 (the Table-1/2 config)."""
    red = ReducedParams.from_dimensionless(1, 1, 0)
    return make_setup(red, 1, "0.5")


@pytest.fixture(scope="session")
def quadratic_setup():
    """kappa=2, a_tilde=1, gamma=1, l=0, beta=1 (the Table-3 config)."""
    red = ReducedParams.from_dimensionless(1, 1, 0)
    return make_setup(red, 2, "1")


@pytest.fixture(scope="session")
def ground_eps_linear(linear_setup):
    """Converged ground-state eigenvalue of the linear-confinement config."""
    from aimsolve import solve_state

    res = solve_state(linear_setup, 0, k_max=60, tol="1e-10")
    assert res.status == "converged"
    return res.epsilon


def ext(x, bits=None):
    return ExtReal(x, bits) if bits else ExtReal(x)
