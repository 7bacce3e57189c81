import numpy as np
import pytest

from mfelab import (
    Free,
    MfeProblem,
    Positive,
    Power,
    RadialGrid,
    WeightProfile,
    build_weight,
    solve,
    solve_modes,
)


@pytest.fixture(scope="session")
def grid512():
    return RadialGrid.uniform(512, 2)


@pytest.fixture(scope="session")
def unit_weight(grid512):
    return WeightProfile(grid512, np.ones(grid512.nodes.size), Positive())


@pytest.fixture(scope="session")
def baseline0(grid512):
    """n=2, power p=2, lambda=0: solution, weight."""
    problem = MfeProblem(n=2, lam=0.0, nonlinearity=Power(2.0), alpha_mode=Free())
    sol = solve(problem, grid512, tol=1e-12)
    return problem, sol, build_weight(problem, sol)


@pytest.fixture(scope="session")
def baseline_half(grid512):
    """n=2, power p=2, lambda=0.5: solution, weight."""
    problem = MfeProblem(n=2, lam=0.5, nonlinearity=Power(2.0), alpha_mode=Free())
    sol = solve(problem, grid512, tol=1e-12)
    return problem, sol, build_weight(problem, sol)


@pytest.fixture(scope="session")
def baseline_half_spectra(baseline_half):
    _, sol, weight = baseline_half
    return solve_modes(weight, sol.lambda_effective, list(range(9)), 5)
