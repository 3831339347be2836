import numpy as np
import pytest

from rdbp import (
    Constant,
    LawTriple,
    OffspringLaw,
    Seed,
    Uniform,
    Universe,
)

# Ten arrivals with a budget of 100: small enough to check by hand, rich
# enough to separate every policy (ties included).
WORKED_CLAIMS = np.array([11.0, 7.0, 15.0, 19.0, 11.0, 18.0, 10.0, 22.0, 17.0, 19.0])
WORKED_BUDGET = 100.0


@pytest.fixture
def worked_claims():
    return WORKED_CLAIMS.copy()


@pytest.fixture
def binary_offspring():
    """Mean 1.5 with extinction reachable: 0 or 2 children."""
    return OffspringLaw((0.25, 0.0, 0.75))


@pytest.fixture
def uniform_claim():
    return Uniform(0.0, 2.0)


@pytest.fixture
def basic_triple(binary_offspring, uniform_claim):
    return LawTriple(binary_offspring, uniform_claim, Constant(1.2))


@pytest.fixture
def universe(basic_triple):
    return Universe(Seed(2024), basic_triple)
