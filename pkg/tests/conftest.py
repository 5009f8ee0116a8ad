import numpy as np
import pytest

from latreg.representation import JORDAN_BLOCK, Representation


@pytest.fixture
def jordan():
    return Representation((JORDAN_BLOCK, JORDAN_BLOCK), "jordan-counterexample")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def scalar_rep(*values) -> Representation:
    return Representation(tuple(np.array([[v]], dtype=complex) for v in values))
