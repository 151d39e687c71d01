import pytest

from geoint.expr import EvaluationMode, ZeroPolicy, coordinate
from geoint.geometry import Metric2D

x, y = coordinate("x"), coordinate("y")


@pytest.fixture
def exact_policy():
    return ZeroPolicy(mode=EvaluationMode.EXACT, samples=5, seed=0)


@pytest.fixture
def float_policy():
    return ZeroPolicy(mode=EvaluationMode.FLOAT, samples=5, seed=0, tolerance=1e-40)


@pytest.fixture
def flat():
    return Metric2D(1, 0, 1)


@pytest.fixture
def sphere():
    return Metric2D.conformal(4 / (1 + x**2 + y**2) ** 2)


@pytest.fixture
def g0():
    return Metric2D.conformal(x)


@pytest.fixture
def liouville():
    return Metric2D.conformal(x**2 + y**3 + 1)
