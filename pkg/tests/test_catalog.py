import pytest
import sympy

from geoint.catalog import (
    EXAMPLES,
    ExampleKind,
    beta_metric,
    example_names,
    get_example,
    quadratic_family_metric,
    run_all,
    run_example,
)
from geoint.errors import InputError
from geoint.expr import EvaluationMode, coordinate

x, y = coordinate("x"), coordinate("y")


def test_catalog_names_are_unique():
    assert len(set(example_names())) == len(EXAMPLES)
    assert "g0" in example_names()


def test_unknown_example():
    with pytest.raises(InputError):
        get_example("torus")


def test_expected_pairs_are_consistent():
    for example in EXAMPLES:
        if example.kind is ExampleKind.INTEGRALS:
            assert example.integrals
            continue
        dim_j1, dim_j2 = example.expected
        assert (dim_j1 == 3) == (dim_j2 == 6)


def test_metric_builders():
    g = beta_metric(2)
    assert g.g11 == sympy.exp(4 * x)
    assert g.g22 == sympy.exp(2 * x)
    q = quadratic_family_metric(sympy.Rational(1, 4), 1, 1)
    assert q.g11 == x**2 + y**2 / 4 + y + 1


def test_exponential_examples_are_pinned():
    example = get_example("beta-3")
    policy = example.policy()
    assert policy.interval("x") == (0, 0)
    assert policy.mode is EvaluationMode.EXACT


def test_example_policy_overrides():
    assert get_example("flat").policy(seed=9).seed == 9


@pytest.mark.parametrize("name", ["flat", "beta-1", "g0", "g0-integrals"])
def test_run_example(name):
    outcome = run_example(get_example(name))
    assert outcome.passed, outcome.to_dict()


def test_run_example_reports_dimensions():
    outcome = run_example(get_example("g0"))
    assert outcome.results["classification"] == {"dim_J1": 1, "dim_J2": 4}
    assert outcome.results["dimension_2"] == 4
    assert outcome.results["dimension_3"] == 4


def test_example_to_dict():
    data = get_example("g0").to_dict()
    assert data["expected"] == {"dim_J1": 1, "dim_J2": 4}
    assert data["dimensions"] == {"2": 4, "3": 4}
    assert data["metric"]["g11"] == "x"


@pytest.mark.slow
def test_run_all():
    outcomes = run_all({"samples": 5})
    failed = {name: outcome.to_dict() for name, outcome in outcomes.items() if not outcome.passed}
    assert not failed
