import pytest
import sympy

from geoint.catalog import EXAMPLES, ExampleKind, get_example
from geoint.errors import InconclusiveError
from geoint.expr import TriState, coordinate
from geoint.geometry import AffineMap, Metric2D
from geoint.invariants import invariant_frame
from geoint.mobility import MobilityReport, classify, killing_dimension, laplacian_check

x, y = coordinate("x"), coordinate("y")


@pytest.mark.parametrize(
    "name",
    ["flat", "sphere", "beta-minus2", "beta-1", "beta-3", "beta-6", "g0", "q2-1-0-0", "q2-1-0-1"],
)
def test_catalog_classification(name):
    example = get_example(name)
    report = classify(example.metric, example.policy())
    assert (report.dim_J1, report.dim_J2) == example.expected


@pytest.mark.parametrize("name", ["q2-4-0-0", "q2-quarter-1-1", "q2-2-0-0", "generic-liouville", "nonkilling"])
def test_catalog_classification_high_order(name):
    example = get_example(name)
    report = classify(example.metric, example.policy(samples=5))
    assert (report.dim_J1, report.dim_J2) == example.expected


def test_trace_records_witnesses(g0, exact_policy):
    report = classify(g0, exact_policy)
    first = report.trace[0]
    assert first.condition == "I3 = 0"
    assert first.state is TriState.NONZERO
    assert "I3 = 0" in report.witnesses
    assert report.to_dict()["dim_J2"] == 4
    assert "admissible samples" in report.confidence


def test_space_form_short_circuits(sphere):
    report = classify(sphere, get_example("sphere").policy())
    assert [step.condition for step in report.trace] == ["I3 = 0"]
    assert report.notes == ("constant curvature: space form",)


def test_exact_and_float_modes_agree(g0, exact_policy, float_policy):
    exact = classify(g0, exact_policy)
    approximate = classify(g0, float_policy)
    assert (exact.dim_J1, exact.dim_J2) == (approximate.dim_J1, approximate.dim_J2)


def test_classification_survives_affine_change(g0, exact_policy):
    shift = AffineMap(2, 1, 1, -3)
    pulled = shift.pull_back(g0)
    report = classify(pulled, shift.pull_back_policy(exact_policy))
    assert (report.dim_J1, report.dim_J2) == (1, 4)


def test_killing_dimension(flat, g0, liouville, exact_policy):
    assert killing_dimension(flat, exact_policy) == 3
    assert killing_dimension(g0, exact_policy) == 1
    assert killing_dimension(liouville, exact_policy) == 0


def test_undecided_zero_test_is_inconclusive(exact_policy):
    g = Metric2D.conformal(2 + sympy.sin(x))
    with pytest.raises(InconclusiveError) as error:
        classify(g, exact_policy)
    assert error.value.exit_code == 1
    assert error.value.trace[-1]["state"] == "Undecided"


def test_laplacian_of_curvature(g0, exact_policy):
    assert laplacian_check(invariant_frame(g0, 4), exact_policy).state is TriState.ZERO


@pytest.mark.parametrize("dims", [(1, 3), (3, 4), (0, 5), (1, 1)])
def test_impossible_dimensions(dims, exact_policy):
    with pytest.raises(ValueError):
        MobilityReport(dims[0], dims[1], (), exact_policy)


@pytest.mark.parametrize("metric", ["g0", pytest.param("liouville", marks=pytest.mark.slow)])
def test_jacobian_restatements_hold(metric, request, exact_policy):
    report = classify(request.getfixturevalue(metric), exact_policy)
    jacobians = {step.condition: step.state for step in report.trace if not step.critical}
    assert jacobians["Jac(K, I3) = 2 I4b"] is TriState.ZERO
    assert jacobians["Jac(K, Laplacian K) = (I5b + I5d)/I3"] is TriState.ZERO


def test_classification_survives_flip_and_rescale(g0, exact_policy):
    for g in (g0.flipped(), g0.scaled(sympy.Rational(5, 2))):
        report = classify(g, exact_policy)
        assert (report.dim_J1, report.dim_J2) == (1, 4)


METRIC_EXAMPLES = [example.name for example in EXAMPLES if example.kind is not ExampleKind.INTEGRALS]


@pytest.mark.slow
@pytest.mark.parametrize("name", METRIC_EXAMPLES)
def test_catalog_classification_is_coordinate_free(name):
    example = get_example(name)
    policy = example.policy(samples=5)
    shift = AffineMap(2, 1, 1, -3)
    variants = [
        (example.metric.flipped(), policy),
        (example.metric.scaled(3), policy),
        (shift.pull_back(example.metric), shift.pull_back_policy(policy)),
    ]
    for g, variant_policy in variants:
        report = classify(g, variant_policy)
        assert (report.dim_J1, report.dim_J2) == example.expected


@pytest.mark.slow
@pytest.mark.parametrize("power", [1, 2, 3, 4])
@pytest.mark.parametrize("shift", [0, 1, 2, 3, 5])
def test_surfaces_of_revolution_have_even_mobility(power, shift, exact_policy):
    g = Metric2D.conformal(x**power + shift)
    report = classify(g, exact_policy)
    assert report.dim_J1 >= 1
    assert report.dim_J2 not in (3, 5)
    assert killing_dimension(g, exact_policy) >= 1
