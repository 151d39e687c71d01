import random

import mpmath
import pytest
import sympy

from geoint.errors import InputError
from geoint.expr import (
    EvaluationMode,
    ExpressionSyntaxError,
    InexactEvaluationError,
    Scalar,
    SingularPointError,
    TriState,
    UnknownIdentifierError,
    ZeroDenominatorError,
    ZeroPolicy,
    coordinate,
    differentiate,
    evaluate,
    parameter,
    parse,
    simplify,
    to_text,
    zero_test_expr,
)

x, y = coordinate("x"), coordinate("y")
b = parameter("b")


def test_parse_operators_and_functions():
    assert parse("x^2 + 3*y") == x**2 + 3 * y
    assert parse("exp(b*x)/2", parameters=["b"]) == sympy.exp(b * x) / 2
    assert parse("0.5*x") == sympy.Rational(1, 2) * x
    assert parse("i^2") == -1


def test_unknown_identifier_position():
    with pytest.raises(UnknownIdentifierError) as error:
        parse("x + z")
    assert error.value.name == "z"
    assert error.value.position == 4

    with pytest.raises(UnknownIdentifierError) as error:
        parse("  x + z")
    assert error.value.position == 6


@pytest.mark.parametrize("text", ["tan(x)", "exp(x, y)", "x +", "exp", "x == y", ""])
def test_syntax_errors(text):
    with pytest.raises(ExpressionSyntaxError):
        parse(text)


def test_literal_zero_denominator():
    with pytest.raises(ZeroDenominatorError):
        parse("1/0")


def test_printed_text_parses_back():
    e = sympy.exp(x) * y / 3 + sympy.sqrt(x) - sympy.I * x**2
    assert parse(to_text(e)) == e


def test_differentiate():
    assert differentiate(sympy.exp(b * x), x, 3) == b**3 * sympy.exp(b * x)
    assert differentiate(x**2 * y, y, 0) == x**2 * y
    with pytest.raises(ValueError):
        differentiate(x, x, -1)


def test_exact_evaluation():
    assert evaluate(sympy.exp(b * x) * x**2, {"x": 0, "b": 3}).value == 0
    polynomial = sympy.Rational(1, 64) * b**6 * (b - 1) * (b - 6) * (2 + b) ** 6
    assert evaluate(polynomial, {b: 1}).value == 0
    assert evaluate((1 + sympy.I * x) * (1 - sympy.I * x), {"x": 1}).value == 2
    assert evaluate(x / y, {"x": 1, "y": 3}).value == sympy.Rational(1, 3)


def test_exact_evaluation_failures():
    with pytest.raises(SingularPointError):
        evaluate(1 / (x - 1), {"x": 1})
    with pytest.raises(InexactEvaluationError):
        evaluate(sympy.sqrt(x), {"x": 2})
    with pytest.raises(InexactEvaluationError):
        evaluate(sympy.exp(x), {"x": 1})


def test_float_evaluation():
    value = evaluate(sympy.exp(x), {"x": 1}, EvaluationMode.FLOAT, 128)
    assert not value.is_exact
    assert abs(value.as_mpmath() - mpmath.e) < mpmath.mpf(10) ** -30


def test_scalar_relative_zero():
    big = Scalar.approx(mpmath.mpf(10) ** -35, 128, mpmath.mpf(10) ** 10)
    assert big.is_zero(1e-30)
    assert not Scalar.approx(mpmath.mpf(10) ** -35, 128).is_zero(1e-30)
    assert Scalar.exact(0).is_zero()


def test_zero_test_identity(exact_policy):
    result = zero_test_expr((x + y) ** 2 - x**2 - 2 * x * y - y**2, exact_policy, "square")
    assert result.state is TriState.ZERO
    assert result.admissible == exact_policy.samples
    assert result.witness is None


def test_zero_test_witness(exact_policy):
    result = zero_test_expr(x - y, exact_policy)
    assert result.state is TriState.NONZERO
    assert result.witness["x"] != result.witness["y"]
    assert result.to_dict()["witness"] == result.witness_text()


def test_zero_test_is_deterministic(exact_policy):
    first = zero_test_expr(x**2 - y, exact_policy)
    second = zero_test_expr(x**2 - y, exact_policy)
    assert first.witness == second.witness


def test_transcendental_exact_is_undecided(exact_policy):
    result = zero_test_expr(sympy.sin(x), exact_policy)
    assert result.state is TriState.UNDECIDED
    assert result.admissible == 0
    assert result.rejected == exact_policy.max_rejections


def test_transcendental_float(float_policy):
    identity = sympy.sin(x) ** 2 + sympy.cos(x) ** 2 - 1
    assert zero_test_expr(identity, float_policy).state is TriState.ZERO
    assert zero_test_expr(sympy.sin(x) - x, float_policy).state is TriState.NONZERO


def test_singular_samples_are_redrawn():
    policy = ZeroPolicy(samples=5, box=(("x", 1, 2), ("y", 1, 2)), denominator=2)
    # x = 1 is a pole; the remaining admissible points decide
    result = zero_test_expr((x**2 - 1) / (x - 1) - x - 1, policy)
    assert result.state is TriState.ZERO
    assert result.admissible == 5


def test_sample_points_stay_in_box():
    policy = ZeroPolicy(box=(("x", 0, 0), ("y", 1, 2)), denominator=8, seed=3)
    points = policy.points()
    for _ in range(20):
        point = next(points)
        assert point["x"] == 0
        assert 1 <= point["y"] <= 2
        assert (point["y"] * 8).is_Integer


@pytest.mark.parametrize(
    "settings",
    [
        {"samples": 0},
        {"box": (("x", 1, 1), ("y", 2, 2))},
        {"box": (("x", 2, 1), ("y", 1, 2))},
        {"mode": EvaluationMode.FLOAT, "tolerance": 0},
    ],
)
def test_invalid_policy(settings):
    with pytest.raises(InputError):
        ZeroPolicy(**settings)


def test_unassigned_symbol_is_rejected(exact_policy):
    with pytest.raises(ValueError):
        zero_test_expr(b * x, exact_policy)


def random_tree(rng, depth):
    if depth == 0:
        return rng.choice([x, y, sympy.Rational(rng.randint(1, 5), rng.randint(1, 3))])
    kind = rng.choice(["add", "mul", "sin", "exp", "pow"])
    if kind == "add":
        return random_tree(rng, depth - 1) + random_tree(rng, depth - 1)
    if kind == "mul":
        return random_tree(rng, depth - 1) * random_tree(rng, depth - 1)
    if kind == "pow":
        return random_tree(rng, depth - 1) ** 2
    function = sympy.sin if kind == "sin" else sympy.exp
    return function(random_tree(rng, depth - 1) / 4)


def central_difference(e, point, step):
    shifted = [evaluate(e, {"x": point["x"] + sign * step, "y": point["y"]}, EvaluationMode.FLOAT) for sign in (1, -1)]
    return (shifted[0].as_mpmath() - shifted[1].as_mpmath()) / (2 * step)


@pytest.mark.parametrize("seed", range(6))
def test_derivatives_match_divided_differences(seed):
    rng = random.Random(seed)
    f, g = random_tree(rng, 3), random_tree(rng, 3)
    point = {"x": sympy.Rational(rng.randint(5, 10), 10), "y": sympy.Rational(rng.randint(5, 10), 10)}
    step = sympy.Rational(1, 10**8)
    with mpmath.workprec(256):
        for e in (f + g, 3 * f, f * g):
            numeric = central_difference(e, point, step)
            symbolic = evaluate(differentiate(e, x), point, EvaluationMode.FLOAT).as_mpmath()
            assert abs(numeric - symbolic) <= mpmath.mpf(10) ** -6 * max(1, abs(symbolic))
        product_rule = differentiate(f, x) * g + f * differentiate(g, x)
        assert abs(
            evaluate(product_rule, point, EvaluationMode.FLOAT).as_mpmath()
            - evaluate(differentiate(f * g, x), point, EvaluationMode.FLOAT).as_mpmath()
        ) <= mpmath.mpf(10) ** -60 * max(1, abs(numeric))


def random_polynomial(rng):
    return sum(rng.randint(-3, 3) * x ** rng.randint(0, 2) * y ** rng.randint(0, 2) for _ in range(3)) + x**3 + 1


@pytest.mark.parametrize("seed", range(8))
def test_rational_forms_are_canonical(seed):
    rng = random.Random(seed)
    p, q, r = (random_polynomial(rng) for _ in range(3))
    unreduced = sympy.expand(p * q) / sympy.expand(q * r)
    assert simplify(unreduced) == simplify(p / r)
    assert simplify(sympy.expand((p + q) ** 2) - p**2 - 2 * p * q - q**2) == 0


@pytest.mark.parametrize("seed", range(4))
def test_evaluation_ignores_simplification(seed):
    rng = random.Random(seed)
    p, r = random_polynomial(rng), random_polynomial(rng)
    derivative = differentiate(p / r, x)
    point = {"x": sympy.Rational(7, 5), "y": sympy.Rational(9, 7)}
    assert evaluate(simplify(derivative), point) == evaluate(derivative, point)
