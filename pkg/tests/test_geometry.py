import pytest
import sympy

from geoint.errors import DegenerateError, InputError, UnsupportedError
from geoint.expr import coordinate, evaluate
from geoint.geometry import (
    AffineMap,
    Metric2D,
    Signature,
    christoffel,
    gauss_curvature,
    grad,
    iterated_covariant_derivative,
    iterated_covariant_derivatives,
    jacobian_invariant,
    laplacian,
    sgrad,
)

x, y = coordinate("x"), coordinate("y")


def vanishes(e):
    return sympy.simplify(e) == 0


def test_curvature_of_space_forms(flat, sphere):
    assert gauss_curvature(flat) == 0
    assert gauss_curvature(sphere) == 1
    assert vanishes(gauss_curvature(Metric2D.conformal(sympy.exp(x))))


def test_curvature_of_g0(g0):
    assert vanishes(gauss_curvature(g0) - 1 / (2 * x**3))


def test_curvature_ignores_coordinate_choice():
    # the flat metric in polar coordinates
    polar = Metric2D(1, 0, x**2)
    assert vanishes(gauss_curvature(polar))


def test_christoffel_symbols(g0):
    gamma = christoffel(g0)
    assert gamma.is_symmetric()
    assert vanishes(gamma[(0, 0, 0)] - 1 / (2 * x))
    assert vanishes(gamma[(0, 1, 1)] + 1 / (2 * x))
    assert vanishes(gamma[(1, 0, 1)] - 1 / (2 * x))
    assert gamma[(1, 1, 1)] == 0
    assert len(gamma.independent()) == 6


def test_christoffel_of_exponential_factor():
    gamma = christoffel(Metric2D.conformal(sympy.exp(x * y)))
    assert vanishes(gamma[(0, 0, 0)] - y / 2)
    assert vanishes(gamma[(0, 1, 1)] + y / 2)
    assert vanishes(gamma[(0, 0, 1)] - x / 2)


def test_grad_and_sgrad_are_orthogonal():
    g = Metric2D(2 + x**2, x, 1 + y**2)
    f = x**2 + y
    assert vanishes(g.inner(grad(g, f), sgrad(g, f)))
    assert vanishes(g.inner(grad(g, f), grad(g, f)) - g.inner(sgrad(g, f), sgrad(g, f)))


def test_sgrad_orientation(flat):
    assert tuple(sgrad(flat, x)) == (0, 1)
    assert tuple(sgrad(flat.flipped(), x)) == (0, -1)


def test_sgrad_needs_riemannian_signature():
    lorentzian = Metric2D(1, 0, -1, signature=Signature.LORENTZIAN)
    with pytest.raises(UnsupportedError):
        sgrad(lorentzian, x)


def test_laplacian(flat):
    assert laplacian(flat, x**2 + y**2) == 4
    conformal = Metric2D.conformal(sympy.exp(x))
    assert vanishes(laplacian(conformal, x * y**2) - 2 * x * sympy.exp(-x))


def test_covariant_derivatives_flat(flat):
    third = iterated_covariant_derivative(flat, x**3 + x * y, 3)
    assert third.valence == 3
    assert third[(0, 0, 0)] == 6
    assert third[(0, 1, 1)] == 0


def test_hessian_is_symmetric(g0):
    tower = iterated_covariant_derivatives(g0, x**2 * y + y**3, 3)
    assert [t.valence for t in tower] == [1, 2, 3]
    assert tower[1].is_fully_symmetric()
    assert tower[2].is_symmetric((1, 2))


def test_covariant_tower_needs_positive_valence(flat):
    with pytest.raises(InputError):
        iterated_covariant_derivatives(flat, x, 0)


def test_jacobian_needs_nonconstant_curvature(flat):
    with pytest.raises(DegenerateError):
        jacobian_invariant(flat, x, y)


def test_jacobian_of_curvature_with_itself_vanishes(g0):
    K = gauss_curvature(g0)
    assert vanishes(jacobian_invariant(g0, K, K))


def test_validate_rejects_bad_metrics(exact_policy):
    with pytest.raises(InputError):
        Metric2D(1, 1, 1).validate(exact_policy)
    with pytest.raises(InputError):
        Metric2D(-1, 0, 1).validate(exact_policy)
    with pytest.raises(InputError):
        Metric2D(coordinate("a"), 0, 1).validate(exact_policy)
    Metric2D(1, 0, -1, signature="lorentzian").validate(exact_policy)


def test_metric_construction_checks():
    with pytest.raises(InputError):
        Metric2D(1, 0, 1, orientation=2)
    with pytest.raises(InputError):
        Metric2D(1, 0, 1, coordinates=("x", "x"))
    with pytest.raises(InputError):
        Metric2D(1, 0, 1).scaled(0)


def test_affine_pull_back(sphere, exact_policy):
    reflection = AffineMap(-1, 0, 1, 0)
    assert reflection.pull_back(sphere).orientation == -1
    assert AffineMap(2, 1, 3, 0).pull_back(sphere).orientation == 1

    shift = AffineMap(2, 1, 1, -3)
    policy = shift.pull_back_policy(exact_policy)
    assert policy.interval("x") == (0, sympy.Rational(1, 2))
    assert policy.interval("y") == (4, 5)
    assert shift.image({"x": 0, "y": 4}) == {"x": 1, "y": 1}

    g = Metric2D.conformal(x)
    pulled = shift.pull_back(g)
    assert vanishes(pulled.g11 - 4 * (2 * x + 1))
    assert vanishes(pulled.g22 - (2 * x + 1))


def test_affine_map_must_be_invertible():
    with pytest.raises(InputError):
        AffineMap(0, 1, 1, 0)


def test_rotation_preserves_length():
    g = Metric2D.conformal(sympy.exp(x))
    f = x * y
    assert vanishes(g.inner(sgrad(g, f), sgrad(g, f)) - g.inner(grad(g, f), grad(g, f)))


def test_second_differential_is_symmetric_on_generated_metrics():
    metrics = [
        Metric2D(2 + x**2, x * y, 3 + y**2),
        Metric2D(1 + x**2 * y, 0, x + y**3),
        Metric2D.conformal(sympy.exp(x - y**2)),
    ]
    for g in metrics:
        hessian = iterated_covariant_derivative(g, x**3 * y + y**2, 2)
        assert vanishes(hessian[(0, 1)] - hessian[(1, 0)])


def test_flat_third_differential_is_fully_symmetric(flat):
    third = iterated_covariant_derivative(flat, x**2 * y**3, 3)
    assert third.is_fully_symmetric()
    assert third[(0, 1, 1)] == 12 * x * y


def test_constant_rescale_divides_curvature():
    g = Metric2D(2 + x**2, x, 1 + y**2)
    assert vanishes(gauss_curvature(g.scaled(3)) - gauss_curvature(g) / 3)


def test_curvature_is_preserved_by_pull_back():
    g = Metric2D.conformal(x**2 + y**2 + 1)
    shift = AffineMap(2, 1, 3, -1)
    pulled = gauss_curvature(shift.pull_back(g))
    original = gauss_curvature(g)
    for point in ({"x": 0, "y": 1}, {"x": sympy.Rational(1, 2), "y": 2}):
        assert evaluate(pulled, point) == evaluate(original, shift.image(point))
