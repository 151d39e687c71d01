"""
Metric geometry in two dimensions
Levi-Civita connection, Gaussian curvature, gradients, iterated covariant
derivatives, Laplacian and the normalised Jacobian.
"""

import itertools
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, Optional, Sequence, Tuple

import sympy

from geoint.errors import DegenerateError, InputError, UnsupportedError
from geoint.expr import (
    EvaluationMode,
    Expr,
    ExprError,
    TriState,
    ZeroPolicy,
    coordinate,
    differentiate,
    evaluate,
    simplify,
    to_text,
    zero_test_expr,
)
from geoint.utils.logging import get_logger

logger = get_logger()

Index = Tuple[int, ...]


class Signature(str, Enum):
    RIEMANNIAN = "riemannian"
    LORENTZIAN = "lorentzian"


def _positive_branch_sqrt(e: Expr, symbols: Sequence[sympy.Symbol]) -> Expr:
    """Square root taken with the coordinates treated as positive, so sqrt(x^2) is x."""
    positive = {s: sympy.Dummy(s.name, positive=True) for s in symbols}
    root = sympy.sqrt(e.subs(positive))
    return root.subs({v: k for k, v in positive.items()})


@dataclass(frozen=True)
class Metric2D:
    g11: Expr
    g12: Expr
    g22: Expr
    coordinates: Tuple[str, str] = ("x", "y")
    orientation: int = 1
    signature: Signature = Signature.RIEMANNIAN

    def __post_init__(self):
        for name in ("g11", "g12", "g22"):
            object.__setattr__(self, name, sympy.sympify(getattr(self, name)))
        object.__setattr__(self, "coordinates", tuple(self.coordinates))
        object.__setattr__(self, "signature", Signature(self.signature))
        if self.orientation not in (1, -1):
            raise InputError(f"orientation must be 1 or -1, got {self.orientation}")
        if len(self.coordinates) != 2 or self.coordinates[0] == self.coordinates[1]:
            raise InputError(f"need two distinct coordinate names, got {self.coordinates}")

    @classmethod
    def conformal(cls, factor: Expr, coordinates: Tuple[str, str] = ("x", "y"), **kwargs) -> "Metric2D":
        """factor * (dx^2 + dy^2)"""
        return cls(factor, sympy.Integer(0), factor, coordinates, **kwargs)

    @property
    def symbols(self) -> Tuple[sympy.Symbol, sympy.Symbol]:
        return coordinate(self.coordinates[0]), coordinate(self.coordinates[1])

    @property
    def matrix(self) -> sympy.Matrix:
        return sympy.Matrix([[self.g11, self.g12], [self.g12, self.g22]])

    @cached_property
    def det(self) -> Expr:
        return simplify(self.g11 * self.g22 - self.g12**2)

    @cached_property
    def inverse(self) -> sympy.Matrix:
        det = self.det
        return sympy.Matrix(
            [
                [simplify(self.g22 / det), simplify(-self.g12 / det)],
                [simplify(-self.g12 / det), simplify(self.g11 / det)],
            ]
        )

    @cached_property
    def sqrt_det(self) -> Expr:
        return _positive_branch_sqrt(self.det, self.symbols)

    def component(self, i: int, j: int) -> Expr:
        return self.matrix[i, j]

    def inner(self, u: "VectorField", v: "VectorField") -> Expr:
        return sum(
            (self.component(i, j) * u[i] * v[j] for i in range(2) for j in range(2)),
            sympy.Integer(0),
        )

    def flipped(self) -> "Metric2D":
        return Metric2D(self.g11, self.g12, self.g22, self.coordinates, -self.orientation, self.signature)

    def scaled(self, c) -> "Metric2D":
        c = sympy.Rational(c)
        if c <= 0:
            raise InputError(f"rescale factor must be positive, got {c}")
        return Metric2D(
            c * self.g11, c * self.g12, c * self.g22, self.coordinates, self.orientation, self.signature
        )

    def pulled_back(self, map_: "AffineMap") -> "Metric2D":
        return map_.pull_back(self)

    def validate(self, policy: ZeroPolicy) -> None:
        """Reject degenerate metrics and signature mismatches on the domain box."""
        names = set(self.coordinates)
        free = {s.name for s in self.matrix.free_symbols}
        if not free <= names:
            raise InputError(f"metric has unassigned symbols {sorted(free - names)}")
        if self.det == 0 or zero_test_expr(self.det, policy, "det g").state is TriState.ZERO:
            raise InputError("metric is degenerate: det g vanishes identically")

        checked = 0
        for point in itertools.islice(policy.points(), policy.samples * 4):
            if checked >= policy.samples:
                break
            try:
                det = evaluate(self.det, point, EvaluationMode.FLOAT, 64).value
                g11 = evaluate(self.g11, point, EvaluationMode.FLOAT, 64).value
            except ExprError:
                continue
            checked += 1
            if self.signature is Signature.RIEMANNIAN and not (det.real > 0 and g11.real > 0):
                raise InputError(
                    f"metric is not positive definite at {_point_text(point)}"
                )
            if self.signature is Signature.LORENTZIAN and not det.real < 0:
                raise InputError(f"metric is not Lorentzian at {_point_text(point)}")

    def to_dict(self) -> Dict[str, str]:
        return {
            "coordinates": ", ".join(self.coordinates),
            "g11": to_text(self.g11),
            "g12": to_text(self.g12),
            "g22": to_text(self.g22),
            "orientation": str(self.orientation),
            "signature": self.signature.value,
        }


def _point_text(point) -> str:
    return ", ".join(f"{k}={v}" for k, v in point.items())


@dataclass(frozen=True)
class AffineMap:
    """(x', y') -> (a*x' + b, c*y' + d)"""

    a: sympy.Rational
    b: sympy.Rational
    c: sympy.Rational
    d: sympy.Rational

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, sympy.Rational(getattr(self, name)))
        if self.a == 0 or self.c == 0:
            raise InputError("affine map must be invertible")

    def substitution(self, coordinates: Tuple[str, str]) -> Dict[sympy.Symbol, Expr]:
        x, y = coordinate(coordinates[0]), coordinate(coordinates[1])
        return {x: self.a * x + self.b, y: self.c * y + self.d}

    def pull_back(self, g: Metric2D) -> Metric2D:
        sub = self.substitution(g.coordinates)
        orientation = g.orientation * (1 if self.a * self.c > 0 else -1)
        return Metric2D(
            self.a**2 * g.g11.subs(sub, simultaneous=True),
            self.a * self.c * g.g12.subs(sub, simultaneous=True),
            self.c**2 * g.g22.subs(sub, simultaneous=True),
            g.coordinates,
            orientation,
            g.signature,
        )

    def pull_back_policy(self, policy: ZeroPolicy) -> ZeroPolicy:
        """Box of preimage points, so samples correspond one to one."""
        first, second = policy.coordinates
        (xl, xh), (yl, yh) = policy.interval(first), policy.interval(second)
        xs = sorted(((xl - self.b) / self.a, (xh - self.b) / self.a))
        ys = sorted(((yl - self.d) / self.c, (yh - self.d) / self.c))
        return policy.replace(box=((first, xs[0], xs[1]), (second, ys[0], ys[1])))

    def image(self, point, coordinates: Tuple[str, str] = ("x", "y")):
        first, second = coordinates
        return {
            first: self.a * point[first] + self.b,
            second: self.c * point[second] + self.d,
        }


@dataclass(frozen=True)
class VectorField:
    x: Expr
    y: Expr

    def __getitem__(self, i: int) -> Expr:
        return (self.x, self.y)[i]

    def __iter__(self):
        return iter((self.x, self.y))

    def apply(self, f: Expr, symbols: Tuple[sympy.Symbol, sympy.Symbol]) -> Expr:
        """Lie derivative of a scalar along the field."""
        return self.x * differentiate(f, symbols[0]) + self.y * differentiate(f, symbols[1])

    def scaled(self, factor: Expr) -> "VectorField":
        return VectorField(factor * self.x, factor * self.y)


@dataclass(frozen=True)
class ChristoffelSymbols:
    """Gamma^k_ij keyed by (k, i, j), all eight entries stored"""

    components: Dict[Index, Expr]

    def __getitem__(self, key: Index) -> Expr:
        return self.components[key]

    def is_symmetric(self) -> bool:
        return all(
            simplify(self.components[(k, 0, 1)] - self.components[(k, 1, 0)]) == 0 for k in range(2)
        )

    def independent(self) -> Dict[Index, Expr]:
        return {key: value for key, value in self.components.items() if key[1] <= key[2]}


@dataclass(frozen=True)
class CovariantTensor:
    """Components keyed by index tuples; slot 0 holds the newest derivative."""

    valence: int
    components: Dict[Index, Expr] = field(default_factory=dict)

    def __getitem__(self, index: Index) -> Expr:
        return self.components[tuple(index)]

    def contract(self, vectors: Sequence[VectorField]) -> Expr:
        if len(vectors) != self.valence:
            raise ValueError(f"need {self.valence} vectors, got {len(vectors)}")
        total = sympy.Integer(0)
        for index, value in self.components.items():
            term = value
            for slot, i in enumerate(index):
                term = term * vectors[slot][i]
            total += term
        return total

    def is_symmetric(self, slots: Tuple[int, int]) -> bool:
        a, b = slots
        for index, value in self.components.items():
            swapped = list(index)
            swapped[a], swapped[b] = swapped[b], swapped[a]
            if simplify(value - self.components[tuple(swapped)]) != 0:
                return False
        return True

    def is_fully_symmetric(self) -> bool:
        return all(
            self.is_symmetric((a, b)) for a, b in itertools.combinations(range(self.valence), 2)
        )


def christoffel(g: Metric2D) -> ChristoffelSymbols:
    x = g.symbols
    inv = g.inverse
    d = [[[differentiate(g.component(m, j), x[i]) for j in range(2)] for m in range(2)] for i in range(2)]
    components = {}
    for k, i, j in itertools.product(range(2), repeat=3):
        value = sum(
            inv[k, m] * (d[i][m][j] + d[j][m][i] - d[m][i][j]) for m in range(2)
        )
        components[(k, i, j)] = simplify(value / 2)
    return ChristoffelSymbols(components)


def gauss_curvature(g: Metric2D) -> Expr:
    """Brioschi formula; valid in any coordinates."""
    u, v = g.symbols
    E, F, G = g.g11, g.g12, g.g22
    E_u, E_v = differentiate(E, u), differentiate(E, v)
    F_u, F_v = differentiate(F, u), differentiate(F, v)
    G_u, G_v = differentiate(G, u), differentiate(G, v)
    E_vv = differentiate(E, v, 2)
    G_uu = differentiate(G, u, 2)
    F_uv = differentiate(F_u, v)

    first = sympy.Matrix(
        [
            [-E_vv / 2 + F_uv - G_uu / 2, E_u / 2, F_u - E_v / 2],
            [F_v - G_u / 2, E, F],
            [G_v / 2, F, G],
        ]
    )
    second = sympy.Matrix(
        [
            [0, E_v / 2, G_u / 2],
            [E_v / 2, E, F],
            [G_u / 2, F, G],
        ]
    )
    det = E * G - F**2
    return simplify((first.det(method="berkowitz") - second.det(method="berkowitz")) / det**2)


def grad(g: Metric2D, f: Expr) -> VectorField:
    x, y = g.symbols
    fx, fy = differentiate(f, x), differentiate(f, y)
    inv = g.inverse
    return VectorField(inv[0, 0] * fx + inv[0, 1] * fy, inv[1, 0] * fx + inv[1, 1] * fy)


def sgrad(g: Metric2D, f: Expr) -> VectorField:
    """grad f rotated by a quarter turn in the metric's orientation."""
    if g.signature is not Signature.RIEMANNIAN:
        raise UnsupportedError("sgrad is only defined for Riemannian metrics")
    x, y = g.symbols
    factor = g.orientation / g.sqrt_det
    return VectorField(-differentiate(f, y) * factor, differentiate(f, x) * factor)


def covariant_derivative(g: Metric2D, tensor: CovariantTensor, gamma: Optional[ChristoffelSymbols] = None) -> CovariantTensor:
    """
    d_nabla of a covariant tensor whose last two slots are symmetric
    (valence >= 2) or which is a differential (valence 1).
    """
    gamma = gamma or christoffel(g)
    symbols = g.symbols
    components: Dict[Index, Expr] = {}
    for index in itertools.product(range(2), repeat=tensor.valence + 1):
        i, rest = index[0], index[1:]
        if len(index) >= 3 and index[-2] > index[-1]:
            continue
        value = differentiate(tensor[rest], symbols[i])
        for slot, j in enumerate(rest):
            for m in range(2):
                lowered = list(rest)
                lowered[slot] = m
                value -= gamma[(m, i, j)] * tensor[tuple(lowered)]
        components[index] = simplify(value)
    for index in itertools.product(range(2), repeat=tensor.valence + 1):
        if index not in components:
            components[index] = components[index[:-2] + (index[-1], index[-2])]
    return CovariantTensor(tensor.valence + 1, components)


def iterated_covariant_derivatives(g: Metric2D, f: Expr, l: int) -> Tuple[CovariantTensor, ...]:
    """d_nabla f, d_nabla^2 f, ..., d_nabla^l f"""
    if l < 1:
        raise InputError(f"valence must be positive, got {l}")
    gamma = christoffel(g)
    symbols = g.symbols
    tower = [CovariantTensor(1, {(i,): differentiate(f, symbols[i]) for i in range(2)})]
    while len(tower) < l:
        tower.append(covariant_derivative(g, tower[-1], gamma))
    return tuple(tower)


def iterated_covariant_derivative(g: Metric2D, f: Expr, l: int) -> CovariantTensor:
    return iterated_covariant_derivatives(g, f, l)[-1]


def laplacian(g: Metric2D, f: Expr) -> Expr:
    hessian = iterated_covariant_derivative(g, f, 2)
    inv = g.inverse
    return simplify(sum(inv[i, j] * hessian[(i, j)] for i in range(2) for j in range(2)))


def jacobian_invariant(g: Metric2D, F: Expr, G: Expr, curvature: Optional[Expr] = None) -> Expr:
    """dF ^ dG evaluated on (grad K, sgrad K), normalised by |grad K|^2."""
    K = gauss_curvature(g) if curvature is None else curvature
    gk, sk = grad(g, K), sgrad(g, K)
    norm = simplify(gk.apply(K, g.symbols))
    if norm == 0:
        raise DegenerateError("dK vanishes identically; the Jacobian is undefined")
    symbols = g.symbols
    return (gk.apply(F, symbols) * sk.apply(G, symbols) - sk.apply(F, symbols) * gk.apply(G, symbols)) / norm
