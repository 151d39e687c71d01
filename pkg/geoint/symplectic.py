"""
Momenta polynomials on the cotangent bundle
Hamiltonian of a metric, canonical Poisson bracket, first-integral checks,
the linear PDE system for degree-n integrals and its multi-bracket for n = 1.
"""

import itertools
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import sympy
from sympy.combinatorics import Permutation

from geoint.errors import InputError, UnsupportedError
from geoint.expr import (
    Expr,
    TriState,
    ZeroPolicy,
    ZeroTestResult,
    coordinate,
    differentiate,
    simplify,
    to_text,
    zero_test_expr,
)
from geoint.geometry import Metric2D

Exponent = Tuple[int, int]


def momentum(name: str) -> sympy.Symbol:
    return sympy.Symbol(f"p_{name}", real=True)


@dataclass(frozen=True)
class MomentaPolynomial:
    """Homogeneous polynomial in (p_x, p_y); coefficients keyed by (power of p_x, power of p_y)"""

    degree: int
    coefficients: Dict[Exponent, Expr]
    coordinates: Tuple[str, str] = ("x", "y")

    def __post_init__(self):
        if self.degree < 0:
            raise InputError(f"degree must be nonnegative, got {self.degree}")
        cleaned = {}
        for (i, j), value in self.coefficients.items():
            if i < 0 or j < 0 or i + j != self.degree:
                raise InputError(f"monomial p^{i} q^{j} does not have degree {self.degree}")
            value = sympy.sympify(value)
            if value != 0:
                cleaned[(i, j)] = value
        object.__setattr__(self, "coefficients", cleaned)
        object.__setattr__(self, "coordinates", tuple(self.coordinates))

    @classmethod
    def zero(cls, degree: int = 0, coordinates: Tuple[str, str] = ("x", "y")) -> "MomentaPolynomial":
        return cls(degree, {}, coordinates)

    @classmethod
    def from_function(cls, f: Expr, coordinates: Tuple[str, str] = ("x", "y")) -> "MomentaPolynomial":
        return cls(0, {(0, 0): f}, coordinates)

    @classmethod
    def from_expr(cls, e: Expr, coordinates: Tuple[str, str] = ("x", "y")) -> "MomentaPolynomial":
        """Split an expression polynomial in the momenta; fails unless homogeneous."""
        px, py = momentum(coordinates[0]), momentum(coordinates[1])
        e = sympy.expand(sympy.sympify(e), mul=True, multinomial=True, power_exp=False, log=False)
        collected: Dict[Exponent, Expr] = {}
        for term in sympy.Add.make_args(e):
            powers = term.as_powers_dict()
            i, j = int(powers.get(px, 0)), int(powers.get(py, 0))
            rest = term / (px**i * py**j)
            if rest.has(px, py):
                raise InputError(f"{to_text(e)} is not polynomial in the momenta")
            collected[(i, j)] = collected.get((i, j), sympy.Integer(0)) + rest
        collected = {key: simplify(value) for key, value in collected.items()}
        collected = {key: value for key, value in collected.items() if value != 0}
        degrees = {i + j for i, j in collected}
        if len(degrees) > 1:
            raise InputError(f"{to_text(e)} is not homogeneous in the momenta")
        degree = degrees.pop() if degrees else 0
        return cls(degree, collected, coordinates)

    @property
    def momenta(self) -> Tuple[sympy.Symbol, sympy.Symbol]:
        return momentum(self.coordinates[0]), momentum(self.coordinates[1])

    @property
    def symbols(self) -> Tuple[sympy.Symbol, sympy.Symbol]:
        return coordinate(self.coordinates[0]), coordinate(self.coordinates[1])

    def coefficient(self, i: int, j: int) -> Expr:
        return self.coefficients.get((i, j), sympy.Integer(0))

    def is_zero(self) -> bool:
        return not self.coefficients

    def to_expr(self) -> Expr:
        px, py = self.momenta
        return sum(
            (value * px**i * py**j for (i, j), value in self.coefficients.items()), sympy.Integer(0)
        )

    def simplified(self) -> "MomentaPolynomial":
        return MomentaPolynomial(
            self.degree, {key: simplify(value) for key, value in self.coefficients.items()}, self.coordinates
        )

    def _check_compatible(self, other: "MomentaPolynomial") -> None:
        if self.coordinates != other.coordinates:
            raise InputError("momenta polynomials over different coordinates")

    def __add__(self, other: "MomentaPolynomial") -> "MomentaPolynomial":
        self._check_compatible(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.degree != other.degree:
            raise InputError(f"cannot add degrees {self.degree} and {other.degree}")
        keys = set(self.coefficients) | set(other.coefficients)
        return MomentaPolynomial(
            self.degree,
            {key: simplify(self.coefficient(*key) + other.coefficient(*key)) for key in keys},
            self.coordinates,
        )

    def __neg__(self) -> "MomentaPolynomial":
        return self.scaled(-1)

    def __sub__(self, other: "MomentaPolynomial") -> "MomentaPolynomial":
        return self + (-other)

    def __mul__(self, other: "MomentaPolynomial") -> "MomentaPolynomial":
        self._check_compatible(other)
        product: Dict[Exponent, Expr] = {}
        for (i, j), a in self.coefficients.items():
            for (k, l), b in other.coefficients.items():
                key = (i + k, j + l)
                product[key] = product.get(key, sympy.Integer(0)) + a * b
        return MomentaPolynomial(
            self.degree + other.degree,
            {key: simplify(value) for key, value in product.items()},
            self.coordinates,
        )

    def __pow__(self, n: int) -> "MomentaPolynomial":
        result = MomentaPolynomial.from_function(sympy.Integer(1), self.coordinates)
        for _ in range(n):
            result = result * self
        return result

    def scaled(self, factor: Expr) -> "MomentaPolynomial":
        factor = sympy.sympify(factor)
        return MomentaPolynomial(
            self.degree,
            {key: simplify(factor * value) for key, value in self.coefficients.items()},
            self.coordinates,
        )

    def to_entries(self) -> List[Tuple[int, int, str]]:
        return [(i, j, to_text(value)) for (i, j), value in sorted(self.coefficients.items(), reverse=True)]

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        px, py = (str(p) for p in self.momenta)
        parts = []
        for i, j, text in self.to_entries():
            monomial = "*".join(
                f"{name}^{power}" if power > 1 else name for name, power in ((px, i), (py, j)) if power
            )
            parts.append(f"({text})*{monomial}" if monomial else f"({text})")
        return " + ".join(parts)


def hamiltonian(g: Metric2D) -> MomentaPolynomial:
    inv = g.inverse
    return MomentaPolynomial(
        2,
        {(2, 0): inv[0, 0], (1, 1): simplify(2 * inv[0, 1]), (0, 2): inv[1, 1]},
        g.coordinates,
    )


def poisson_bracket(F: MomentaPolynomial, G: MomentaPolynomial) -> MomentaPolynomial:
    """Sum over k of dF/dp_k dG/dx^k - dF/dx^k dG/dp_k."""
    F._check_compatible(G)
    f, g = F.to_expr(), G.to_expr()
    bracket = sympy.Integer(0)
    for x, p in zip(F.symbols, F.momenta):
        bracket += sympy.diff(f, p) * sympy.diff(g, x) - sympy.diff(f, x) * sympy.diff(g, p)
    degree = max(F.degree + G.degree - 1, 0)
    result = MomentaPolynomial.from_expr(bracket, F.coordinates)
    if result.is_zero():
        return MomentaPolynomial.zero(degree, F.coordinates)
    return result


@dataclass(frozen=True)
class IntegralCheck:
    state: TriState
    results: Tuple[Tuple[Exponent, ZeroTestResult], ...]

    def to_dict(self) -> Dict[str, object]:
        return {
            "state": self.state.value,
            "coefficients": {f"{i} {j}": result.to_dict() for (i, j), result in self.results},
        }


def combine_states(states: Sequence[TriState]) -> TriState:
    if TriState.NONZERO in states:
        return TriState.NONZERO
    if TriState.UNDECIDED in states:
        return TriState.UNDECIDED
    return TriState.ZERO


def check_integral(g: Metric2D, F: MomentaPolynomial, policy: ZeroPolicy) -> IntegralCheck:
    bracket = poisson_bracket(hamiltonian(g), F)
    results = tuple(
        (key, zero_test_expr(value, policy, f"{{H, F}} p^{key[0]} q^{key[1]}"))
        for key, value in sorted(bracket.coefficients.items())
    )
    return IntegralCheck(combine_states([result.state for _, result in results]), results)


def is_first_integral(g: Metric2D, F: MomentaPolynomial, policy: ZeroPolicy) -> TriState:
    return check_integral(g, F, policy).state


@dataclass(frozen=True)
class FirstOrderOperator:
    """f -> dx * f_x + dy * f_y + value * f"""

    dx: Expr
    dy: Expr
    value: Expr

    def apply(self, f: Expr, symbols: Tuple[sympy.Symbol, sympy.Symbol]) -> Expr:
        return self.dx * differentiate(f, symbols[0]) + self.dy * differentiate(f, symbols[1]) + self.value * f

    def to_dict(self) -> Dict[str, str]:
        return {"dx": to_text(self.dx), "dy": to_text(self.dy), "value": to_text(self.value)}


@dataclass(frozen=True)
class PdeSystem:
    """
    Linear first-order system {H, F} = 0 on the coefficients of a degree-n F.

    Unknown k multiplies p_x^(n-k) p_y^k; equation m is the coefficient of
    p_x^(n+1-m) p_y^m, so operators[m][k] acts on unknown k.
    """

    degree: int
    operators: Tuple[Tuple[FirstOrderOperator, ...], ...]
    coordinates: Tuple[str, str] = ("x", "y")

    @property
    def symbols(self) -> Tuple[sympy.Symbol, sympy.Symbol]:
        return coordinate(self.coordinates[0]), coordinate(self.coordinates[1])

    def apply(self, unknowns: Sequence[Expr]) -> List[Expr]:
        if len(unknowns) != self.degree + 1:
            raise InputError(f"need {self.degree + 1} unknowns, got {len(unknowns)}")
        symbols = self.symbols
        return [
            sum((op.apply(u, symbols) for op, u in zip(row, unknowns)), sympy.Integer(0))
            for row in self.operators
        ]

    def apply_to(self, F: MomentaPolynomial) -> List[Expr]:
        n = self.degree
        return self.apply([F.coefficient(n - k, k) for k in range(n + 1)])

    def to_dict(self) -> Dict[str, object]:
        return {
            "degree": self.degree,
            "equations": [[op.to_dict() for op in row] for row in self.operators],
        }


def flow_pde_system(g: Metric2D, n: int) -> PdeSystem:
    if not 1 <= n <= 5:
        raise InputError(f"PDE system degree must be between 1 and 5, got {n}")
    H = hamiltonian(g)
    h = H.to_expr()
    (x, y), (px, py) = H.symbols, H.momenta
    values = [sympy.Symbol(f"U{k}") for k in range(n + 1)]
    along_x = [sympy.Symbol(f"U{k}_x") for k in range(n + 1)]
    along_y = [sympy.Symbol(f"U{k}_y") for k in range(n + 1)]
    monomials = [px ** (n - k) * py**k for k in range(n + 1)]

    F = sum(u * m for u, m in zip(values, monomials))
    Fx = sum(u * m for u, m in zip(along_x, monomials))
    Fy = sum(u * m for u, m in zip(along_y, monomials))
    bracket = (
        sympy.diff(h, px) * Fx
        + sympy.diff(h, py) * Fy
        - sympy.diff(h, x) * sympy.diff(F, px)
        - sympy.diff(h, y) * sympy.diff(F, py)
    )
    poly = sympy.Poly(sympy.expand(bracket, power_exp=False, log=False), px, py)

    rows = []
    for m in range(n + 2):
        coefficient = poly.coeff_monomial(px ** (n + 1 - m) * py**m)
        rows.append(
            tuple(
                FirstOrderOperator(
                    simplify(sympy.diff(coefficient, along_x[k])),
                    simplify(sympy.diff(coefficient, along_y[k])),
                    simplify(sympy.diff(coefficient, values[k])),
                )
                for k in range(n + 1)
            )
        )
    return PdeSystem(n, tuple(rows), g.coordinates)


def _sign(permutation: Sequence[int]) -> int:
    return Permutation(list(permutation)).signature()


@dataclass(frozen=True)
class MultiBracket:
    """
    Alternating sum of compositions E^a_b . E^c_d . E_e over permutations,
    without reduction modulo the system.
    """

    system: PdeSystem

    def apply(self, unknowns: Sequence[Expr]) -> Expr:
        system = self.system
        n = system.degree
        m = n + 1
        symbols = system.symbols
        equations = system.apply(unknowns)

        def component(i: int, j: int) -> FirstOrderOperator:
            # component j acts on the unknown with p_x exponent j
            return system.operators[i][n - j]

        total = sympy.Integer(0)
        for alpha in itertools.permutations(range(m)):
            for beta in itertools.permutations(range(m + 1)):
                term = equations[beta[m]]
                for slot in reversed(range(m)):
                    term = component(beta[slot], alpha[slot]).apply(term, symbols)
                total += _sign(alpha) * _sign(beta) * term
        return simplify(total / sympy.factorial(m))


def multi_bracket(system: PdeSystem) -> MultiBracket:
    if system.degree != 1:
        raise UnsupportedError("the multi-bracket is only supported for degree-1 systems")
    return MultiBracket(system)


def linear_integral(field: Sequence[Expr], coordinates: Tuple[str, str] = ("x", "y")) -> MomentaPolynomial:
    """Momentum of a vector field: V^x p_x + V^y p_y."""
    return MomentaPolynomial(1, {(1, 0): field[0], (0, 1): field[1]}, coordinates)
