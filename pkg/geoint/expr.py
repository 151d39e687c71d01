"""
Expression kernel
Closed-form scalar expressions in two coordinates: parsing, printing,
differentiation, canonical simplification, exact and high-precision
evaluation, and sampled zero testing.
"""

import ast
import dataclasses
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

import mpmath
import sympy
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    rationalize,
    standard_transformations,
)
from sympy.printing.str import StrPrinter

from geoint.errors import GeointError, InputError
from geoint.utils.logging import get_logger

logger = get_logger()

Expr = sympy.Expr
Point = Dict[str, sympy.Rational]

IMAGINARY_UNIT = "i"
FUNCTIONS = {
    "exp": sympy.exp,
    "log": sympy.log,
    "sin": sympy.sin,
    "cos": sympy.cos,
    "sqrt": sympy.sqrt,
    "abs": sympy.Abs,
    "sign": sympy.sign,
}
_TRANSFORMATIONS = standard_transformations + (convert_xor, rationalize)
_SINGULAR = (sympy.zoo, sympy.nan, sympy.oo, -sympy.oo)
_ELEMENTARY = (sympy.exp, sympy.log, sympy.sin, sympy.cos, sympy.Abs, sympy.sign)


class ExprError(GeointError, ValueError):
    """Base class for expression failures"""


class ExpressionSyntaxError(ExprError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


class UnknownIdentifierError(ExprError):
    def __init__(self, name: str, text: str, position: int):
        super().__init__(
            f"unknown identifier {name!r} at position {position} in {text!r}; "
            "declare it as a coordinate or parameter"
        )
        self.name = name
        self.text = text
        self.position = position


class ZeroDenominatorError(ExprError):
    """Expression divides by a literal zero"""


class InexactEvaluationError(ExprError):
    """Exact mode met a value that is not a Gaussian rational"""


class SingularPointError(ExprError):
    """A denominator vanishes at the evaluation point"""


def coordinate(name: str) -> sympy.Symbol:
    return sympy.Symbol(name, real=True)


def parameter(name: str) -> sympy.Symbol:
    return sympy.Symbol(name, real=True)


# Parsing and printing


def _check_syntax(text: str, declared: Iterable[str]) -> None:
    """Validate the grammar with positions; ^ and * share length and arity."""
    stripped = text.lstrip()
    lead = len(text) - len(stripped)
    source = stripped.rstrip().replace("^", "*")
    if not source:
        raise ExpressionSyntaxError("empty expression", text, 0)
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError as exc:
        raise ExpressionSyntaxError(exc.msg, text, lead + max((exc.offset or 1) - 1, 0))

    declared = set(declared)
    called = set()
    for node in ast.walk(tree.body):
        position = lead + getattr(node, "col_offset", 0)
        if isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS:
                raise ExpressionSyntaxError("unknown function call", text, position)
            if len(node.args) != 1 or node.keywords:
                raise ExpressionSyntaxError(
                    f"{node.func.id} takes exactly one argument", text, position
                )
            called.add(id(node.func))
        elif isinstance(node, ast.Name):
            if id(node) in called:
                continue
            if node.id in FUNCTIONS:
                raise ExpressionSyntaxError(f"{node.id} needs an argument", text, position)
            if node.id != IMAGINARY_UNIT and node.id not in declared:
                raise UnknownIdentifierError(node.id, text, position)
        elif isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
                raise ExpressionSyntaxError("unsupported literal", text, position)
        elif isinstance(node, ast.BinOp):
            if not isinstance(node.op, (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)):
                raise ExpressionSyntaxError("unsupported operator", text, position)
        elif isinstance(node, ast.UnaryOp):
            if not isinstance(node.op, (ast.UAdd, ast.USub)):
                raise ExpressionSyntaxError("unsupported operator", text, position)
        elif not isinstance(node, (ast.operator, ast.unaryop, ast.Load)):
            raise ExpressionSyntaxError("unsupported syntax", text, position)


def parse(
    text: str,
    coordinates: Iterable[str] = ("x", "y"),
    parameters: Iterable[str] = (),
) -> Expr:
    """
    Parse infix text into an expression

    Args:
        text: expression using + - * / ^, exp/log/sin/cos/sqrt, rational literals and i
        coordinates: names declared as coordinates
        parameters: names declared as parameters

    Returns:
        Parsed expression with real-valued symbols
    """
    declared: Dict[str, Any] = {name: coordinate(name) for name in coordinates}
    declared.update({name: parameter(name) for name in parameters})
    _check_syntax(text, declared)

    local = dict(declared)
    local.update(FUNCTIONS)
    local[IMAGINARY_UNIT] = sympy.I
    try:
        result = parse_expr(text.strip(), local_dict=local, transformations=_TRANSFORMATIONS)
    except ZeroDivisionError:
        raise ZeroDenominatorError(f"zero denominator in {text!r}")
    except (SyntaxError, TypeError) as exc:
        raise ExpressionSyntaxError(str(exc), text, 0)

    if not isinstance(result, sympy.Expr):
        raise ExpressionSyntaxError("not a scalar expression", text, 0)
    if result.has(*_SINGULAR):
        raise ZeroDenominatorError(f"zero denominator in {text!r}")
    return result


class ExprPrinter(StrPrinter):
    """String printer whose output parses back with parse()"""

    def _print_ImaginaryUnit(self, expr):
        return IMAGINARY_UNIT

    def _print_Exp1(self, expr):
        return "exp(1)"

    def _print_Abs(self, expr):
        return f"abs({self._print(expr.args[0])})"

    def _print_sign(self, expr):
        return f"sign({self._print(expr.args[0])})"


def to_text(e: Any) -> str:
    return ExprPrinter().doprint(e)


# Calculus


def differentiate(e: Expr, var: sympy.Symbol, order: int = 1) -> Expr:
    if order < 0:
        raise ExprError(f"derivative order must be nonnegative, got {order}")
    if not isinstance(var, sympy.Symbol):
        raise ExprError(f"cannot differentiate with respect to {var!r}")
    if order == 0:
        return e
    return sympy.diff(e, var, order)


def simplify(e: Expr) -> Expr:
    """Canonical rational form; transcendental subterms are kept as generators."""
    e = sympy.sympify(e)
    if e.is_Atom:
        return e
    return sympy.cancel(e)


def is_rational_in(e: Expr, symbols: Iterable[sympy.Symbol]) -> bool:
    return bool(sympy.sympify(e).is_rational_function(*symbols))


# Evaluation


class EvaluationMode(str, Enum):
    EXACT = "exact"
    FLOAT = "float"


class TriState(str, Enum):
    ZERO = "Zero"
    NONZERO = "Nonzero"
    UNDECIDED = "Undecided"


def gaussian_rational(value: Any) -> Expr:
    """Coerce to a + b*I with rational a, b or raise InexactEvaluationError."""
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    value = sympy.sympify(value)
    if value.is_Rational:
        return value
    if value.has(*_SINGULAR):
        raise SingularPointError(f"singular value {to_text(value)}")
    expanded = sympy.expand(value)
    real, imag = expanded.as_real_imag()
    if real.is_Rational and imag.is_Rational:
        return real + imag * sympy.I
    raise InexactEvaluationError(f"value {to_text(value)} is not exactly representable")


@dataclass(frozen=True)
class Scalar:
    """Exact Gaussian rational, or an mpmath complex with its precision in bits"""

    value: Any
    precision: Optional[int] = None
    scale: Any = None

    @classmethod
    def exact(cls, value: Any) -> "Scalar":
        return cls(gaussian_rational(value))

    @classmethod
    def approx(cls, value: Any, precision: int, scale: Any = None) -> "Scalar":
        return cls(mpmath.mpc(value), precision, scale)

    @property
    def is_exact(self) -> bool:
        return self.precision is None

    def is_zero(self, tolerance: float = 0.0) -> bool:
        if self.is_exact:
            return self.value == 0
        magnitude = abs(self.value)
        reference = magnitude if self.scale is None else self.scale
        return bool(magnitude <= tolerance * reference)

    def _reference(self) -> Any:
        return abs(self.as_mpmath()) if self.scale is None else self.scale

    def _combine(self, other: "Scalar", op: Callable[[Any, Any], Any], scale: Callable[[Any, Any], Any]) -> "Scalar":
        if self.is_exact and other.is_exact:
            return Scalar(gaussian_rational(op(self.value, other.value)))
        precision = max(p for p in (self.precision, other.precision) if p is not None)
        with mpmath.workprec(precision):
            value = op(self.as_mpmath(), other.as_mpmath())
            return Scalar.approx(value, precision, scale(self._reference(), other._reference()))

    def __add__(self, other: "Scalar") -> "Scalar":
        return self._combine(other, lambda a, b: a + b, max)

    def __sub__(self, other: "Scalar") -> "Scalar":
        return self._combine(other, lambda a, b: a - b, max)

    def __mul__(self, other: "Scalar") -> "Scalar":
        return self._combine(other, lambda a, b: a * b, lambda a, b: a * b)

    def conjugate(self) -> "Scalar":
        if self.is_exact:
            return Scalar(sympy.conjugate(self.value))
        return Scalar(mpmath.conj(self.value), self.precision, self.scale)

    def magnitude_squared(self) -> "Scalar":
        if self.is_exact:
            real, imag = self.value.as_real_imag()
            return Scalar(real**2 + imag**2)
        value = self.value.real**2 + self.value.imag**2
        scale = None if self.scale is None else self.scale**2
        return Scalar.approx(value, self.precision, scale)

    def as_mpmath(self) -> Any:
        if not self.is_exact:
            return self.value
        real, imag = self.value.as_real_imag()
        return mpmath.mpc(
            mpmath.mpf(real.p) / real.q, mpmath.mpf(imag.p) / imag.q
        )

    def __str__(self) -> str:
        if self.is_exact:
            return to_text(self.value)
        with mpmath.workprec(self.precision):
            if self.value.imag == 0:
                return mpmath.nstr(self.value.real, 30)
            return mpmath.nstr(self.value, 30)


class PointEvaluator:
    """
    Evaluates expressions at one point, sharing a cache across calls so
    common subterms are computed once.
    """

    def __init__(
        self,
        assignment: Mapping[Union[str, sympy.Symbol], Any],
        mode: EvaluationMode = EvaluationMode.EXACT,
        precision: int = 256,
    ):
        self.mode = EvaluationMode(mode)
        self.precision = precision
        self.values: Dict[str, Any] = {}
        for key, value in assignment.items():
            name = key.name if isinstance(key, sympy.Symbol) else str(key)
            self.values[name] = self._leaf(value)
        self._cache: Dict[Any, Any] = {}

    def _leaf(self, value: Any) -> Any:
        if isinstance(value, Scalar):
            if self.mode is EvaluationMode.EXACT:
                if not value.is_exact:
                    raise InexactEvaluationError("exact evaluation with an approximate input")
                return value.value
            return (value.as_mpmath(), abs(value.as_mpmath()) if value.scale is None else value.scale)
        exact = gaussian_rational(value)
        if self.mode is EvaluationMode.EXACT:
            return exact
        with mpmath.workprec(self.precision):
            leaf = Scalar(exact).as_mpmath()
            return (leaf, abs(leaf))

    def evaluate(self, e: Any) -> Scalar:
        e = sympy.sympify(e)
        try:
            if self.mode is EvaluationMode.EXACT:
                return Scalar(self._exact(e))
            with mpmath.workprec(self.precision):
                value, scale = self._approx(e)
                return Scalar.approx(value, self.precision, scale)
        except ZeroDivisionError:
            raise SingularPointError("division by zero")

    # exact path

    def _exact(self, node: Expr) -> Expr:
        cached = self._cache.get(node)
        if cached is not None:
            return cached
        result = self._exact_node(node)
        self._cache[node] = result
        return result

    def _exact_node(self, node: Expr) -> Expr:
        if node.is_Symbol:
            if node.name not in self.values:
                raise ExprError(f"unassigned symbol {node.name}")
            return self.values[node.name]
        if node.is_Number or node is sympy.I:
            return gaussian_rational(node)
        if node.is_Add:
            return gaussian_rational(sympy.Add(*[self._exact(arg) for arg in node.args]))
        if node.is_Mul:
            result = sympy.Integer(1)
            for arg in node.args:
                result = gaussian_rational(result * self._exact(arg))
            return result
        if node.is_Pow:
            base = self._exact(node.base)
            exponent = self._exact(node.exp)
            if base == 0 and (exponent.as_real_imag()[0] < 0):
                raise SingularPointError("division by zero")
            if exponent.is_Integer and exponent < 0 and not base.is_Rational:
                real, imag = base.as_real_imag()
                inverse = (real - imag * sympy.I) / (real**2 + imag**2)
                return gaussian_rational(inverse ** (-exponent))
            return gaussian_rational(base**exponent)
        if node.func in _ELEMENTARY:
            argument = self._exact(node.args[0])
            return gaussian_rational(node.func(argument))
        if node.is_NumberSymbol:
            raise InexactEvaluationError(f"{to_text(node)} has no exact value")
        raise ExprError(f"cannot evaluate {type(node).__name__} nodes")

    # float path: returns (value, magnitude of the largest intermediate)

    def _approx(self, node: Expr) -> Tuple[Any, Any]:
        cached = self._cache.get(node)
        if cached is not None:
            return cached
        result = self._approx_node(node)
        self._cache[node] = result
        return result

    def _approx_node(self, node: Expr) -> Tuple[Any, Any]:
        if node.is_Symbol:
            if node.name not in self.values:
                raise ExprError(f"unassigned symbol {node.name}")
            return self.values[node.name]
        if node.is_Rational:
            value = mpmath.mpf(node.p) / node.q
            return value, abs(value)
        if node is sympy.I:
            return mpmath.mpc(0, 1), mpmath.mpf(1)
        if node.is_Float or node.is_NumberSymbol:
            value = mpmath.mpmathify(str(sympy.N(node, mpmath.mp.dps + 5)))
            return value, abs(value)
        if node.is_Add:
            parts = [self._approx(arg) for arg in node.args]
            return mpmath.fsum(value for value, _ in parts), max(scale for _, scale in parts)
        if node.is_Mul:
            parts = [self._approx(arg) for arg in node.args]
            return (
                mpmath.fprod(value for value, _ in parts),
                mpmath.fprod(scale for _, scale in parts),
            )
        if node.is_Pow:
            base, base_scale = self._approx(node.base)
            exponent = node.exp
            if exponent.is_Integer:
                n = int(exponent)
                if n >= 0:
                    return base**n, base_scale**n
                if base == 0:
                    raise SingularPointError("division by zero")
                value = base**n
                return value, abs(value)
            power, _ = self._approx(exponent)
            if base == 0 and mpmath.re(power) < 0:
                raise SingularPointError("division by zero")
            value = mpmath.power(base, power)
            return value, abs(value)
        functions = {
            sympy.exp: mpmath.exp,
            sympy.log: mpmath.log,
            sympy.sin: mpmath.sin,
            sympy.cos: mpmath.cos,
            sympy.Abs: abs,
            sympy.sign: mpmath.sign,
        }
        if node.func in functions:
            argument, _ = self._approx(node.args[0])
            if node.func is sympy.log and argument == 0:
                raise SingularPointError("logarithm of zero")
            if node.func is sympy.sign and mpmath.im(argument) == 0:
                argument = mpmath.re(argument)
            value = functions[node.func](argument)
            return value, abs(value)
        raise ExprError(f"cannot evaluate {type(node).__name__} nodes")


def evaluate(
    e: Any,
    assignment: Mapping[Union[str, sympy.Symbol], Any],
    mode: EvaluationMode = EvaluationMode.EXACT,
    precision: int = 256,
) -> Scalar:
    """
    Evaluate an expression at a point

    Args:
        e: expression
        assignment: value for every free symbol, keyed by name or symbol
        mode: exact (Gaussian rationals) or float (mpmath complex)
        precision: bits for float mode

    Returns:
        Scalar value
    """
    try:
        return PointEvaluator(assignment, mode, precision).evaluate(e)
    except ZeroDivisionError:
        raise SingularPointError("division by zero")


# Zero testing


@dataclass(frozen=True)
class ZeroPolicy:
    """How identical vanishing is decided by sampling"""

    mode: EvaluationMode = EvaluationMode.EXACT
    samples: int = 7
    box: Tuple[Tuple[str, Any, Any], ...] = (("x", 1, 2), ("y", 1, 2))
    seed: int = 0
    tolerance: float = 1e-30
    precision: int = 256
    denominator: int = 64
    max_rejections: int = 64

    def __post_init__(self):
        object.__setattr__(self, "mode", EvaluationMode(self.mode))
        object.__setattr__(
            self,
            "box",
            tuple(
                (str(name), sympy.Rational(lo), sympy.Rational(hi)) for name, lo, hi in self.box
            ),
        )
        if self.samples < 1:
            raise InputError(f"sample count must be at least 1, got {self.samples}")
        if self.mode is EvaluationMode.FLOAT and not self.tolerance > 0:
            raise InputError("float mode needs a positive tolerance")
        if self.denominator < 1:
            raise InputError("sample denominator must be positive")
        for name, lo, hi in self.box:
            if lo > hi:
                raise InputError(f"empty interval for {name}: [{lo}, {hi}]")
        if not any(lo < hi for _, lo, hi in self.box):
            raise InputError("domain box is degenerate: every interval is a single point")

    @classmethod
    def from_settings(cls, coordinates: Tuple[str, str] = ("x", "y"), **overrides: Any) -> "ZeroPolicy":
        from geoint.config import cfg

        values: Dict[str, Any] = {
            "samples": cfg.get_int("GEOINT_SAMPLES"),
            "seed": cfg.get_int("GEOINT_SEED"),
            "tolerance": cfg.get_float("GEOINT_TOLERANCE"),
            "precision": cfg.get_int("GEOINT_PRECISION"),
            "denominator": cfg.get_int("GEOINT_DENOMINATOR"),
            "box": tuple((name, 1, 2) for name in coordinates),
        }
        values.update(overrides)
        return cls(**values)

    @property
    def coordinates(self) -> Tuple[str, ...]:
        return tuple(name for name, _, _ in self.box)

    def interval(self, name: str) -> Tuple[sympy.Rational, sympy.Rational]:
        for key, lo, hi in self.box:
            if key == name:
                return lo, hi
        raise KeyError(name)

    def replace(self, **changes: Any) -> "ZeroPolicy":
        return dataclasses.replace(self, **changes)

    def points(self) -> Iterator[Point]:
        """Deterministic stream of rational sample points inside the box."""
        rng = random.Random(self.seed)
        while True:
            point = {}
            for name, lo, hi in self.box:
                if lo == hi:
                    point[name] = lo
                else:
                    step = sympy.Rational(rng.randint(0, self.denominator), self.denominator)
                    point[name] = lo + (hi - lo) * step
            yield point

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mode": self.mode.value,
            "samples": self.samples,
            "box": {name: [str(lo), str(hi)] for name, lo, hi in self.box},
            "seed": self.seed,
            "tolerance": self.tolerance,
            "precision": self.precision,
            "denominator": self.denominator,
        }


@dataclass(frozen=True)
class ZeroTestResult:
    state: TriState
    label: str = ""
    admissible: int = 0
    rejected: int = 0
    zero_count: int = 0
    witness: Optional[Point] = None
    witness_value: Optional[Scalar] = None

    @property
    def mixed(self) -> bool:
        """Vanishes at some admissible samples but not at others."""
        return self.zero_count > 0 and self.zero_count < self.admissible

    def witness_text(self) -> Dict[str, str]:
        if self.witness is None:
            return {}
        return {name: str(value) for name, value in self.witness.items()}

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "label": self.label,
            "state": self.state.value,
            "samples": self.admissible,
            "rejected": self.rejected,
        }
        if self.witness is not None:
            data["witness"] = self.witness_text()
            data["value"] = str(self.witness_value)
        if self.mixed:
            data["mixed"] = True
        return data


def zero_test(
    evaluator: Callable[[Point], Scalar], policy: ZeroPolicy, label: str = ""
) -> ZeroTestResult:
    """
    Decide identical vanishing by evaluation at the policy's sample points

    Points where evaluation is singular, or inexact in exact mode, are
    rejected and redrawn; after policy.max_rejections rejections the test
    stops and reports Undecided unless a nonzero value was already found.
    """
    admissible = rejected = zeros = 0
    witness: Optional[Point] = None
    witness_value: Optional[Scalar] = None
    for point in policy.points():
        if admissible >= policy.samples or rejected >= policy.max_rejections:
            break
        try:
            value = evaluator(point)
        except (SingularPointError, InexactEvaluationError, ZeroDivisionError):
            rejected += 1
            continue
        admissible += 1
        if value.is_zero(policy.tolerance):
            zeros += 1
        elif witness is None:
            witness, witness_value = point, value

    if witness is not None:
        state = TriState.NONZERO
    elif admissible >= policy.samples:
        state = TriState.ZERO
    else:
        state = TriState.UNDECIDED

    result = ZeroTestResult(state, label, admissible, rejected, zeros, witness, witness_value)
    logger.log_zero_test(label, state.value, admissible, result.witness_text())
    return result


def expression_evaluator(e: Any, policy: ZeroPolicy) -> Callable[[Point], Scalar]:
    e = sympy.sympify(e)
    unknown = {symbol.name for symbol in e.free_symbols} - set(policy.coordinates)
    if unknown:
        raise ExprError(
            f"free symbols {sorted(unknown)} are not coordinates of the domain box"
        )
    return lambda point: evaluate(e, point, policy.mode, policy.precision)


def zero_test_expr(e: Any, policy: ZeroPolicy, label: str = "") -> ZeroTestResult:
    return zero_test(expression_evaluator(e, policy), policy, label)


def is_identically_zero(e: Any, policy: ZeroPolicy) -> TriState:
    return zero_test_expr(e, policy).state
