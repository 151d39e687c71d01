"""
Scalar differential invariants of a 2D metric
The tower I2 .. I7f built from the curvature K, the invariant derivations
along grad K and sgrad K, the derived invariants (J4, J5, V1..V4, A, B and the
order-7 relation invariants) and the identity suite.
"""

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import sympy

from geoint.errors import InputError, SingularLocusError
from geoint.expr import (
    Expr,
    Point,
    PointEvaluator,
    Scalar,
    TriState,
    ZeroPolicy,
    ZeroTestResult,
    differentiate,
    zero_test,
)
from geoint.geometry import (
    ChristoffelSymbols,
    CovariantTensor,
    Metric2D,
    VectorField,
    christoffel,
    covariant_derivative,
    gauss_curvature,
    grad,
    sgrad,
)
from geoint.utils.logging import get_logger

logger = get_logger()

LETTERS = "abcdef"
MAX_ORDER = 7


def invariant_name(order: int, j: int) -> str:
    if order in (2, 3):
        return f"I{order}"
    return f"I{order}{LETTERS[j]}"


def names_for_order(order: int) -> Tuple[str, ...]:
    if order == 2:
        return ("I2",)
    if order == 3:
        return ("I3",)
    return tuple(invariant_name(order, j) for j in range(order - 1))


INVARIANT_NAMES: Tuple[str, ...] = tuple(
    name for order in range(2, MAX_ORDER + 1) for name in names_for_order(order)
)
INVARIANT_SYMBOLS: Dict[str, sympy.Symbol] = {
    name: sympy.Symbol(name, real=True) for name in INVARIANT_NAMES
}


def order_of(name: str) -> int:
    return int(name[1])


def sgrad_slots(name: str) -> int:
    """Number of sgrad K slots (the index j)."""
    return 0 if len(name) == 2 else LETTERS.index(name[2])


def rescale_weight(name: str) -> int:
    """Under g -> c*g the invariant changes by the factor c**(-rescale_weight(name))."""
    return 2 * order_of(name) - 3


# "odd-imaginary" multiplies odd-j values by i**j. Only "identity" keeps the
# Jfrak formulas covariant under orientation reversal (Jfrak -> conj(Jfrak)).
CONVENTIONS = ("identity", "odd-imaginary")
INVARIANT_CONVENTION = "identity"

# Sign of the second product in the order-7 relations. The seventh-order part
# of Jfrak1, Jfrak2 is c*D(A), -c*D(B) along G - iS and that of Jfrak3, Jfrak4
# is c*D(B), -c*D(A) along G + iS, so the compatibility determinant
# A*D(B) - B*D(A) reads B*Jfrak1 + A*Jfrak2 and A*Jfrak3 + B*Jfrak4.
RELATION_SIGNS = {"determinant": 1, "printed": -1}
RELATION_SIGN = "determinant"


class Direction(int, Enum):
    GRAD = 1
    SGRAD = 2


@dataclass(frozen=True)
class InvariantFrame:
    metric: Metric2D
    max_order: int
    K: Expr
    gradK: VectorField
    sgradK: VectorField
    gamma: ChristoffelSymbols
    tower: Tuple[CovariantTensor, ...]
    invariants: Dict[str, Expr]
    _evaluators: Dict[Any, PointEvaluator] = field(default_factory=dict, compare=False, repr=False)
    _values: Dict[Any, Scalar] = field(default_factory=dict, compare=False, repr=False)

    def __getitem__(self, name: str) -> Expr:
        if name not in self.invariants:
            raise KeyError(f"{name} is not computed at order {self.max_order}")
        return self.invariants[name]

    def extended(self, max_order: int) -> "InvariantFrame":
        if max_order <= self.max_order:
            return self
        return _build_frame(self.metric, max_order, self)

    def derivative(self, direction: int, e: Expr) -> Expr:
        field_ = self.gradK if Direction(direction) is Direction.GRAD else self.sgradK
        return field_.apply(e, self.metric.symbols)

    # pointwise evaluation

    @staticmethod
    def _point_key(point: Point, policy: ZeroPolicy) -> Tuple:
        return (tuple(sorted((k, str(v)) for k, v in point.items())), policy.mode, policy.precision)

    def point_evaluator(self, point: Point, policy: ZeroPolicy) -> PointEvaluator:
        key = self._point_key(point, policy)
        if key not in self._evaluators:
            self._evaluators[key] = PointEvaluator(point, policy.mode, policy.precision)
        return self._evaluators[key]

    def evaluate_expr(self, e: Expr, point: Point, policy: ZeroPolicy) -> Scalar:
        return self.point_evaluator(point, policy).evaluate(e)

    def values_at(
        self,
        point: Point,
        policy: ZeroPolicy,
        names: Optional[Sequence[str]] = None,
        convention: str = INVARIANT_CONVENTION,
    ) -> Dict[str, Scalar]:
        if convention not in CONVENTIONS:
            raise InputError(f"unknown convention {convention!r}")
        names = self.invariants if names is None else names
        base = self._point_key(point, policy)
        values = {}
        for name in names:
            key = (base, name)
            if key not in self._values:
                self._values[key] = self.evaluate_expr(self[name], point, policy)
            value = self._values[key]
            j = sgrad_slots(name)
            if convention == "odd-imaginary" and j % 2 == 1:
                value = value * Scalar.exact(sympy.I**j)
            values[name] = value
        return values

    def evaluate_formula(
        self,
        formula: Expr,
        point: Point,
        policy: ZeroPolicy,
        convention: str = INVARIANT_CONVENTION,
    ) -> Scalar:
        """Evaluate an expression over invariant symbols at a coordinate point."""
        names = sorted(symbol.name for symbol in formula.free_symbols)
        values = self.values_at(point, policy, names, convention)
        return PointEvaluator(values, policy.mode, policy.precision).evaluate(formula)

    def zero_test(
        self,
        e: Expr,
        policy: ZeroPolicy,
        label: str = "",
        convention: str = INVARIANT_CONVENTION,
    ) -> ZeroTestResult:
        """Zero test for a coordinate expression or a formula over invariant symbols."""
        e = sympy.sympify(e)
        names = {symbol.name for symbol in e.free_symbols}
        if names and names <= set(INVARIANT_NAMES):
            return zero_test(
                lambda point: self.evaluate_formula(e, point, policy, convention), policy, label
            )
        return zero_test(lambda point: self.evaluate_expr(e, point, policy), policy, label)

    def to_dict(self) -> Dict[str, Any]:
        return {"max_order": self.max_order, "invariants": list(self.invariants)}


def _build_frame(g: Metric2D, max_order: int, base: Optional[InvariantFrame] = None) -> InvariantFrame:
    started = time.perf_counter()
    if base is None:
        K = gauss_curvature(g)
        gamma = christoffel(g)
        gradK, sgradK = grad(g, K), sgrad(g, K)
        tower: List[CovariantTensor] = []
        invariants: Dict[str, Expr] = {"I2": K}
    else:
        K, gamma, gradK, sgradK = base.K, base.gamma, base.gradK, base.sgradK
        tower = list(base.tower)
        invariants = dict(base.invariants)

    symbols = g.symbols
    for order in range(3, max_order + 1):
        valence = order - 2
        if len(tower) < valence:
            if not tower:
                tower.append(CovariantTensor(1, {(i,): differentiate(K, symbols[i]) for i in range(2)}))
            else:
                tower.append(covariant_derivative(g, tower[-1], gamma))
        for name in names_for_order(order):
            if name in invariants:
                continue
            j = sgrad_slots(name)
            invariants[name] = tower[valence - 1].contract([gradK] * (valence - j) + [sgradK] * j)

    logger.log_frame(max_order, time.perf_counter() - started)
    frame = InvariantFrame(g, max_order, K, gradK, sgradK, gamma, tuple(tower), invariants)
    if base is not None:
        frame._evaluators.update(base._evaluators)
        frame._values.update(base._values)
    return frame


def invariant_frame(g: Metric2D, max_order: int = MAX_ORDER) -> InvariantFrame:
    """
    Compute the invariant tower of a metric

    Args:
        g: Riemannian metric
        max_order: highest differential order, 2..7

    Returns:
        Frame holding K, grad K, sgrad K, the covariant tower and every I up to max_order
    """
    if not 2 <= max_order <= MAX_ORDER:
        raise InputError(f"invariant order must be between 2 and {MAX_ORDER}, got {max_order}")
    return _build_frame(g, max_order)


def invariant_derivative(frame: InvariantFrame, direction: int, e: Expr) -> Expr:
    return frame.derivative(direction, e)


# Derived invariants, as formulas over the invariant symbols

_I = INVARIANT_SYMBOLS
I2, I3 = _I["I2"], _I["I3"]
I4a, I4b, I4c = _I["I4a"], _I["I4b"], _I["I4c"]
I5a, I5b, I5c, I5d = _I["I5a"], _I["I5b"], _I["I5c"], _I["I5d"]

J5_FORMULA = 5 * I3 * (I5a - I5c) + (I4a - I4c) * (I4c - 6 * I4a) - 25 * I2 * I3**3
J4_FORMULA = (
    3 * (I4a - I4c) * (I4a + 4 * I4c) * I4c
    - 15 * I2 * I3**3 * (I4a + 4 * I4c)
    + 25 * I3**5
)
# I4b = 0 and J4 = 0 imply J5 = 0 where this does not vanish
GENERICITY_FORMULA = I4c * (2 * I4a + 3 * I4c) - 5 * I2 * I3**3
LAPLACIAN_K_FORMULA = (I4a + I4c) / I3
SIX_RELATION_DENOMINATOR = 175 * I3**2 * I4b


@dataclass(frozen=True)
class DerivedInvariants:
    J4: Expr
    J5: Expr
    V: Tuple[Expr, Expr, Expr, Expr]
    A: Expr
    B: Expr
    Jfrak: Tuple[Expr, Expr, Expr, Expr]

    @property
    def main_relations(self) -> Dict[str, Expr]:
        """The two complex order-7 relations; their real and imaginary parts give four."""
        return self.relations(RELATION_SIGN)

    def relations(self, sign: str = RELATION_SIGN) -> Dict[str, Expr]:
        if sign not in RELATION_SIGNS:
            raise InputError(f"unknown relation sign {sign!r}")
        s = RELATION_SIGNS[sign]
        op = "+" if s > 0 else "-"
        return {
            f"B*Jfrak1 {op} A*Jfrak2": self.B * self.Jfrak[0] + s * self.A * self.Jfrak[1],
            f"A*Jfrak3 {op} B*Jfrak4": self.A * self.Jfrak[2] + s * self.B * self.Jfrak[3],
        }

    def formulas(self) -> Dict[str, Expr]:
        named = {"J4": self.J4, "J5": self.J5, "A": self.A, "B": self.B}
        named.update({f"V{k + 1}": v for k, v in enumerate(self.V)})
        named.update({f"Jfrak{k + 1}": j for k, j in enumerate(self.Jfrak)})
        return named


def six_relation_formulas() -> Tuple[Expr, Expr, Expr, Expr]:
    """V_k: I6x minus its value on the three-integral locus."""
    from geoint.formulas import load_formula

    return tuple(  # type: ignore
        _I[f"I6{letter}"] - load_formula(f"I6{letter}_rel") / SIX_RELATION_DENOMINATOR
        for letter in "abcd"
    )


def derived_invariants(frame: Optional[InvariantFrame] = None, policy: Optional[ZeroPolicy] = None) -> DerivedInvariants:
    """
    Derived invariants as formulas over I2..I7e

    With a frame and policy, refuses when I3 or I4b vanishes identically,
    since the V's divide by both.
    """
    from geoint.formulas import load_formula

    if frame is not None and policy is not None:
        for name in ("I3", "I4b"):
            if frame.zero_test(frame[name], policy, name).state is TriState.ZERO:
                raise SingularLocusError(f"{name} vanishes identically; V1..V4 are undefined")

    V = six_relation_formulas()
    A = (V[1] + V[3]) + sympy.I * (V[0] + V[2])
    B = (3 * V[1] - V[3]) + sympy.I * (3 * V[2] - V[0])
    Jfrak = tuple(load_formula(f"Jfrak{k}") for k in range(1, 5))
    return DerivedInvariants(J4_FORMULA, J5_FORMULA, V, A, B, Jfrak)  # type: ignore


def modulus_difference(frame: InvariantFrame, derived: DerivedInvariants, convention: str = INVARIANT_CONVENTION) -> Callable:
    """Pointwise |A|^2 - |B|^2."""

    def evaluator(point: Point, policy: ZeroPolicy) -> Scalar:
        a = frame.evaluate_formula(derived.A, point, policy, convention)
        b = frame.evaluate_formula(derived.B, point, policy, convention)
        return a * a.conjugate() - b * b.conjugate()

    return evaluator


def relation_tests(
    frame: InvariantFrame,
    derived: DerivedInvariants,
    policy: ZeroPolicy,
    convention: str = INVARIANT_CONVENTION,
    sign: str = RELATION_SIGN,
) -> Dict[str, ZeroTestResult]:
    """Zero tests of |A|^2 - |B|^2 and the two complex order-7 relations."""
    frame = frame.extended(MAX_ORDER)
    modulus = modulus_difference(frame, derived, convention)
    results = {"|A|^2 - |B|^2": zero_test(lambda p: modulus(p, policy), policy, "|A|^2 - |B|^2")}
    for label, relation in derived.relations(sign).items():
        results[label] = frame.zero_test(relation, policy, label, convention)
    return results


def calibrate_convention(frame: InvariantFrame, policy: ZeroPolicy) -> Dict[str, Dict[str, TriState]]:
    """
    Evaluate the order-7 relations under each i-normalisation and relation sign,
    keyed "convention/sign".
    """
    derived = derived_invariants()
    return {
        f"{convention}/{sign}": {
            label: result.state
            for label, result in relation_tests(frame, derived, policy, convention, sign).items()
        }
        for convention in CONVENTIONS
        for sign in RELATION_SIGNS
    }


def slot_order_discrepancy(frame: InvariantFrame) -> Expr:
    """d3K(S,S,G) - d3K(G,S,S); equals I2*I3^2."""
    frame = frame.extended(5)
    G, S = frame.gradK, frame.sgradK
    third = frame.tower[2]
    return third.contract([S, S, G]) - third.contract([G, S, S])


# Identity suite


class IdentityStatus(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    DEGENERATE = "DEGENERATE"
    UNDECIDED = "UNDECIDED"


_STATUS = {
    TriState.ZERO: IdentityStatus.PASS,
    TriState.NONZERO: IdentityStatus.FAIL,
    TriState.UNDECIDED: IdentityStatus.UNDECIDED,
}

# (label, direction, differentiated invariant, right-hand side)
DERIVATION_IDENTITIES: Tuple[Tuple[str, int, str, Expr], ...] = (
    ("nabla1 I2 = I3", 1, "I2", I3),
    ("nabla2 I2 = 0", 2, "I2", sympy.Integer(0)),
    ("nabla1 I3 = 2 I4a", 1, "I3", 2 * I4a),
    ("nabla2 I3 = 2 I4b", 2, "I3", 2 * I4b),
    ("nabla1 I4a", 1, "I4a", I5a + 2 * (I4a**2 + I4b**2) / I3),
    ("nabla2 I4a", 2, "I4a", I5b + 2 * I4b * (I4a + I4c) / I3),
    ("nabla1 I4b", 1, "I4b", I5b + I4b * (I4a + I4c) / I3),
    ("nabla2 I4b", 2, "I4b", I5c + (I4c**2 - I4a * I4c + 2 * I4b**2) / I3 + I2 * I3**2),
    ("nabla1 I4c", 1, "I4c", I5c + 2 * (I4a * I4c - I4b**2) / I3),
    ("nabla2 I4c = I5d", 2, "I4c", I5d),
)
COMMUTATOR_LABEL = "[grad K, sgrad K]"


@dataclass(frozen=True)
class IdentityCheck:
    label: str
    status: IdentityStatus
    result: Optional[ZeroTestResult] = None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"label": self.label, "status": self.status.value}
        if self.result is not None and self.result.witness is not None:
            data["witness"] = self.result.witness_text()
        return data


@dataclass(frozen=True)
class IdentityReport:
    checks: Tuple[IdentityCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.status is IdentityStatus.PASS for check in self.checks)

    @property
    def degenerate(self) -> bool:
        return all(check.status is IdentityStatus.DEGENERATE for check in self.checks)

    def __iter__(self):
        return iter(self.checks)

    def to_dict(self) -> Dict[str, Any]:
        return {"passed": self.passed, "checks": [check.to_dict() for check in self.checks]}


def _commutator_residual(frame: InvariantFrame, policy: ZeroPolicy) -> Callable[[Point], Scalar]:
    G, S = frame.gradK, frame.sgradK
    symbols = frame.metric.symbols
    bracket = [G.apply(S[k], symbols) - S.apply(G[k], symbols) for k in range(2)]
    c_grad = -2 * I4b / I3
    c_sgrad = (I4a - I4c) / I3

    def residual(point: Point) -> Scalar:
        a = frame.evaluate_formula(c_grad, point, policy)
        b = frame.evaluate_formula(c_sgrad, point, policy)
        total = Scalar.exact(0)
        for k in range(2):
            lhs = frame.evaluate_expr(bracket[k], point, policy)
            rhs = a * frame.evaluate_expr(G[k], point, policy) + b * frame.evaluate_expr(S[k], point, policy)
            total = total + (lhs - rhs).magnitude_squared()
        return total

    return residual


def leibniz_identities(order: int) -> Tuple[Tuple[str, int, str, str], ...]:
    """
    (label, direction, parent, child) rows for order >= 5: nabla1 moves every
    I of order - 1 to the child with the same j, nabla2 moves the all-sgrad one.
    """
    parents, children = names_for_order(order - 1), names_for_order(order)
    rows = [(f"nabla1 {parent} -> {children[j]}", 1, parent, children[j]) for j, parent in enumerate(parents)]
    rows.append((f"nabla2 {parents[-1]} -> {children[-1]}", 2, parents[-1], children[-1]))
    return tuple(rows)


def covariant_along(frame: InvariantFrame, X: VectorField, Y: VectorField) -> VectorField:
    """nabla_X Y from the Christoffel symbols of the frame."""
    symbols = frame.metric.symbols
    gamma = frame.gamma
    return VectorField(
        *(
            X.apply(Y[k], symbols)
            + sum(gamma[(k, i, j)] * X[i] * Y[j] for i in range(2) for j in range(2))
            for k in range(2)
        )
    )


def _leibniz_residual(
    frame: InvariantFrame, policy: ZeroPolicy, direction: int, parent: str, child: str
) -> Callable[[Point], Scalar]:
    """nabla_X I(parent) - dT(X, slots) - sum of T with one slot replaced by nabla_X of it."""
    valence = order_of(parent) - 2
    tensor = frame.tower[valence - 1]
    G, S = frame.gradK, frame.sgradK
    along = G if Direction(direction) is Direction.GRAD else S
    j = sgrad_slots(parent)
    slots = [G] * (valence - j) + [S] * j
    moved = [covariant_along(frame, along, vector) for vector in slots]
    corrections = sum(
        (tensor.contract(slots[:k] + [moved[k]] + slots[k + 1 :]) for k in range(valence)),
        sympy.Integer(0),
    )
    lhs = frame.derivative(direction, frame[parent])

    def residual(point: Point) -> Scalar:
        rhs = frame.evaluate_expr(frame[child], point, policy) + frame.evaluate_expr(corrections, point, policy)
        return frame.evaluate_expr(lhs, point, policy) - rhs

    return residual


def _scalar_commutator_residual(frame: InvariantFrame, policy: ZeroPolicy, name: str) -> Callable[[Point], Scalar]:
    e = frame[name]
    d1, d2 = frame.derivative(1, e), frame.derivative(2, e)
    bracket = frame.derivative(1, d2) - frame.derivative(2, d1)
    c_grad = -2 * I4b / I3
    c_sgrad = (I4a - I4c) / I3

    def residual(point: Point) -> Scalar:
        a = frame.evaluate_formula(c_grad, point, policy)
        b = frame.evaluate_formula(c_sgrad, point, policy)
        rhs = a * frame.evaluate_expr(d1, point, policy) + b * frame.evaluate_expr(d2, point, policy)
        return frame.evaluate_expr(bracket, point, policy) - rhs

    return residual


def identity_suite(frame: InvariantFrame, policy: ZeroPolicy, max_order: int = 5) -> IdentityReport:
    """
    Check the derivation identities and the commutation rule by sampling.

    With max_order 6 or 7 the suite also checks the Leibniz rule carrying every
    invariant of each order up to max_order - 1 into the next one, and the
    commutation rule applied to I{max_order - 2}a.
    """
    if not 5 <= max_order <= MAX_ORDER:
        raise InputError(f"identity suite order must be between 5 and {MAX_ORDER}, got {max_order}")
    frame = frame.extended(max_order)
    labels = [label for label, _, _, _ in DERIVATION_IDENTITIES] + [COMMUTATOR_LABEL]
    higher = [row for order in range(6, max_order + 1) for row in leibniz_identities(order)]
    labels += [label for label, _, _, _ in higher]
    scalar = f"I{max_order - 2}a"
    if max_order > 5:
        labels.append(f"[nabla1, nabla2] {scalar}")

    if frame.zero_test(frame["I3"], policy, "I3").state is TriState.ZERO:
        return IdentityReport(tuple(IdentityCheck(label, IdentityStatus.DEGENERATE) for label in labels))

    checks = []
    for label, direction, name, rhs in DERIVATION_IDENTITIES:
        lhs = frame.derivative(direction, frame[name])

        def residual(point: Point, lhs: Expr = lhs, rhs: Expr = rhs) -> Scalar:
            return frame.evaluate_expr(lhs, point, policy) - frame.evaluate_formula(rhs, point, policy)

        result = zero_test(residual, policy, label)
        checks.append(IdentityCheck(label, _STATUS[result.state], result))

    result = zero_test(_commutator_residual(frame, policy), policy, COMMUTATOR_LABEL)
    checks.append(IdentityCheck(COMMUTATOR_LABEL, _STATUS[result.state], result))

    for label, direction, parent, child in higher:
        result = zero_test(_leibniz_residual(frame, policy, direction, parent, child), policy, label)
        checks.append(IdentityCheck(label, _STATUS[result.state], result))
    if max_order > 5:
        label = labels[-1]
        result = zero_test(_scalar_commutator_residual(frame, policy, scalar), policy, label)
        checks.append(IdentityCheck(label, _STATUS[result.state], result))
    return IdentityReport(tuple(checks))
