"""
Integral files
Named momenta polynomials plus bracket and relation checks against a metric.

    # comment
    [H]
    2 0 = 1/x
    0 2 = 1/x
    [K]
    0 1 = 1
    bracket K F = H
    relation H*G - F^2 = 4*K^4

Under a [name] header each `i j = coefficient` line sets the coefficient of
p_x^i p_y^j. `bracket A B = C` checks {A, B} = C; `relation lhs = rhs` checks
a polynomial identity among the named integrals.
"""

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import sympy

from geoint.errors import InputError
from geoint.expr import ExprError, TriState, ZeroPolicy, ZeroTestResult, parse, zero_test_expr
from geoint.geometry import Metric2D
from geoint.symplectic import (
    IntegralCheck,
    MomentaPolynomial,
    check_integral,
    combine_states,
    poisson_bracket,
)
from geoint.utils.logging import get_logger

logger = get_logger()

_HEADER = re.compile(r"^\[([A-Za-z_][A-Za-z0-9_]*)\]$")
_ENTRY = re.compile(r"^(\d+)\s+(\d+)\s*=\s*(.+)$")
_BRACKET = re.compile(r"^bracket\s+([A-Za-z_]\w*)\s+([A-Za-z_]\w*)\s*=\s*(.+)$")
_RELATION = re.compile(r"^relation\s+(.+?)\s*=\s*(.+)$")


@dataclass(frozen=True)
class IntegralSet:
    integrals: Dict[str, MomentaPolynomial]
    brackets: Tuple[Tuple[str, str, str], ...] = ()
    relations: Tuple[Tuple[str, str], ...] = ()
    coordinates: Tuple[str, str] = ("x", "y")

    def names(self) -> Tuple[str, ...]:
        return tuple(self.integrals)


def parse_integrals(text: str, coordinates: Tuple[str, str] = ("x", "y"), parameters: Optional[Dict[str, Any]] = None) -> IntegralSet:
    """Parse integral-file text; parameters are substituted as exact values."""
    parameters = parameters or {}
    raw: Dict[str, Dict[Tuple[int, int], sympy.Expr]] = {}
    brackets: List[Tuple[str, str, str]] = []
    relations: List[Tuple[str, str]] = []
    current = None

    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if header := _HEADER.match(line):
            current = header.group(1)
            if current in raw:
                raise InputError(f"line {lineno}: integral {current} defined twice")
            if current in coordinates:
                raise InputError(f"line {lineno}: {current} clashes with a coordinate name")
            raw[current] = {}
        elif bracket := _BRACKET.match(line):
            brackets.append((bracket.group(1), bracket.group(2), bracket.group(3).strip()))
            current = None
        elif relation := _RELATION.match(line):
            relations.append((relation.group(1).strip(), relation.group(2).strip()))
            current = None
        elif entry := _ENTRY.match(line):
            if current is None:
                raise InputError(f"line {lineno}: coefficient outside an integral section")
            key = (int(entry.group(1)), int(entry.group(2)))
            try:
                value = parse(entry.group(3), coordinates, parameters)
            except ExprError as exc:
                raise InputError(f"line {lineno}: {exc}")
            value = value.subs({sympy.Symbol(k, real=True): v for k, v in parameters.items()})
            raw[current][key] = raw[current].get(key, sympy.Integer(0)) + value
        else:
            raise InputError(f"line {lineno}: cannot parse {line!r}")

    if not raw:
        raise InputError("integral file defines no integrals")
    integrals = {}
    for name, coefficients in raw.items():
        degrees = {i + j for i, j in coefficients}
        if len(degrees) != 1:
            raise InputError(f"integral {name} is not homogeneous in the momenta")
        integrals[name] = MomentaPolynomial(degrees.pop(), coefficients, coordinates)

    for a, b, _ in brackets:
        for name in (a, b):
            if name not in integrals:
                raise InputError(f"bracket refers to undefined integral {name}")
    return IntegralSet(integrals, tuple(brackets), tuple(relations), tuple(coordinates))


def load_integrals(path: Path, coordinates: Tuple[str, str] = ("x", "y"), parameters: Optional[Dict[str, Any]] = None) -> IntegralSet:
    if not path.exists():
        raise InputError(f"integral file {path} does not exist")
    return parse_integrals(path.read_text(encoding="utf-8"), coordinates, parameters)


def _combination(integrals: IntegralSet, text: str) -> sympy.Expr:
    """Expression over integral names, expanded into the momenta."""
    try:
        e = parse(text, integrals.coordinates, integrals.names())
    except ExprError as exc:
        raise InputError(f"in {text!r}: {exc}")
    substitution = {sympy.Symbol(name, real=True): F.to_expr() for name, F in integrals.integrals.items()}
    return e.subs(substitution, simultaneous=True)


@dataclass(frozen=True)
class RelationCheck:
    label: str
    state: TriState
    results: Tuple[ZeroTestResult, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"label": self.label, "state": self.state.value}
        witnesses = [r.witness_text() for r in self.results if r.witness is not None]
        if witnesses:
            data["witness"] = witnesses[0]
        return data


@dataclass
class IntegralVerification:
    integrals: Dict[str, IntegralCheck] = field(default_factory=dict)
    identities: List[RelationCheck] = field(default_factory=list)

    @property
    def state(self) -> TriState:
        states = [check.state for check in self.integrals.values()] + [c.state for c in self.identities]
        return combine_states(states)

    @property
    def passed(self) -> bool:
        return self.state is TriState.ZERO

    def to_dict(self) -> Dict[str, Any]:
        return {
            "integrals": {name: check.state.value for name, check in self.integrals.items()},
            "identities": [check.to_dict() for check in self.identities],
            "state": self.state.value,
        }


def _identity(label: str, difference: sympy.Expr, integrals: IntegralSet, policy: ZeroPolicy) -> RelationCheck:
    try:
        polynomial = MomentaPolynomial.from_expr(difference, integrals.coordinates)
    except InputError:
        # mixed degrees cannot cancel
        return RelationCheck(label, TriState.NONZERO)
    results = tuple(
        zero_test_expr(value, policy, f"{label} p^{i} q^{j}")
        for (i, j), value in sorted(polynomial.coefficients.items())
    )
    return RelationCheck(label, combine_states([result.state for result in results]), results)


def verify_integrals(g: Metric2D, integrals: IntegralSet, policy: ZeroPolicy) -> IntegralVerification:
    """
    Check every named polynomial against {H, F} = 0, then the listed brackets
    and relations as identities in the momenta.
    """
    if integrals.coordinates != g.coordinates:
        raise InputError(f"integral coordinates {integrals.coordinates} differ from metric's {g.coordinates}")
    verification = IntegralVerification()
    for name, F in integrals.integrals.items():
        verification.integrals[name] = check_integral(g, F, policy)
        logger.debug(f"integral {name}: {verification.integrals[name].state.value}")

    for a, b, rhs in integrals.brackets:
        bracket = poisson_bracket(integrals.integrals[a], integrals.integrals[b]).to_expr()
        label = f"{{{a}, {b}}} = {rhs}"
        verification.identities.append(_identity(label, bracket - _combination(integrals, rhs), integrals, policy))
    for lhs, rhs in integrals.relations:
        label = f"{lhs} = {rhs}"
        difference = _combination(integrals, lhs) - _combination(integrals, rhs)
        verification.identities.append(_identity(label, difference, integrals, policy))
    return verification
