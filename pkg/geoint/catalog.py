"""
Example catalog
Worked metrics with known degrees of mobility, oracle dimensions or
integrals. `examples run --all` replays the whole catalog as a regression
suite.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import sympy

from geoint.errors import InconclusiveError, InputError
from geoint.expr import EvaluationMode, ZeroPolicy, coordinate
from geoint.geometry import Metric2D
from geoint.integrals import parse_integrals, verify_integrals
from geoint.mobility import classify
from geoint.oracle import AnsatzSpec, integral_space_dimension
from geoint.utils.logging import get_logger

logger = get_logger()

x, y = coordinate("x"), coordinate("y")

UNIT_BOX = (("x", 1, 2), ("y", 1, 2))
# exponential metrics stay exact on the line x = 0
PINNED_BOX = (("x", 0, 0), ("y", 1, 2))

G0_INTEGRALS = """\
# x(dx^2 + dy^2): four quadratic integrals built from H and the momentum K
[H]
2 0 = 1/x
0 2 = 1/x
[K]
0 1 = 1
[F]
2 0 = y/x
1 1 = -2
0 2 = y/x
[G]
2 0 = y^2/x
1 1 = -4*y
0 2 = y^2/x + 4*x
bracket K F = H
bracket K G = 2*F
bracket G F = 16*K^3
relation H*G - F^2 = 4*K^4
"""


class ExampleKind(str, Enum):
    CLASSIFY = "classify"
    INTEGRALS = "integrals"


@dataclass(frozen=True)
class DimensionCheck:
    degree: int
    expected: int
    ansatz: AnsatzSpec


@dataclass(frozen=True)
class Example:
    name: str
    description: str
    metric: Metric2D
    kind: ExampleKind = ExampleKind.CLASSIFY
    box: Tuple[Tuple[str, Any, Any], ...] = UNIT_BOX
    mode: EvaluationMode = EvaluationMode.EXACT
    expected: Optional[Tuple[int, int]] = None
    dimensions: Tuple[DimensionCheck, ...] = ()
    integrals: str = ""

    def policy(self, **overrides: Any) -> ZeroPolicy:
        values: Dict[str, Any] = {"mode": self.mode, "box": self.box}
        values.update(overrides)
        return ZeroPolicy.from_settings(self.metric.coordinates, **values)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "name": self.name,
            "kind": self.kind.value,
            "description": self.description,
            "metric": self.metric.to_dict(),
        }
        if self.expected is not None:
            data["expected"] = {"dim_J1": self.expected[0], "dim_J2": self.expected[1]}
        if self.dimensions:
            data["dimensions"] = {str(check.degree): check.expected for check in self.dimensions}
        return data


@dataclass
class ExampleOutcome:
    name: str
    passed: bool
    results: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"passed": self.passed, **self.results}


def beta_metric(beta) -> Metric2D:
    """e^((b+2)x) dx^2 + e^(bx) dy^2"""
    beta = sympy.Rational(beta)
    return Metric2D(sympy.exp((beta + 2) * x), 0, sympy.exp(beta * x))


def liouville_metric(f, h) -> Metric2D:
    """(f(x) + h(y))(dx^2 + dy^2)"""
    return Metric2D.conformal(sympy.sympify(f) + sympy.sympify(h))


def quadratic_family_metric(a, b, c) -> Metric2D:
    """(x^2 + a y^2 + b y + c)(dx^2 + dy^2)"""
    a, b, c = (sympy.Rational(v) for v in (a, b, c))
    return liouville_metric(x**2, a * y**2 + b * y + c)


G0 = Metric2D.conformal(x)
G0_SMALL_ANSATZ = AnsatzSpec((("x", -1, 1), ("y", 0, 2)))


def _beta(name: str, beta, expected: Tuple[int, int]) -> Example:
    return Example(
        name,
        f"e^(({beta}+2)x) dx^2 + e^({beta}x) dy^2",
        beta_metric(beta),
        box=PINNED_BOX,
        expected=expected,
    )


def _quadratic(name: str, abc, expected: Tuple[int, int]) -> Example:
    a, b, c = abc
    return Example(
        name,
        f"(x^2 + {a} y^2 + {b} y + {c})(dx^2 + dy^2)",
        quadratic_family_metric(a, b, c),
        expected=expected,
    )


EXAMPLES: Tuple[Example, ...] = (
    Example(
        "flat",
        "dx^2 + dy^2",
        Metric2D(1, 0, 1),
        expected=(3, 6),
        dimensions=tuple(DimensionCheck(n, (n + 1) * (n + 2) // 2, AnsatzSpec.polynomial(n)) for n in (1, 2)),
    ),
    Example("sphere", "4(1 + x^2 + y^2)^-2 (dx^2 + dy^2)", Metric2D.conformal(4 / (1 + x**2 + y**2) ** 2), expected=(3, 6)),
    _beta("beta-minus2", -2, (3, 6)),
    _beta("beta-1", 1, (1, 4)),
    _beta("beta-3", 3, (1, 2)),
    _beta("beta-6", 6, (1, 2)),
    _quadratic("q2-1-0-0", (1, 0, 0), (3, 6)),
    _quadratic("q2-1-0-1", (1, 0, 1), (1, 4)),
    _quadratic("q2-4-0-0", (4, 0, 0), (0, 3)),
    _quadratic("q2-quarter-1-1", (sympy.Rational(1, 4), 1, 1), (0, 3)),
    _quadratic("q2-2-0-0", (2, 0, 0), (0, 2)),
    Example(
        "g0",
        "x(dx^2 + dy^2)",
        G0,
        expected=(1, 4),
        dimensions=(DimensionCheck(2, 4, G0_SMALL_ANSATZ), DimensionCheck(3, 4, G0_SMALL_ANSATZ)),
    ),
    Example("generic-liouville", "(x^2 + y^3 + 1)(dx^2 + dy^2)", liouville_metric(x**2, y**3 + 1), expected=(0, 2)),
    Example("nonkilling", "(x^2 + y^3 + 5)(dx^2 + dy^2)", liouville_metric(x**2, y**3 + 5), expected=(0, 2)),
    Example(
        "g0-integrals",
        "H, K, F, G on x(dx^2 + dy^2) and their brackets",
        G0,
        kind=ExampleKind.INTEGRALS,
        integrals=G0_INTEGRALS,
    ),
)


def example_names() -> Tuple[str, ...]:
    return tuple(example.name for example in EXAMPLES)


def get_example(name: str) -> Example:
    for example in EXAMPLES:
        if example.name == name:
            return example
    raise InputError(f"unknown example {name!r}; available: {', '.join(example_names())}")


def run_example(example: Example, policy: Optional[ZeroPolicy] = None) -> ExampleOutcome:
    """
    Replay one catalog entry

    Classification entries compare dim J1 and dim J2 with the expected pair and
    rerun their oracle dimensions; integral entries verify every integral,
    bracket and relation.

    Raises:
        InconclusiveError: a zero test on the classifier's path was Undecided
    """
    policy = policy or example.policy()
    outcome = ExampleOutcome(example.name, True)

    if example.kind is ExampleKind.INTEGRALS:
        verification = verify_integrals(example.metric, parse_integrals(example.integrals), policy)
        outcome.results["verification"] = verification.to_dict()
        outcome.passed = verification.passed
    else:
        report = classify(example.metric, policy)
        outcome.results["classification"] = {"dim_J1": report.dim_J1, "dim_J2": report.dim_J2}
        if example.expected is not None:
            outcome.passed = (report.dim_J1, report.dim_J2) == example.expected

    for check in example.dimensions:
        result = integral_space_dimension(example.metric, check.degree, check.ansatz)
        outcome.results[f"dimension_{check.degree}"] = result.dimension
        outcome.passed = outcome.passed and result.dimension == check.expected

    logger.info(f"example {example.name}: {'pass' if outcome.passed else 'FAIL'}")
    return outcome


def run_all(policy_overrides: Optional[Dict[str, Any]] = None) -> Dict[str, ExampleOutcome]:
    outcomes = {}
    for example in EXAMPLES:
        try:
            outcomes[example.name] = run_example(example, example.policy(**(policy_overrides or {})))
        except InconclusiveError as exc:
            outcomes[example.name] = ExampleOutcome(example.name, False, {"inconclusive": str(exc)})
    return outcomes
