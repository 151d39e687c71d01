"""
Degrees of mobility
Decides the dimension of the space of Killing fields (0, 1 or 3) and of
quadratic integrals (1, 2, 3, 4 or 6) from the vanishing pattern of the
differential invariants on the domain box.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from geoint.errors import InconclusiveError
from geoint.expr import Expr, TriState, ZeroPolicy, ZeroTestResult, zero_test
from geoint.geometry import Metric2D, jacobian_invariant, laplacian
from geoint.invariants import (
    GENERICITY_FORMULA,
    I3,
    I4b,
    I5b,
    I5d,
    LAPLACIAN_K_FORMULA,
    DerivedInvariants,
    InvariantFrame,
    derived_invariants,
    invariant_frame,
    modulus_difference,
)
from geoint.utils.logging import get_logger

logger = get_logger()

KILLING_DIMENSIONS = (0, 1, 3)
QUADRATIC_DIMENSIONS = (1, 2, 3, 4, 6)


@dataclass(frozen=True)
class BranchStep:
    condition: str
    state: TriState
    result: Optional[ZeroTestResult] = None
    critical: bool = True

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"condition": self.condition, "state": self.state.value}
        if not self.critical:
            data["informational"] = True
        if self.result is not None:
            data["samples"] = self.result.admissible
            if self.result.witness is not None:
                data["witness"] = self.result.witness_text()
            if self.result.mixed:
                data["mixed"] = True
        return data


@dataclass(frozen=True)
class MobilityReport:
    dim_J1: int
    dim_J2: int
    trace: Tuple[BranchStep, ...]
    policy: ZeroPolicy
    notes: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.dim_J1 not in KILLING_DIMENSIONS:
            raise ValueError(f"dim J1 = {self.dim_J1} is impossible")
        if self.dim_J2 not in QUADRATIC_DIMENSIONS:
            raise ValueError(f"dim J2 = {self.dim_J2} is impossible")
        if (self.dim_J1 == 3) != (self.dim_J2 == 6):
            raise ValueError("dim J1 = 3 exactly when dim J2 = 6")
        if self.dim_J1 == 1 and self.dim_J2 not in (2, 4):
            raise ValueError("a Killing field forces an even degree of mobility")

    @property
    def witnesses(self) -> Dict[str, Dict[str, str]]:
        return {
            step.condition: step.result.witness_text()
            for step in self.trace
            if step.result is not None and step.result.witness is not None
        }

    @property
    def mixed(self) -> Tuple[str, ...]:
        return tuple(step.condition for step in self.trace if step.result is not None and step.result.mixed)

    @property
    def confidence(self) -> str:
        return (
            f"Zero verdicts rest on {self.policy.samples} admissible samples "
            f"({self.policy.mode.value} mode, seed {self.policy.seed}); "
            "Nonzero verdicts are certified by a witness point"
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dim_J1": self.dim_J1,
            "dim_J2": self.dim_J2,
            "trace": [step.to_dict() for step in self.trace],
            "witnesses": self.witnesses,
            "mixed": list(self.mixed),
            "notes": list(self.notes),
            "confidence": self.confidence,
            "policy": self.policy.to_dict(),
        }


class MobilityClassifier:
    """Runs the decision tree, building invariant frames only as deep as needed."""

    def __init__(self, g: Metric2D, policy: ZeroPolicy, frame: Optional[InvariantFrame] = None):
        self.metric = g
        self.policy = policy
        self._frame = frame
        self._derived: Optional[DerivedInvariants] = None
        self.trace: List[BranchStep] = []
        self.notes: List[str] = []

    def frame(self, order: int) -> InvariantFrame:
        if self._frame is None:
            self._frame = invariant_frame(self.metric, order)
        elif self._frame.max_order < order:
            self._frame = self._frame.extended(order)
        return self._frame

    @property
    def derived(self) -> DerivedInvariants:
        if self._derived is None:
            self._derived = derived_invariants()
        return self._derived

    def _record(self, condition: str, result: ZeroTestResult, critical: bool = True) -> TriState:
        self.trace.append(BranchStep(condition, result.state, result, critical))
        logger.log_branch(condition, result.state.value)
        if critical and result.state is TriState.UNDECIDED:
            raise InconclusiveError(
                f"could not decide whether {condition} on the domain box", [s.to_dict() for s in self.trace]
            )
        return result.state

    def vanishes(self, label: str, e: Expr, order: int, critical: bool = True) -> bool:
        frame = self.frame(order)
        return self._record(label, frame.zero_test(e, self.policy, label), critical) is TriState.ZERO

    def _jacobian_checks(self) -> None:
        """The Killing criterion restated through normalised Jacobians."""
        frame = self.frame(5)
        g, K = self.metric, frame.K
        pairs = (
            ("Jac(K, I3) = 2 I4b", jacobian_invariant(g, K, frame["I3"], K), 2 * I4b),
            (
                "Jac(K, Laplacian K) = (I5b + I5d)/I3",
                jacobian_invariant(g, K, laplacian(g, K), K),
                (I5b + I5d) / I3,
            ),
        )
        for label, jacobian, formula in pairs:
            residual = _residual(frame, jacobian, formula, self.policy)
            self._record(label, zero_test(residual, self.policy, label), critical=False)

    def killing_dimension(self) -> int:
        if self.vanishes("I3 = 0", self.frame(3)["I3"], 3):
            return 3
        self._jacobian_checks()
        frame = self.frame(5)
        if self.vanishes("I4b = 0", frame["I4b"], 5) and self.vanishes("I5d = 0", frame["I5d"], 5):
            return 1
        return 0

    def classify(self) -> MobilityReport:
        if self.vanishes("I3 = 0", self.frame(3)["I3"], 3):
            self.notes.append("constant curvature: space form")
            return self._report(3, 6)

        self._jacobian_checks()
        frame = self.frame(5)
        if self.vanishes("I4b = 0", frame["I4b"], 5):
            liouville = self.vanishes("I5d = 0", frame["I5d"], 5)
            dim_j1 = 1 if liouville else 0
            generic = not self.vanishes(
                "I4c(2 I4a + 3 I4c) - 5 I2 I3^3 = 0", GENERICITY_FORMULA, 5, critical=False
            )
            if generic:
                self.notes.append("genericity holds: I4b = 0 and J4 = 0 would already force J5 = 0")
            if self.vanishes("J5 = 0", self.derived.J5, 5) and self.vanishes("J4 = 0", self.derived.J4, 5):
                return self._report(dim_j1, 4)
            self.notes.append(
                "singular locus I4b = 0: Liouville iff I5d = 0, with exactly one extra quadratic integral"
            )
            return self._report(dim_j1, 2 if liouville else 1)

        derived = self.derived
        if all(self.vanishes(f"V{k + 1} = 0", v, 6) for k, v in enumerate(derived.V)):
            return self._report(0, 3)

        frame = self.frame(7)
        modulus = modulus_difference(frame, derived)
        label = "|A|^2 - |B|^2 = 0"
        if self._record(label, zero_test(lambda p: modulus(p, self.policy), self.policy, label)) is not TriState.ZERO:
            return self._report(0, 1)
        for relation_label, relation in derived.main_relations.items():
            if not self.vanishes(f"{relation_label} = 0", relation, 7):
                return self._report(0, 1)
        return self._report(0, 2)

    def _report(self, dim_j1: int, dim_j2: int) -> MobilityReport:
        return MobilityReport(dim_j1, dim_j2, tuple(self.trace), self.policy, tuple(self.notes))


def _residual(frame: InvariantFrame, e: Expr, formula: Expr, policy: ZeroPolicy):
    return lambda point: frame.evaluate_expr(e, point, policy) - frame.evaluate_formula(formula, point, policy)


def killing_dimension(g: Metric2D, policy: ZeroPolicy) -> int:
    """
    Dimension of the space of local Killing fields: 3 for constant curvature,
    1 when I4b and I5d vanish identically, 0 otherwise.
    """
    g.validate(policy)
    return MobilityClassifier(g, policy).killing_dimension()


def classify(g: Metric2D, policy: ZeroPolicy, frame: Optional[InvariantFrame] = None) -> MobilityReport:
    """
    Degrees of mobility of a metric

    Args:
        g: Riemannian metric
        policy: zero-test policy over the domain box
        frame: optional precomputed invariant frame

    Returns:
        MobilityReport with dim J1, dim J2 and the branch trace

    Raises:
        InconclusiveError: a zero test on the decision path was Undecided
    """
    g.validate(policy)
    return MobilityClassifier(g, policy, frame).classify()


def laplacian_check(frame: InvariantFrame, policy: ZeroPolicy) -> ZeroTestResult:
    """Laplacian of K against (I4a + I4c)/I3."""
    residual = _residual(frame, laplacian(frame.metric, frame.K), LAPLACIAN_K_FORMULA, policy)
    return zero_test(residual, policy, "Laplacian K = (I4a + I4c)/I3")
