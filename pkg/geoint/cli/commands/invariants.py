"""
invariants: values of the differential invariants at a point
"""

from pathlib import Path
from typing import Optional

from geoint.cli.commands import parse_point, point_text
from geoint.cli.metric_config import MetricConfig
from geoint.expr import to_text
from geoint.invariants import INVARIANT_CONVENTION, identity_suite, invariant_frame
from geoint.reporting import Report


def run_invariants(
    config_path: Path,
    order: int = 4,
    at: Optional[str] = None,
    identities: bool = False,
) -> Report:
    config = MetricConfig.load(config_path)
    g = config.metric()
    policy = config.policy()
    g.validate(policy)

    frame = invariant_frame(g, order)
    point = parse_point(at, g.coordinates) if at else next(policy.points())
    values = frame.values_at(point, policy)

    report = Report(
        "invariants",
        inputs={
            "metric": config.to_dict(),
            "order": order,
            "point": point_text(point),
            "policy": policy.to_dict(),
        },
        seed=policy.seed,
    )
    report.results["curvature"] = to_text(frame.K)
    report.results["convention"] = INVARIANT_CONVENTION
    report.results["values"] = {name: str(value) for name, value in values.items()}

    if identities:
        suite = identity_suite(frame, policy, max(order, 5))
        report.results["identities"] = suite.to_dict()
        report.trace = [check.to_dict() for check in suite]
        if not suite.passed and not suite.degenerate:
            report.status, report.exit_code = "failed", 1
    return report
