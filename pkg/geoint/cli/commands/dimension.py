"""
dimension: exact lower bound on the space of degree-n integrals
"""

from pathlib import Path
from typing import Optional

from geoint.cli.metric_config import MetricConfig, parse_ansatz_ranges
from geoint.expr import TriState
from geoint.oracle import integral_space_dimension
from geoint.reporting import Report


def run_dimension(
    config_path: Path,
    degree: int,
    ansatz: Optional[str] = None,
    max_basis: Optional[int] = None,
    verify: bool = False,
) -> Report:
    config = MetricConfig.load(config_path)
    g = config.metric()
    spec = config.ansatz_spec(degree, parse_ansatz_ranges(ansatz) if ansatz else None, max_basis)
    result = integral_space_dimension(g, degree, spec)

    report = Report(
        "dimension",
        inputs={"metric": config.to_dict(), "degree": degree, "ansatz": spec.to_dict()},
        results=result.to_dict(),
    )
    if verify:
        policy = config.policy()
        report.seed = policy.seed
        state = result.verify(g, policy)
        report.results["verified"] = state.value
        if state is not TriState.ZERO:
            report.status, report.exit_code = "failed", 1
    return report
