"""
verify: check candidate integrals, brackets and relations
"""

from pathlib import Path

from geoint.cli.metric_config import MetricConfig
from geoint.expr import TriState
from geoint.integrals import load_integrals, verify_integrals
from geoint.reporting import Report


def run_verify(config_path: Path, integral_path: Path) -> Report:
    config = MetricConfig.load(config_path)
    g = config.metric()
    policy = config.policy()
    g.validate(policy)
    integrals = load_integrals(integral_path, g.coordinates, config.parameters)
    verification = verify_integrals(g, integrals, policy)

    report = Report(
        "verify",
        inputs={
            "metric": config.to_dict(),
            "integrals": str(integral_path),
            "policy": policy.to_dict(),
        },
        results=verification.to_dict(),
        seed=policy.seed,
    )
    report.trace = [
        {"label": f"{{H, {name}}} = 0", "state": check.state.value}
        for name, check in verification.integrals.items()
    ] + [check.to_dict() for check in verification.identities]
    if verification.state is TriState.UNDECIDED:
        report.status, report.exit_code = "inconclusive", 1
    elif verification.state is TriState.NONZERO:
        report.status, report.exit_code = "failed", 1
    return report
