"""
classify: dimensions of the Killing and quadratic integral spaces
"""

from pathlib import Path

from geoint.cli.metric_config import MetricConfig
from geoint.errors import InconclusiveError
from geoint.mobility import classify
from geoint.reporting import Report


def run_classify(config_path: Path) -> Report:
    config = MetricConfig.load(config_path)
    g = config.metric()
    policy = config.policy()
    report = Report(
        "classify",
        inputs={"metric": config.to_dict(), "policy": policy.to_dict()},
        seed=policy.seed,
    )
    try:
        result = classify(g, policy)
    except InconclusiveError as exc:
        report.status, report.exit_code = "inconclusive", exc.exit_code
        report.results["reason"] = str(exc)
        report.trace = list(exc.trace)
        return report

    data = result.to_dict()
    report.trace = data.pop("trace")
    data.pop("policy")
    report.results.update(data)
    return report
