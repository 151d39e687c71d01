"""
examples: list, show and replay the example catalog
"""

from typing import Optional

from geoint.catalog import EXAMPLES, get_example, run_all, run_example
from geoint.errors import InconclusiveError, InputError
from geoint.reporting import Report


def run_list() -> Report:
    return Report(
        "examples list",
        results={example.name: example.description for example in EXAMPLES},
    )


def run_show(name: str) -> Report:
    example = get_example(name)
    policy = example.policy()
    return Report(
        "examples show",
        inputs={"name": name},
        results={**example.to_dict(), "policy": policy.to_dict()},
        seed=policy.seed,
    )


def run_examples(name: Optional[str] = None, run_everything: bool = False, seed: Optional[int] = None) -> Report:
    overrides = {} if seed is None else {"seed": seed}
    if run_everything:
        outcomes = run_all(overrides)
        report = Report(
            "examples run",
            inputs={"all": True},
            results={key: outcome.to_dict() for key, outcome in outcomes.items()},
            seed=seed,
        )
        if not all(outcome.passed for outcome in outcomes.values()):
            report.status, report.exit_code = "failed", 1
        return report

    if name is None:
        raise InputError("name an example or pass --all")
    example = get_example(name)
    policy = example.policy(**overrides)
    report = Report("examples run", inputs={"name": name}, seed=policy.seed)
    try:
        outcome = run_example(example, policy)
    except InconclusiveError as exc:
        report.status, report.exit_code = "inconclusive", exc.exit_code
        report.results["reason"] = str(exc)
        report.trace = list(exc.trace)
        return report
    report.results = outcome.to_dict()
    if not outcome.passed:
        report.status, report.exit_code = "failed", 1
    return report
