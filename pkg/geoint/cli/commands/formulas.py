"""
formulas: structural checksums of the stored invariant relations
"""

from geoint.formulas import FORMULA_NAMES, all_structures, formula_symbols
from geoint.reporting import Report


def run_formulas() -> Report:
    structures = all_structures()
    results = {}
    for name in FORMULA_NAMES:
        data = structures[name].to_dict()
        data["symbols"] = list(formula_symbols(name))
        results[name] = data
    report = Report("formulas", results=results)
    if not all(s.homogeneous and s.parity_consistent for s in structures.values()):
        report.status, report.exit_code = "failed", 1
    return report
