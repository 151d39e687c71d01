"""
Report Generator
Structured text reports with a machine-readable JSON section
"""

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from geoint.__version__ import __version__

REPORT_HEADER = "geoint report v1"
SEPARATOR = "-" * 60


@dataclass
class Report:
    command: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    results: Dict[str, Any] = field(default_factory=dict)
    trace: List[Dict[str, Any]] = field(default_factory=list)
    status: str = "ok"
    exit_code: int = 0
    seed: Optional[int] = None
    timing: Optional[float] = None
    version: str = __version__

    def render(self) -> str:
        return ReportGenerator.render(self)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "command": self.command,
            "version": self.version,
            "seed": self.seed,
            "status": self.status,
            "exit_code": self.exit_code,
            "inputs": self.inputs,
            "results": self.results,
            "trace": self.trace,
        }
        if self.timing is not None:
            data["timing"] = round(self.timing, 3)
        return data


def _flatten(data: Any, prefix: str = "") -> List[str]:
    """Nested mappings as dotted `key = value` lines; leaves as compact JSON."""
    if isinstance(data, dict):
        if not data:
            return [f"{prefix} = {{}}"] if prefix else []
        lines = []
        for key in sorted(data, key=str):
            name = f"{prefix}.{key}" if prefix else str(key)
            lines.extend(_flatten(data[key], name))
        return lines
    if isinstance(data, str):
        return [f"{prefix} = {data}"]
    return [f"{prefix} = {json.dumps(data, sort_keys=True, default=str)}"]


class ReportGenerator:
    """Render reports; output depends only on the report's content"""

    @staticmethod
    def render(report: Report) -> str:
        sections = [ReportGenerator._header(report)]
        sections.append(ReportGenerator._section("inputs", _flatten(report.inputs)))
        sections.append(ReportGenerator._section("results", _flatten(report.results)))
        if report.trace:
            sections.append(ReportGenerator._trace(report))
        sections.append(
            ReportGenerator._section(
                "machine-readable", [json.dumps(report.to_dict(), sort_keys=True, indent=2, default=str)]
            )
        )
        return f"\n{SEPARATOR}\n".join(sections) + "\n"

    @staticmethod
    def _header(report: Report) -> str:
        lines = [
            REPORT_HEADER,
            f"command: {report.command}",
            f"version: {report.version}",
            f"seed: {report.seed if report.seed is not None else '-'}",
            f"status: {report.status}",
        ]
        if report.timing is not None:
            lines.append(f"timing: {report.timing:.3f}s")
        return "\n".join(lines)

    @staticmethod
    def _section(title: str, lines: List[str]) -> str:
        return "\n".join([f"[{title}]"] + (lines or ["(none)"]))

    @staticmethod
    def _trace(report: Report) -> str:
        lines = []
        for number, step in enumerate(report.trace, 1):
            line = f"{number}. {step.get('condition', step.get('label', '?'))} -> {step.get('state', '?')}"
            if step.get("witness"):
                point = ", ".join(f"{k}={v}" for k, v in sorted(step["witness"].items()))
                line += f" (witness {point})"
            if step.get("informational"):
                line += " [informational]"
            if step.get("mixed"):
                line += " [mixed]"
            lines.append(line)
        return ReportGenerator._section("trace", lines)
