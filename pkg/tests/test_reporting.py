import json

from geoint.reporting import Report, ReportGenerator
from geoint.reporting.generator import REPORT_HEADER, SEPARATOR


def sample_report(**kwargs):
    return Report(
        "classify",
        inputs={"metric": {"g11": "x", "g22": "x"}, "order": 4},
        results={"dim_J1": 1, "dim_J2": 4, "notes": ["space form"]},
        trace=[
            {"condition": "I3 = 0", "state": "Nonzero", "witness": {"y": "3/2", "x": "1"}},
            {"condition": "Jac(K, I3) = 2 I4b", "state": "Zero", "informational": True},
        ],
        seed=0,
        **kwargs,
    )


def test_header_and_sections():
    text = sample_report().render()
    lines = text.splitlines()
    assert lines[:5] == [REPORT_HEADER, "command: classify", lines[2], "seed: 0", "status: ok"]
    assert text.count(SEPARATOR) == 4
    for section in ("[inputs]", "[results]", "[trace]", "[machine-readable]"):
        assert section in lines


def test_flattened_values():
    text = sample_report().render()
    assert "metric.g11 = x" in text
    assert "order = 4" in text
    assert 'notes = ["space form"]' in text


def test_trace_lines():
    text = sample_report().render()
    assert "1. I3 = 0 -> Nonzero (witness x=1, y=3/2)" in text
    assert "2. Jac(K, I3) = 2 I4b -> Zero [informational]" in text


def test_machine_readable_section():
    report = sample_report(status="inconclusive", exit_code=1)
    data = json.loads(report.render().split("[machine-readable]\n", 1)[1])
    assert data == json.loads(json.dumps(report.to_dict(), sort_keys=True))
    assert data["exit_code"] == 1
    assert "timing" not in data


def test_timing_only_when_set():
    assert "timing:" not in sample_report().render()
    report = sample_report(timing=1.23456)
    assert "timing: 1.235s" in report.render()
    assert report.to_dict()["timing"] == 1.235


def test_render_is_pure():
    report = sample_report()
    assert ReportGenerator.render(report) == report.render()


def test_empty_sections():
    text = Report("formulas").render()
    assert "[inputs]\n(none)" in text
    assert "[trace]" not in text
