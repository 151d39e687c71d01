import json

import pytest

from geoint import run_command
from geoint.__version__ import __version__

from .utils import CONFIGS, invoke, write_config


def machine_readable(output):
    return json.loads(output.split("[machine-readable]\n", 1)[1])


def test_version():
    result = invoke("--version")
    assert result.exit_code == 0
    assert __version__ in result.stdout
    assert run_command(["--version"]) == (None, 0)


def test_invariants_flat():
    report, code = run_command(["invariants", str(CONFIGS / "flat.cfg")])
    assert code == 0
    assert report.results["curvature"] == "0"
    assert set(report.results["values"].values()) == {"0"}


def test_invariants_at_point():
    report, code = run_command(["invariants", str(CONFIGS / "sphere.cfg"), "--at", "0,0", "--order", "3"])
    assert code == 0
    assert report.inputs["point"] == {"x": "0", "y": "0"}
    assert report.results["values"] == {"I2": "1", "I3": "0"}


def test_invariants_report_layout():
    result = invoke("invariants", CONFIGS / "flat.cfg")
    assert result.exit_code == 0
    assert result.stdout.startswith("geoint report v1\ncommand: invariants\n")
    data = machine_readable(result.stdout)
    assert data["command"] == "invariants"
    assert data["exit_code"] == 0
    assert "timing" not in data


def test_reports_are_deterministic():
    first = invoke("classify", CONFIGS / "g0.cfg")
    second = invoke("classify", CONFIGS / "g0.cfg")
    assert first.stdout == second.stdout


def test_timing_is_opt_in():
    result = invoke("--timing classify", CONFIGS / "sphere.cfg")
    assert result.exit_code == 0
    assert "timing: " in result.stdout


@pytest.mark.slow
def test_identity_suite_from_cli():
    config = str(CONFIGS / "generic-liouville.cfg")
    report, code = run_command(["invariants", config, "--order", "5", "--identities"])
    assert code == 0
    assert report.results["identities"]["passed"] is True


@pytest.mark.parametrize(
    "config, expected",
    [("g0.cfg", (1, 4)), ("sphere.cfg", (3, 6)), ("beta-family.cfg", (1, 4))],
)
def test_classify(config, expected):
    report, code = run_command(["classify", str(CONFIGS / config)])
    assert code == 0
    assert (report.results["dim_J1"], report.results["dim_J2"]) == expected
    assert report.trace[0]["condition"] == "I3 = 0"


def test_classify_inconclusive(tmp_path):
    config = write_config(tmp_path, "g11 = 2 + sin(x)\ng22 = 2 + sin(x)\n")
    report, code = run_command(["classify", str(config)])
    assert code == 1
    assert report.status == "inconclusive"
    assert report.trace


def test_verify_g0_integrals():
    report, code = run_command(["verify", str(CONFIGS / "g0.cfg"), str(CONFIGS / "g0.integrals")])
    assert code == 0
    assert report.results["state"] == "Zero"
    assert report.results["integrals"] == {"H": "Zero", "K": "Zero", "F": "Zero", "G": "Zero"}


def test_verify_failure(tmp_path):
    integrals = write_config(tmp_path, "[P]\n1 0 = 1\n", "bad.integrals")
    report, code = run_command(["verify", str(CONFIGS / "g0.cfg"), str(integrals)])
    assert code == 1
    assert report.status == "failed"


def test_dimension():
    report, code = run_command(["dimension", str(CONFIGS / "g0.cfg"), "--degree", "2", "--verify"])
    assert code == 0
    assert report.results["dimension"] == 4
    assert report.results["verified"] == "Zero"
    assert report.inputs["ansatz"]["x"] == "-1:1"


def test_dimension_with_ansatz_override():
    report, code = run_command(["dimension", str(CONFIGS / "flat.cfg"), "-n", "2", "--ansatz", "x=0:2,y=0:2"])
    assert code == 0
    # full exponent box holds more than the total-degree ansatz
    assert report.results["dimension"] >= 6


def test_dimension_basis_cap():
    result = invoke("dimension", CONFIGS / "flat.cfg", "-n", "3", "--max-basis", "5")
    assert result.exit_code == 2


def test_formulas():
    report, code = run_command(["formulas"])
    assert code == 0
    assert report.results["Jfrak1"]["weight"] == [30]
    assert "I7a" in report.results["Jfrak1"]["symbols"]


def test_examples_list_and_show():
    report, code = run_command(["examples", "list"])
    assert code == 0
    assert "g0" in report.results
    report, code = run_command(["examples", "show", "beta-3"])
    assert code == 0
    assert report.results["expected"] == {"dim_J1": 1, "dim_J2": 2}


def test_examples_run():
    report, code = run_command(["examples", "run", "beta-1", "--seed", "5"])
    assert code == 0
    assert report.seed == 5
    assert report.results["passed"] is True


@pytest.mark.parametrize(
    "argv",
    [
        ["examples", "run", "torus"],
        ["examples", "run"],
        ["classify", "missing.cfg"],
        ["dimension", str(CONFIGS / "g0.cfg")],
        ["invariants", str(CONFIGS / "flat.cfg"), "--order", "9"],
        ["nonsense"],
    ],
)
def test_input_errors_exit_two(argv):
    _, code = run_command(argv)
    assert code == 2


def test_unknown_identifier_in_config(tmp_path):
    config = write_config(tmp_path, "g11 = x + z\ng22 = 1\n")
    report, code = run_command(["classify", str(config)])
    assert code == 2
    assert report.status == "error"
    assert "position 4" in report.results["error"]


def test_error_exit_code_through_runner(tmp_path):
    config = write_config(tmp_path, "g11 = 1\ng22 = 1\ncolour = red\n")
    result = invoke("classify", config)
    assert result.exit_code == 2


def test_error_report_goes_to_stdout(tmp_path):
    config = write_config(tmp_path, "g11 = x + z\ng22 = 1\n")
    result = invoke("classify", config)
    assert result.exit_code == 2
    assert result.stdout.startswith("geoint report v1\ncommand: classify\n")
    data = machine_readable(result.stdout)
    assert data["status"] == "error"
    assert data["exit_code"] == 2
    assert data["results"]["error_type"] == "UnknownIdentifierError"
    assert "position 4" in data["results"]["error"]
