from pathlib import Path

import pytest
import sympy
from click import UsageError

from geoint.cli.commands import parse_point
from geoint.cli.metric_config import MetricConfig, parse_ansatz_ranges
from geoint.config import Config
from geoint.errors import InputError
from geoint.expr import EvaluationMode, coordinate

from .utils import CONFIGS

x, y = coordinate("x"), coordinate("y")


def test_every_shipped_config_loads():
    for path in sorted(CONFIGS.glob("*.cfg")):
        config = MetricConfig.load(path)
        config.metric()
        config.policy()


def test_parameters_are_substituted():
    config = MetricConfig.load(CONFIGS / "quadratic-family.cfg")
    assert config.parameters == {"a": 2, "b": 0, "c": 0}
    assert config.metric().g11 == x**2 + 2 * y**2


def test_zero_section():
    config = MetricConfig.load(CONFIGS / "float-mode.cfg")
    policy = config.policy()
    assert policy.mode is EvaluationMode.FLOAT
    assert policy.tolerance == 1e-40
    assert config.policy(seed=11).seed == 11


def test_box_and_ansatz():
    config = MetricConfig.load(CONFIGS / "g0.cfg")
    assert config.policy().interval("x") == (1, 2)
    spec = config.ansatz_spec(2)
    assert spec.ranges == (("x", -1, 1), ("y", 0, 2))
    assert config.ansatz_spec(2, {"y": (0, 4)}).ranges == (("x", -1, 1), ("y", 0, 4))
    assert MetricConfig.parse("g11 = 1\ng22 = 1\n").ansatz_spec(3).total_degree == 3


def test_quoted_values_and_comments():
    config = MetricConfig.parse("# comment\ng11 = \"x\"\ng22 = 'x'\norientation = -1\n")
    g = config.metric()
    assert g.g11 == x
    assert g.orientation == -1


def test_custom_coordinates():
    config = MetricConfig.parse("coordinates = u, v\ng11 = u\ng22 = u\nbox.u = 1, 3\n")
    assert config.metric().coordinates == ("u", "v")
    assert config.policy().interval("u") == (1, 3)


@pytest.mark.parametrize(
    "text",
    [
        "g11 = 1\n",
        "g11 = 1\ng22 = 1\ng22 = 2\n",
        "g11 = 1\ng22 = 1\nbogus = 3\n",
        "g11 = 1\ng22 = 1\nnot a pair\n",
        "g11 = 1\ng22 = 1\norientation = 2\n",
        "g11 = 1\ng22 = 1\nsignature = euclidean\n",
        "g11 = 1\ng22 = 1\nparam.a = sqrt(2)\n",
        "g11 = 1\ng22 = 1\nparam.x = 1\n",
        "g11 = 1\ng22 = 1\nbox.z = 0, 1\n",
        "g11 = 1\ng22 = 1\nbox.x = 0\n",
        "g11 = 1\ng22 = 1\nansatz.x = a, b\n",
        "g11 = 1\ng22 = 1\ncoordinates = x\n",
    ],
)
def test_malformed_configs(text):
    with pytest.raises(InputError):
        MetricConfig.parse(text)


def test_invalid_zero_setting():
    config = MetricConfig.parse("g11 = 1\ng22 = 1\nzero.samples = many\n")
    with pytest.raises(InputError):
        config.policy()


def test_missing_config(tmp_path):
    with pytest.raises(InputError):
        MetricConfig.load(tmp_path / "none.cfg")


def test_parse_ansatz_ranges():
    assert parse_ansatz_ranges("x=-2:2, y=0:4") == {"x": (-2, 2), "y": (0, 4)}
    with pytest.raises(InputError):
        parse_ansatz_ranges("x")


def test_parse_point():
    assert parse_point("1, 3/2", ("x", "y")) == {"x": 1, "y": sympy.Rational(3, 2)}
    with pytest.raises(InputError):
        parse_point("1", ("x", "y"))
    with pytest.raises(InputError):
        parse_point("1, sqrt(2)", ("x", "y"))


def test_runtime_config_file(tmp_path, monkeypatch):
    monkeypatch.delenv("GEOINT_SAMPLES", raising=False)
    path = tmp_path / "geoint" / ".geointrc"
    config = Config(path, GEOINT_SAMPLES="7", GEOINT_LOG_DIR="")
    config.save()
    assert path.read_text(encoding="utf-8") == "GEOINT_SAMPLES=7\nGEOINT_LOG_DIR=\n"

    path.write_text("# local overrides\nGEOINT_SAMPLES=9\n", encoding="utf-8")
    assert Config(path, GEOINT_SAMPLES="7").get_int("GEOINT_SAMPLES") == 9

    monkeypatch.setenv("GEOINT_SAMPLES", "3")
    assert Config(path, GEOINT_SAMPLES="7").get_int("GEOINT_SAMPLES") == 3


def test_runtime_config_errors(tmp_path, monkeypatch):
    monkeypatch.delenv("GEOINT_SEED", raising=False)
    monkeypatch.delenv("GEOINT_LOG_DIR", raising=False)
    config = Config(Path(tmp_path / "absent"), GEOINT_SEED="zero", GEOINT_LOG_DIR="")
    with pytest.raises(UsageError):
        config.get_int("GEOINT_SEED")
    with pytest.raises(UsageError):
        config.get("GEOINT_MISSING")
    assert config.get("GEOINT_LOG_DIR") == ""
