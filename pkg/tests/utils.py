from pathlib import Path

from typer.testing import CliRunner

from geoint.app import app

runner = CliRunner()
CONFIGS = Path(__file__).parent.parent / "configs"


def cmd_args(command, *positional, **kwargs):
    arguments = command.split() + [str(value) for value in positional]
    for key, value in kwargs.items():
        arguments.append(key)
        if isinstance(value, bool):
            continue
        arguments.append(str(value))
    return arguments


def invoke(command, *positional, **kwargs):
    return runner.invoke(app, cmd_args(command, *positional, **kwargs))


def write_config(directory, text, name="metric.cfg"):
    path = Path(directory) / name
    path.write_text(text, encoding="utf-8")
    return path
