import sys
import time
from functools import wraps
from pathlib import Path
from typing import Any, Callable, List, Optional, Sequence, Tuple

import click
import typer

from geoint.__version__ import __version__
from geoint.catalog import EXAMPLES
from geoint.cli.commands.classify import run_classify
from geoint.cli.commands.dimension import run_dimension
from geoint.cli.commands.examples import run_examples, run_list, run_show
from geoint.cli.commands.formulas import run_formulas
from geoint.cli.commands.invariants import run_invariants
from geoint.cli.commands.verify import run_verify
from geoint.cli.formatter import GeoFormatter
from geoint.config import cfg
from geoint.errors import GeointError, InconclusiveError
from geoint.oracle import MAX_DEGREE
from geoint.reporting import Report
from geoint.utils.logging import get_logger

logger = get_logger()

app = typer.Typer(
    help="Integrals of geodesic flows of two-dimensional metrics.",
    add_completion=False,
    no_args_is_help=True,
)
examples_app = typer.Typer(help="The built-in example catalog.", no_args_is_help=True)
app.add_typer(examples_app, name="examples")


def show_version(value: bool) -> None:
    if value:
        typer.echo(f"geoint {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    ctx: typer.Context,
    timing: bool = typer.Option(False, "--timing", help="Add wall-clock timing to reports."),
    log_level: str = typer.Option(
        cfg.get("GEOINT_LOG_LEVEL"),
        "--log-level",
        help="Console log level (stderr).",
    ),
    version: bool = typer.Option(
        False,
        "--version",
        callback=show_version,
        is_eager=True,
        help="Show version and exit.",
    ),
) -> None:
    log_dir = cfg.get("GEOINT_LOG_DIR")
    logger.setup(log_dir=Path(log_dir) if log_dir else None, console_level=log_level)
    ctx.ensure_object(dict)
    ctx.obj["timing"] = timing


def reported(name: str) -> Callable:
    """Run a report builder: print the report, map errors and status to exit codes."""

    def decorator(func: Callable[..., Report]) -> Callable:
        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> None:
            ctx = click.get_current_context()
            state = ctx.ensure_object(dict)
            started = time.perf_counter()
            try:
                report = func(*args, **kwargs)
            except InconclusiveError as exc:
                GeoFormatter.print_inconclusive(str(exc))
                report = Report(name, status="inconclusive", exit_code=exc.exit_code, trace=list(exc.trace))
                report.results["reason"] = str(exc)
            except GeointError as exc:
                GeoFormatter.print_error(str(exc))
                report = Report(name, status="error", exit_code=exc.exit_code)
                report.results["error"] = str(exc)
                report.results["error_type"] = type(exc).__name__
                state["report"] = report
                typer.echo(report.render(), nl=False)
                logger.log_command(name, report.exit_code)
                raise typer.Exit(report.exit_code)

            if state.get("timing"):
                report.timing = time.perf_counter() - started
            state["report"] = report
            typer.echo(report.render(), nl=False)
            logger.log_command(name, report.exit_code, {"status": report.status})
            if report.exit_code:
                raise typer.Exit(report.exit_code)

        return wrapper

    return decorator


@app.command()
@reported("invariants")
def invariants(
    config: Path = typer.Argument(..., help="Metric configuration file."),
    order: int = typer.Option(4, "--order", min=2, max=7, help="Highest differential order."),
    at: Optional[str] = typer.Option(None, "--at", help="Exact point 'x,y'; default is the first sample."),
    identities: bool = typer.Option(False, "--identities", help="Also run the identity suite."),
) -> Report:
    """Values of K and the invariants I2..I7 at a point."""
    return run_invariants(config, order, at, identities)


@app.command("classify")
@reported("classify")
def classify_command(
    config: Path = typer.Argument(..., help="Metric configuration file."),
) -> Report:
    """Dimensions of the spaces of Killing fields and quadratic integrals."""
    return run_classify(config)


@app.command()
@reported("verify")
def verify(
    config: Path = typer.Argument(..., help="Metric configuration file."),
    integrals: Path = typer.Argument(..., help="Integral file."),
) -> Report:
    """Check that polynomials in the momenta are first integrals."""
    return run_verify(config, integrals)


@app.command()
@reported("dimension")
def dimension(
    config: Path = typer.Argument(..., help="Metric configuration file."),
    degree: int = typer.Option(..., "--degree", "-n", min=1, max=MAX_DEGREE, help="Degree in the momenta."),
    ansatz: Optional[str] = typer.Option(None, "--ansatz", help="Exponent ranges 'x=lo:hi,y=lo:hi'."),
    max_basis: Optional[int] = typer.Option(None, "--max-basis", min=1, help="Cap on unknowns."),
    verify_basis: bool = typer.Option(False, "--verify", help="Re-check every basis integral."),
) -> Report:
    """Lower bound on the number of independent degree-n integrals."""
    return run_dimension(config, degree, ansatz, max_basis, verify_basis)


@app.command()
@reported("formulas")
def formulas() -> Report:
    """Structural checksums of the stored invariant relations."""
    return run_formulas()


@examples_app.command("list")
@reported("examples list")
def examples_list() -> Report:
    """List the catalog."""
    GeoFormatter.print_examples(EXAMPLES)
    return run_list()


@examples_app.command("show")
@reported("examples show")
def examples_show(name: str = typer.Argument(..., help="Example name.")) -> Report:
    """Show one catalog entry."""
    return run_show(name)


@examples_app.command("run")
@reported("examples run")
def examples_run(
    name: Optional[str] = typer.Argument(None, help="Example name."),
    run_everything: bool = typer.Option(False, "--all", help="Run the whole catalog."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Override the sampling seed."),
) -> Report:
    """Replay catalog entries against their expected results."""
    return run_examples(name, run_everything, seed)


def run_command(argv: Sequence[str]) -> Tuple[Optional[Report], int]:
    """Run one command line; returns the report (None for help and version) and the exit code."""
    state: dict = {}
    command = typer.main.get_command(app)
    try:
        code = command.main(args=list(argv), prog_name="geoint", standalone_mode=False, obj=state)
    except click.exceptions.Abort:
        return None, 1
    except click.ClickException as exc:
        GeoFormatter.print_error(exc.format_message(), title="Usage error")
        return None, 2
    report = state.get("report")
    if isinstance(code, int):
        return report, code
    return report, report.exit_code if report is not None else 0


def entry_point(argv: Optional[List[str]] = None) -> None:
    _, code = run_command(sys.argv[1:] if argv is None else argv)
    sys.exit(code)


if __name__ == "__main__":
    entry_point()
