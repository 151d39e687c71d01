"""
CLI Formatter
Rich tables and panels for the terminal; everything goes to stderr so
stdout carries only the report.
"""

from typing import Iterable

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from geoint.catalog import Example

# Global console instance
console = Console(stderr=True)


class GeoFormatter:
    """Human-facing output around reports"""

    @staticmethod
    def print_error(message: str, title: str = "Input error"):
        console.print(Panel(f"[bold red]{message}[/bold red]", title=title, border_style="red"))

    @staticmethod
    def print_inconclusive(message: str):
        console.print(
            Panel(f"[bold yellow]{message}[/bold yellow]", title="Inconclusive", border_style="yellow")
        )

    @staticmethod
    def print_examples(examples: Iterable[Example]):
        table = Table(title="Example catalog", border_style="cyan")
        table.add_column("Name", style="cyan", no_wrap=True)
        table.add_column("Kind", style="magenta")
        table.add_column("Metric")
        table.add_column("Expected", style="green", justify="right")
        for example in examples:
            expected = "" if example.expected is None else f"J1={example.expected[0]} J2={example.expected[1]}"
            table.add_row(example.name, example.kind.value, example.description, expected)
        console.print(table)

    @staticmethod
    def print_outcome(name: str, passed: bool):
        status = "[bold green]pass[/bold green]" if passed else "[bold red]FAIL[/bold red]"
        console.print(f"  {name}: {status}")
