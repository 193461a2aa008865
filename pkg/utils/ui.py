"""
UI Utilities - Shared display functions
"""

from typing import Iterable

from rich import box
from rich.console import Console
from rich.markup import escape
from rich.table import Table

console = Console()
err_console = Console(stderr=True)

CURRENT_VERSION = "0.1.0"


def print_header(title: str):
    """Print a command banner."""
    console.print(f"[bold cyan]textland[/bold cyan] [dim]v{CURRENT_VERSION} • {escape(title)}[/dim]")
    console.print()


def print_success(message: str):
    """Print a success message."""
    console.print(f"[green]✓ {escape(message)}[/green]")


def print_error(message: str):
    """Print an error message."""
    err_console.print(f"[red]✗ {escape(message)}[/red]")


def print_warning(message: str):
    """Print a warning message."""
    err_console.print(f"[yellow]⚠ {escape(message)}[/yellow]")


def print_info(message: str):
    """Print an info message."""
    console.print(f"[blue]ℹ {escape(message)}[/blue]")


def make_table(title: str, columns: Iterable[str]) -> Table:
    """Build a table in the house style; the first column is highlighted."""
    table = Table(
        title=title,
        box=box.ROUNDED,
        header_style="bold magenta",
        border_style="dim",
        title_style="bold white",
    )
    for i, column in enumerate(columns):
        table.add_column(column, style="cyan" if i == 0 else None)
    return table


def format_float(value: float) -> str:
    """Locale-independent shortest round-trip rendering of a float."""
    return repr(float(value))


def format_point(point) -> str:
    """Render a 3-vector as 'x y z'."""
    if point is None:
        return "-"
    return " ".join(format_float(v) for v in point)
