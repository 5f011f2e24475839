import importlib
import logging
from contextlib import contextmanager
from datetime import datetime
from typing import Any, Generator

from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table
from typer.core import TyperCommand, TyperGroup

from app.db import SessionLocal
from app.settings import LOG_LEVEL

USAGE_EXIT = 64

# typer may build on its own copy of click; take UsageError from the copy its commands use
_CLICK = TyperCommand.__mro__[1].__module__.rpartition(".")[0]
UsageError = importlib.import_module(f"{_CLICK}.exceptions").UsageError

OUTCOME_COLORS = {
    "interface": "green",
    "counterexample": "yellow",
    "aborted": "red",
    "error": "red",
}
console = Console()


def configure_logging(verbose: bool = False):
    level = logging.DEBUG if verbose else LOG_LEVEL
    root = logging.getLogger()
    for handler in list(root.handlers):
        if isinstance(handler, RichHandler):
            root.removeHandler(handler)
    root.addHandler(RichHandler(console=console, show_path=False, markup=False))
    root.setLevel(level)


def outcome_str(outcome: str) -> str:
    color = OUTCOME_COLORS.get(outcome, "white")
    return f"[{color}]{outcome}[/{color}]"


def ms(x) -> str:
    if isinstance(x, str):
        return x
    return f"{x:,.1f}"


def date_str(d) -> str:
    if isinstance(d, datetime):
        return d.strftime("%Y-%m-%d %H:%M")
    return str(d)


class ExitCodeCommand(TyperCommand):
    """Usage errors exit with 64 instead of click's 2, which is taken by Aborted."""

    def parse_args(self, ctx, args: list[str]) -> list[str]:
        try:
            return super().parse_args(ctx, args)
        except UsageError as e:
            e.exit_code = USAGE_EXIT
            raise


class ExitCodeGroup(TyperGroup):
    def parse_args(self, ctx, args: list[str]) -> list[str]:
        try:
            return super().parse_args(ctx, args)
        except UsageError as e:
            e.exit_code = USAGE_EXIT
            raise

    def resolve_command(self, ctx, args: list[str]):
        try:
            return super().resolve_command(ctx, args)
        except UsageError as e:
            e.exit_code = USAGE_EXIT
            raise


@contextmanager
def get_db() -> Generator[Any, Any, None]:
    db = SessionLocal()
    try:
        yield db
    except Exception as e:
        db.rollback()
        raise e
    finally:
        db.close()


def bench_table(rows: list[dict]) -> Table:
    """One row per report, in the column order of the benchmark tables."""
    table = Table(title="Benchmarks")
    table.add_column("Benchmark", style="cyan")
    table.add_column("Outcome")
    for name in ("(|F|,|R|)", "|P|", "|u|", "|cex|", "time_c (ms)", "#Gather", "|φ⁺|", "time_w (ms)", "time_d (ms)"):
        table.add_column(name, justify="right")
    for r in rows:
        if r["outcome"] == "error":
            table.add_row(r["config"], outcome_str("error"), *["-"] * 9)
            continue
        shape = r["shape"]
        m = r["metrics"]
        t = r["timings"]
        table.add_row(
            r["config"],
            outcome_str(r["outcome"]),
            f"({shape['functions']}, {shape['applications']})",
            str(shape["predicates"]),
            str(m["quantified_var_count"]),
            str(m["cex_count"]),
            ms(t["time_consistent_ms"]),
            str(m["gathered_vector_count"]),
            str(sum(m["positive_vector_count"].values())),
            ms(t["time_weaken_ms"]),
            ms(t["time_distinguish_ms"]),
        )
    return table
