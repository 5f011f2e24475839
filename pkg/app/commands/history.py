import json

import typer
from rich import box
from rich.panel import Panel
from rich.table import Table
from typing_extensions import Annotated

from app.models import BenchmarkRun
from app.utils.helpers import ExitCodeCommand, ExitCodeGroup, console, date_str, get_db, ms, outcome_str

history_app = typer.Typer(cls=ExitCodeGroup, no_args_is_help=True, short_help="Recorded run history.")


@history_app.command(cls=ExitCodeCommand)
def show(
        limit: Annotated[int, typer.Option("--limit", "-n", min=1, help="Most recent runs to list.")] = 20,
):
    """
    List recorded runs, newest first.
    """
    with get_db() as db:
        runs = db.query(BenchmarkRun).order_by(BenchmarkRun.id.desc()).limit(limit).all()
        if not runs:
            typer.echo("📭 No recorded runs yet. Use --record with run or bench.")
            raise typer.Exit()

        table = Table(title="📚 Run history", box=box.SIMPLE_HEAVY)
        table.add_column("ID", justify="right")
        table.add_column("Config", style="cyan")
        table.add_column("Seed", justify="right")
        table.add_column("Outcome")
        table.add_column("|u|", justify="right")
        table.add_column("|cex|", justify="right")
        table.add_column("|φ⁺|", justify="right")
        table.add_column("time_c (ms)", justify="right")
        table.add_column("When")
        for run in runs:
            table.add_row(
                str(run.id),
                run.config_name,
                str(run.seed),
                outcome_str(run.outcome),
                "-" if run.quantified_var_count is None else str(run.quantified_var_count),
                "-" if run.cex_count is None else str(run.cex_count),
                "-" if run.positive_vector_count is None else str(run.positive_vector_count),
                "-" if run.time_consistent_ms is None else ms(run.time_consistent_ms),
                date_str(run.created_at),
            )
        console.print(table)


@history_app.command(cls=ExitCodeCommand)
def detail(run_id: Annotated[int, typer.Argument(help="ID of the recorded run.")]):
    """
    Show one recorded run with its inferred specifications.
    """
    with get_db() as db:
        run = db.query(BenchmarkRun).filter_by(id=run_id).first()
        if not run:
            typer.echo(f"❌ Run {run_id} not found.")
            raise typer.Exit(code=2)

        console.print(
            Panel(
                f"Outcome: {outcome_str(run.outcome)} (exit {run.exit_code})\n"
                f"Seed: {run.seed}\nConfig hash: {run.config_hash}\nRecorded: {date_str(run.created_at)}",
                title=f"Run {run.id}: {run.config_name}",
                box=box.ROUNDED,
            )
        )
        if run.specs:
            table = Table(box=box.SIMPLE_HEAVY)
            table.add_column("Function", style="cyan")
            table.add_column("Specification")
            table.add_column("|φ⁺|", justify="right")
            table.add_column("Maximal", justify="center")
            for spec in run.specs:
                table.add_row(spec.function, spec.formula, str(spec.positive_count), "✅" if spec.maximal else "⚠️")
            console.print(table)

        report = json.loads(run.report)
        if report.get("counterexample"):
            cex = report["counterexample"]
            typer.echo(f"🚨 {cex['query']} fails on:")
            for name, shown in cex["shown"].items():
                typer.echo(f"   {name} = {shown}")
        elif report.get("reason"):
            typer.echo(f"⚠️ {report['reason']}")


@history_app.command(cls=ExitCodeCommand)
def clear(
        yes: Annotated[bool, typer.Option("--yes", "-y", help="Skip confirmation and delete immediately.")] = False,
):
    """
    Delete every recorded run.
    """
    with get_db() as db:
        runs = db.query(BenchmarkRun).all()
        if not runs:
            typer.echo("📭 Nothing to clear.")
            raise typer.Exit()
        if not yes:
            typer.echo(f"🗑️ You are about to delete {len(runs)} recorded runs.")
            if not typer.confirm("Proceed with deletion?"):
                typer.echo("❌ Deletion cancelled.")
                raise typer.Exit()

        try:
            for run in runs:
                db.delete(run)
            db.commit()
            typer.echo(f"✅ Deleted {len(runs)} runs.")
        except Exception as e:
            db.rollback()
            typer.echo(f"❌ Failed to clear the history: {e}")
            raise typer.Exit(code=2)
