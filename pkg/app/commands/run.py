import logging
import time
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional

import typer
from rich.panel import Panel
from rich.table import Table
from typing_extensions import Annotated

from app.errors import SpecAbduceError
from app.frontend.build import build_backend, build_spec_config, config_hash, read_config_text
from app.frontend.parser import parse_config
from app.inference.abduce import multi_abduce
from app.models import BenchmarkRun, InferredSpec
from app.utils.helpers import configure_logging, console, get_db, ms, outcome_str
from app.utils.report import RunReport, build_report, reverify

logger = logging.getLogger(__name__)


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON_LINES = "json-lines"


@dataclass(frozen=True)
class RunOptions:
    seed: int | None = None
    timeout_ms: int | None = None
    weaken_bound: float | None = None
    max_qvars: int | None = None
    samples: int | None = None
    recheck: bool = False


# Options shared by run and bench
SeedOption = Annotated[Optional[int], typer.Option("--seed", help="Random seed for the sampler.")]
TimeoutOption = Annotated[Optional[int], typer.Option("--timeout-smt", min=1, help="Per-query solver timeout in ms.")]
WeakenOption = Annotated[
    Optional[float], typer.Option("--weaken-bound", min=0.001, help="Time bound of the weakening phase in seconds.")
]
QvarsOption = Annotated[Optional[int], typer.Option("--max-qvars", min=0, help="Largest number of quantified variables.")]
SamplesOption = Annotated[Optional[int], typer.Option("--samples", min=1, help="Draws per function and path in a round.")]
FormatOption = Annotated[OutputFormat, typer.Option("--format", help="Output format.")]
RecordOption = Annotated[bool, typer.Option("--record", help="Store the report in the run history.")]
VerboseOption = Annotated[bool, typer.Option("--verbose", "-v", help="Log every solver query.")]


def run_config(path: Path, options: RunOptions) -> RunReport:
    """Parse, compile and infer one configuration."""
    logger.info("Running %s", path)
    text = read_config_text(path)
    cfg = parse_config(text)
    spec_cfg = build_spec_config(
        cfg,
        name=path.stem,
        seed=options.seed,
        samples=options.samples,
        max_qvars=options.max_qvars,
        weaken_bound=options.weaken_bound,
    )
    backend = build_backend(cfg, options.timeout_ms)
    start = time.perf_counter()
    outcome = multi_abduce(spec_cfg, backend)
    report = build_report(spec_cfg, config_hash(text), outcome, (time.perf_counter() - start) * 1000)
    if options.recheck and report.interface is not None:
        failing = reverify(report, spec_cfg, backend)
        if failing:
            raise SpecAbduceError(f"The inferred interface does not verify {', '.join(failing)}.")
    return report


def save_report(report: RunReport) -> int:
    with get_db() as db:
        run = BenchmarkRun(
            config_name=report.config,
            config_hash=report.config_hash,
            seed=report.seed,
            outcome=report.outcome,
            exit_code=report.exit_code,
            quantified_var_count=report.metrics.get("quantified_var_count"),
            cex_count=report.metrics.get("cex_count"),
            gathered_vector_count=report.metrics.get("gathered_vector_count"),
            positive_vector_count=report.positive_total,
            time_consistent_ms=report.timings.get("time_consistent_ms"),
            time_weaken_ms=report.timings.get("time_weaken_ms"),
            report=report.to_json(),
        )
        for entry in report.interface or []:
            run.specs.append(
                InferredSpec(
                    function=entry["function"],
                    formula=entry["spec"],
                    positive_count=entry["positive"],
                    maximal=entry["maximal"],
                )
            )
        db.add(run)
        db.commit()
        return run.id


def print_report(report: RunReport):
    console.print(
        Panel(
            f"Outcome: {outcome_str(report.outcome)}\nSeed: {report.seed}\nConfig hash: {report.config_hash}",
            title=report.config,
        )
    )
    if report.interface is not None:
        table = Table(title="Inferred interface")
        table.add_column("Function", style="cyan")
        table.add_column("Specification")
        table.add_column("|φ⁺|", justify="right")
        table.add_column("Maximal", justify="center")
        for entry in report.interface:
            formals = ", ".join(name for name, _ in entry["params"])
            table.add_row(
                f"{entry['function']}({formals})",
                entry["rendered"],
                str(entry["positive"]),
                "✅" if entry["maximal"] else "⚠️",
            )
        console.print(table)
    elif report.counterexample is not None:
        cex = report.counterexample
        typer.echo(f"🚨 {cex['query']} fails on:")
        for name, shown in cex["shown"].items():
            typer.echo(f"   {name} = {shown}")
    elif report.reason:
        typer.echo(f"⚠️ {report.reason}")

    m, t = report.metrics, report.timings
    if m:
        typer.echo(
            f"📊 |u|={m['quantified_var_count']} |cex|={m['cex_count']} #Gather={m['gathered_vector_count']} "
            f"time_c={ms(t['time_consistent_ms'])}ms time_w={ms(t['time_weaken_ms'])}ms "
            f"time_d={ms(t['time_distinguish_ms'])}"
        )


def run(
    config: Annotated[Path, typer.Argument(help="Configuration file to infer an interface for.")],
    seed: SeedOption = None,
    timeout_smt: TimeoutOption = None,
    weaken_bound: WeakenOption = None,
    max_qvars: QvarsOption = None,
    samples: SamplesOption = None,
    out: Annotated[Optional[Path], typer.Option("--out", help="Also write the JSON report here.")] = None,
    output_format: FormatOption = OutputFormat.TEXT,
    record: RecordOption = False,
    recheck: Annotated[bool, typer.Option("--recheck", help="Re-verify the serialized interface.")] = False,
    verbose: VerboseOption = False,
):
    """
    Infer a maximal verification interface for one configuration.

    Exits with 0 for an interface, 1 for a counterexample and 2 when inference gave up.
    """
    configure_logging(verbose)
    options = RunOptions(seed, timeout_smt, weaken_bound, max_qvars, samples, recheck)
    try:
        report = run_config(config, options)
    except SpecAbduceError as e:
        typer.echo(f"❌ {e}")
        raise typer.Exit(code=2)

    if output_format is OutputFormat.JSON_LINES:
        typer.echo(report.to_json())
    else:
        print_report(report)
    if out is not None:
        out.write_text(report.to_json() + "\n", encoding="utf-8")
    if record:
        run_id = save_report(report)
        typer.echo(f"💾 Recorded run {run_id}.", err=output_format is OutputFormat.JSON_LINES)
    raise typer.Exit(code=report.exit_code)
