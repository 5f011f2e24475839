import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional

import typer
from typing_extensions import Annotated

from app.commands.run import (
    FormatOption,
    OutputFormat,
    QvarsOption,
    RecordOption,
    RunOptions,
    SamplesOption,
    SeedOption,
    TimeoutOption,
    VerboseOption,
    WeakenOption,
    run_config,
    save_report,
)
from app.errors import SpecAbduceError
from app.frontend.build import config_hash
from app.utils.helpers import bench_table, configure_logging, console
from app.utils.report import RunReport, error_report

logger = logging.getLogger(__name__)

SIDECAR = "bench.jsonl"


def bench_one(path: Path, options: RunOptions) -> RunReport:
    """Run one benchmark; failures become ``error`` rows instead of stopping the suite."""
    try:
        return run_config(path, options)
    except SpecAbduceError as e:
        logger.warning("%s failed: %s", path.name, e)
        try:
            digest = config_hash(path.read_text(encoding="utf-8"))
        except (OSError, UnicodeDecodeError):
            digest = ""
        return error_report(path.stem, digest, options.seed or 0, str(e))


def bench(
    suite_dir: Annotated[Path, typer.Argument(help="Directory of *.cfg benchmarks.")],
    seed: SeedOption = None,
    timeout_smt: TimeoutOption = None,
    weaken_bound: WeakenOption = None,
    max_qvars: QvarsOption = None,
    samples: SamplesOption = None,
    out: Annotated[Optional[Path], typer.Option("--out", help=f"JSON-lines sidecar (default SUITE_DIR/{SIDECAR}).")] = None,
    output_format: FormatOption = OutputFormat.TEXT,
    jobs: Annotated[int, typer.Option("--jobs", "-j", min=1, help="Benchmarks to run in parallel.")] = 1,
    record: RecordOption = False,
    verbose: VerboseOption = False,
):
    """
    Run every configuration in a directory and tabulate the metrics.
    """
    configure_logging(verbose)
    if not suite_dir.is_dir():
        typer.echo(f"❌ '{suite_dir}' is not a directory.")
        raise typer.Exit(code=2)
    configs = sorted(suite_dir.glob("*.cfg"))
    if not configs:
        typer.echo(f"❌ No *.cfg files in '{suite_dir}'.")
        raise typer.Exit(code=2)

    options = RunOptions(seed, timeout_smt, weaken_bound, max_qvars, samples)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(bench_one, configs, [options] * len(configs)))
    else:
        reports = [bench_one(path, options) for path in configs]

    sidecar = out or suite_dir / SIDECAR
    sidecar.write_text("".join(r.to_json() + "\n" for r in reports), encoding="utf-8")

    if output_format is OutputFormat.JSON_LINES:
        for r in reports:
            typer.echo(r.to_json())
    else:
        console.print(bench_table([r.to_dict() for r in reports]))
        typer.echo(f"📝 Wrote {len(reports)} reports to {sidecar}")

    if record:
        for r in reports:
            save_report(r)
        typer.echo(f"💾 Recorded {len(reports)} runs.", err=output_format is OutputFormat.JSON_LINES)
    if any(r.outcome == "error" for r in reports):
        raise typer.Exit(code=2)
