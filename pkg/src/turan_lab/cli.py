"""
Command-line entry point for the Turán lab.

Reports go to files (JSON, CSV, graph6, Markdown) and a one-line status to
stdout; logs go to stderr. Exit codes: 0 when every asserted check passed,
1 on a failed check or runtime error, 2 on invalid configuration.
"""

import asyncio
import json
import logging
import os
import sys
from collections.abc import Awaitable, Callable, Iterator
from concurrent.futures import Executor, ProcessPoolExecutor
from contextlib import contextmanager
from pathlib import Path
from typing import Any, NoReturn

import typer
from pydantic import ValidationError

from .__about__ import __version__
from .core.config import Settings, get_settings
from .core.errors import ConfigError, LabArgumentError, LabError
from .core.families import parse_graph_spec
from .extremal.enumeration import canonical_graph6
from .extremal.record_store import RecordStore
from .suites.extremal_suite import cmd_extremal, cmd_regularity, cmd_structure
from .suites.fan_problem import cmd_fan_problem
from .suites.lemma_suite import DEFAULT_MAX_N, cmd_verify
from .suites.renderer import ReportRenderer
from .suites.report import ExperimentConfig, LabReport, write_report
from .utils import format_status_message, parse_n_range

logger = logging.getLogger(__name__)

app = typer.Typer(
    name="turan-lab",
    help="Exhaustive and spectral checks for Turán-type problems on small graphs.",
    no_args_is_help=True,
    add_completion=False,
)
records_app = typer.Typer(help="Inspect or clear the on-disk record store.", no_args_is_help=True)
app.add_typer(records_app, name="records")

SuiteRunner = Callable[[Settings, Executor | None, RecordStore], Awaitable[LabReport]]


def configure_logging(settings: Settings, verbose: bool = False) -> None:
    level = "DEBUG" if verbose else settings.effective_log_level
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _print_version(value: bool) -> None:
    if value:
        typer.echo(__version__)
        raise typer.Exit()


@app.callback()
def _root(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log at DEBUG level"),
    version: bool = typer.Option(
        False, "--version", callback=_print_version, is_eager=True, help="Print the version and exit"
    ),
) -> None:
    try:
        settings = get_settings()
    except ValidationError as e:
        _config_exit(ConfigError(f"invalid LAB_ environment settings: {e}"))
    configure_logging(settings, verbose)


def _config(command: str, **kwargs: Any) -> ExperimentConfig:
    """Validated config from the options that were actually given."""
    try:
        return ExperimentConfig.build(command=command, **{k: v for k, v in kwargs.items() if v is not None})
    except ConfigError as e:
        _config_exit(e)


def _config_exit(error: LabError) -> NoReturn:
    logger.error(f"{error}")
    typer.echo(format_status_message(False, f"invalid configuration: {error}"), err=True)
    raise typer.Exit(code=2)


def _n_values(text: str) -> list[int]:
    try:
        return parse_n_range(text)
    except LabArgumentError as e:
        _config_exit(e)


def _settings(config: ExperimentConfig) -> Settings:
    """Process settings with explicit CLI values layered on top; LAB_CACHE_DIR beats --cache."""
    base = get_settings()
    given = config.model_fields_set
    overlay = {"tol": "spectral_tol", "budget": "enumeration_budget", "workers": "workers", "seed": "random_seed"}
    update: dict[str, Any] = {target: getattr(config, name) for name, target in overlay.items() if name in given}
    if config.cache is not None and "LAB_CACHE_DIR" not in os.environ:
        update["cache_dir"] = config.cache
    return base.model_copy(update=update)


@contextmanager
def _executor(settings: Settings) -> Iterator[Executor | None]:
    if settings.workers <= 1:
        yield None
        return
    logger.info(f"Starting {settings.workers} worker processes")
    with ProcessPoolExecutor(max_workers=settings.workers) as pool:
        yield pool


async def _run_and_write(
    config: ExperimentConfig, settings: Settings, executor: Executor | None, runner: SuiteRunner
) -> tuple[LabReport, dict[str, Path]]:
    report = await runner(settings, executor, RecordStore(settings))
    out_dir = config.out or settings.output_dir
    markdown = ReportRenderer().render_markdown(report)
    paths = await write_report(report, out_dir, markdown)
    return report, paths


def _execute(config: ExperimentConfig, runner: SuiteRunner) -> None:
    settings = _settings(config)
    try:
        with _executor(settings) as executor:
            report, paths = asyncio.run(_run_and_write(config, settings, executor, runner))
    except ConfigError as e:
        _config_exit(e)
    except LabError as e:
        logger.error(f"{config.command} failed: {type(e).__name__}: {e}")
        typer.echo(format_status_message(False, f"{config.command} failed: {e}"), err=True)
        raise typer.Exit(code=1) from e

    summary = report.summary()
    details: dict[str, Any] = {"report": paths["json"], **summary, "seconds": f"{report.duration_s:.2f}"}
    if report.error:
        details["error"] = report.error
    typer.echo(format_status_message(report.exit_code == 0, f"{config.command} finished", details))
    if report.exit_code:
        raise typer.Exit(code=report.exit_code)


@app.command()
def extremal(
    forbid: str = typer.Option(..., "--forbid", help="Forbidden graph: family:<kind>:<params> or g6:<code>"),
    n: str = typer.Option(..., "--n", help="Vertex counts: 7, 4..9 or 4,6,8"),
    budget: int | None = typer.Option(None, "--budget", help="Enumeration node expansions"),
    tol: float | None = typer.Option(None, "--tol", help="Spectral residual tolerance"),
    eps: float | None = typer.Option(None, "--eps", help="Epsilon of the minimum-degree class"),
    workers: int | None = typer.Option(None, "--workers", help="Worker processes"),
    out: Path | None = typer.Option(None, "--out", help="Report directory"),
    cache: Path | None = typer.Option(None, "--cache", help="Record store directory"),
) -> None:
    """Exact ex, Ex, ex_ssp and Ex_ssp for each n, with containment verdicts."""
    config = _config(
        "extremal",
        forbid=forbid,
        n_values=_n_values(n),
        eps=eps,
        budget=budget,
        tol=tol,
        workers=workers,
        out=out,
        cache=cache,
    )

    async def runner(settings: Settings, executor: Executor | None, store: RecordStore) -> LabReport:
        return await cmd_extremal(config, settings, store=store, executor=executor)

    _execute(config, runner)


@app.command("verify-lemmas")
def verify_lemmas(
    n: int = typer.Option(DEFAULT_MAX_N, "--n", help="Largest n of the closed-form sweeps"),
    seed: int | None = typer.Option(None, "--seed", help="Seed for the randomized sweeps"),
    instances: int | None = typer.Option(None, "--instances", help="Random join instances"),
    triples: int | None = typer.Option(None, "--triples", help="Random set triples"),
    tol: float | None = typer.Option(None, "--tol", help="Spectral residual tolerance"),
    workers: int | None = typer.Option(None, "--workers", help="Worker processes"),
    out: Path | None = typer.Option(None, "--out", help="Report directory"),
) -> None:
    """Run the inequality and identity sweeps."""
    params = {k: v for k, v in {"instances": instances, "triples": triples}.items() if v is not None}
    config = _config("verify-lemmas", n_values=[n], seed=seed, tol=tol, workers=workers, out=out, params=params)

    async def runner(settings: Settings, executor: Executor | None, store: RecordStore) -> LabReport:
        return cmd_verify(config, settings, executor=executor)

    _execute(config, runner)


@app.command("fan-problem")
def fan_problem(
    k: int = typer.Option(1, "--k", help="Number of cliques in the fan"),
    t: int = typer.Option(4, "--t", help="Clique order"),
    n: int = typer.Option(..., "--n", help="Vertex count"),
    enumerate_: bool = typer.Option(False, "--enumerate", help="Also compute the true ex_ssp by enumeration"),
    budget: int | None = typer.Option(None, "--budget", help="Enumeration node expansions"),
    workers: int | None = typer.Option(None, "--workers", help="Worker processes"),
    out: Path | None = typer.Option(None, "--out", help="Report directory"),
    cache: Path | None = typer.Option(None, "--cache", help="Record store directory"),
) -> None:
    """Compare the complete split graph with the Turán graph for F_{k,t}."""
    config = _config(
        "fan-problem",
        n_values=[n],
        budget=budget,
        workers=workers,
        out=out,
        cache=cache,
        params={"k": k, "t": t, "enumerate": enumerate_},
    )

    async def runner(settings: Settings, executor: Executor | None, store: RecordStore) -> LabReport:
        return await cmd_fan_problem(config, settings, store=store, executor=executor)

    _execute(config, runner)


@app.command()
def structure(
    graph: str = typer.Option(..., "--graph", help="Graph: family:<kind>:<params> or g6:<code>"),
    r: int | None = typer.Option(None, "--r", help="Number of classes (ignored with --forbid)"),
    c0: int | None = typer.Option(None, "--c0", help="Constant c0 of the decomposition inequalities"),
    forbid: str | None = typer.Option(None, "--forbid", help="Run the stability chain against this F"),
    workers: int | None = typer.Option(None, "--workers", help="Worker processes"),
    out: Path | None = typer.Option(None, "--out", help="Report directory"),
    cache: Path | None = typer.Option(None, "--cache", help="Record store directory"),
) -> None:
    """Optimal partition and in/out decomposition of one graph."""
    if forbid is None and r is None:
        _config_exit(ConfigError("structure needs --r or --forbid"))
    params = {k: v for k, v in {"graph": graph, "r": r, "c0": c0}.items() if v is not None}
    config = _config("structure", forbid=forbid, workers=workers, out=out, cache=cache, params=params)

    async def runner(settings: Settings, executor: Executor | None, store: RecordStore) -> LabReport:
        return await cmd_structure(config, settings, store=store, executor=executor)

    _execute(config, runner)


@app.command()
def regularity(
    graph: Path = typer.Option(..., "--graph", help="graph6 file (first line is used)"),
    classes: Path = typer.Option(..., "--classes", help="One class per line, space-separated vertices"),
    eps: float | None = typer.Option(None, "--eps", help="Regularity epsilon"),
    forbid: str | None = typer.Option(None, "--forbid", help="Check counting-lemma premises for this F"),
    max_parts: int = typer.Option(4, "--max-parts", help="Largest partition tried by the regular-partition search"),
    out: Path | None = typer.Option(None, "--out", help="Report directory"),
) -> None:
    """Pair regularity and counting-lemma premises on a fixture."""
    config = _config(
        "regularity",
        eps=eps,
        forbid=forbid,
        out=out,
        params={"graph": str(graph), "classes": str(classes), "max_parts": max_parts},
    )

    async def runner(settings: Settings, executor: Executor | None, store: RecordStore) -> LabReport:
        return await cmd_regularity(config, settings)

    _execute(config, runner)


def _store(cache: Path | None) -> RecordStore:
    settings = get_settings()
    if cache is not None and "LAB_CACHE_DIR" not in os.environ:
        return RecordStore(settings, cache)
    return RecordStore(settings)


@records_app.command("list")
def records_list(cache: Path | None = typer.Option(None, "--cache", help="Record store directory")) -> None:
    """List stored records."""
    store = _store(cache)
    entries = asyncio.run(store.list_entries())
    for entry in entries:
        flag = "" if entry["current"] else "  (stale schema)"
        typer.echo(f"n={entry['n']:>2}  F={entry['f_g6']:<12} ex={entry['ex']:<4} ex_ssp={entry['ex_ssp']:.9f}{flag}")
    typer.echo(format_status_message(True, f"{len(entries)} record(s) in {store.cache_dir}"))


@records_app.command("show")
def records_show(
    forbid: str = typer.Option(..., "--forbid", help="Forbidden graph spec"),
    n: int = typer.Option(..., "--n", help="Vertex count"),
    cache: Path | None = typer.Option(None, "--cache", help="Record store directory"),
) -> None:
    """Print one stored record as JSON."""
    try:
        f = parse_graph_spec(forbid).graph
    except LabError as e:
        _config_exit(e)
    record = asyncio.run(_store(cache).get(n, canonical_graph6(f)))
    if record is None:
        typer.echo(format_status_message(False, f"no record for n={n}, F={forbid}"), err=True)
        raise typer.Exit(code=1)
    typer.echo(json.dumps(record.to_dict(), indent=2))


@records_app.command("clear")
def records_clear(
    cache: Path | None = typer.Option(None, "--cache", help="Record store directory"),
    yes: bool = typer.Option(False, "--yes", "-y", help="Skip the confirmation prompt"),
) -> None:
    """Delete every stored record."""
    store = _store(cache)
    if not yes:
        typer.confirm(f"Delete all records under {store.cache_dir}?", abort=True)
    removed = asyncio.run(store.clear())
    typer.echo(format_status_message(True, f"removed {removed} record(s)"))


def main() -> None:
    app()


if __name__ == "__main__":
    main()
