import logging
import logging.config
from pathlib import Path
from typing import Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table as RichTable

from semibertrand.cli.commands import COMMANDS
from semibertrand.core.config import LOGGING_CONFIG, settings
from semibertrand.core.exceptions import (
    EXIT_INPUT,
    EXIT_OK,
    EXIT_REJECTED,
    GeometryError,
    ReportWriteError,
    log_exception,
)
from semibertrand.schemas.input_file import load_input
from semibertrand.schemas.job import Command, JobConfig
from semibertrand.services.reporting_service import ReportBundle, emit_report

# Configure logging
logging.config.dictConfig(LOGGING_CONFIG)
logger = logging.getLogger(__name__)

console = Console()

app = typer.Typer(
    name="semibertrand",
    help=f"{settings.PROJECT_NAME}: Frenet apparatuses and Bertrand mates of timelike curves.",
    add_completion=False,
    no_args_is_help=True,
)

HELP = {
    Command.CLASSIFY: "Report the causal character of a curve over its domain.",
    Command.FRENET: "Write the Frenet frame and curvatures on a uniform arc-length grid.",
    Command.SYNTH: "Integrate prescribed curvatures into a curve.",
    Command.FIT_CLASSICAL: "Fit a k1 + b k2 = 1 and check the offset mate's normal lines.",
    Command.SCAN_CLASSICAL: "Evaluate the classical-mate obstruction over a list of offsets.",
    Command.BERTRAND_CHECK: "Estimate and validate the (1,3)-Bertrand constants.",
    Command.BERTRAND_MATE: "Construct the (1,3) mate and its closed-form apparatus.",
    Command.BERTRAND_VERIFY: "Construct the (1,3) mate and compare its numeric apparatus with the closed forms.",
}


def _print_summary(config: JobConfig, bundle: ReportBundle) -> None:
    table = RichTable(title=f"{config.command.value} ({'rejected' if bundle.rejected else 'ok'})")
    table.add_column("key")
    table.add_column("value")
    for key in sorted(bundle.summary):
        table.add_row(key, str(bundle.summary[key]))
    console.print(table)


def _write_error_report(config: JobConfig, exc: GeometryError) -> None:
    if isinstance(exc, ReportWriteError):
        return
    summary = {**exc.to_report(), "exit_code": exc.exit_code, "accepted": False}
    try:
        emit_report(ReportBundle(summary=summary, rejected=True), config.output_path, config.command.stem)
    except ReportWriteError as e:
        logger.warning(f"error report not written: {e.message}")


def run(config: JobConfig) -> int:
    """Run one job and write its reports; returns the process exit status.

    0 on success, 2 when the curve is rejected on mathematical grounds
    (the report names the failed condition), 1 on input and I/O errors.
    """
    logger.info(f"{config.command.value}: {config.input_path} -> {config.output_path}")
    try:
        job = load_input(config.input_path)
        bundle = COMMANDS[config.command](job, config)
        emit_report(bundle, config.output_path, config.command.stem)
    except GeometryError as exc:
        log_exception(exc)
        _write_error_report(config, exc)
        console.print(f"[red]{exc.error_code}[/red]: {exc.message}")
        return exc.exit_code
    _print_summary(config, bundle)
    return EXIT_REJECTED if bundle.rejected else EXIT_OK


def _handler(command: Command):
    def handler(
        input_path: Path = typer.Option(..., "--input", "-i", help="Curve or prescription file (TOML)"),
        output_path: Path = typer.Option(Path("reports"), "--output", "-o", help="Report directory"),
        grid: int = typer.Option(settings.GRID_SIZE, "--grid", help="Arc-length samples per apparatus"),
        step: float = typer.Option(settings.SYNTH_STEP, "--step", help="Synthesis and node spacing"),
        gamma_hint: Optional[float] = typer.Option(None, "--gamma-hint", help="gamma for constant curvatures"),
        alpha_hint: Optional[float] = typer.Option(None, "--alpha-hint", help="alpha for constant curvatures"),
        tol_eq: float = typer.Option(settings.TOL_EQ, "--tol-eq", help="Tolerance of relations ii and iii"),
        tol_margin: float = typer.Option(settings.TOL_MARGIN, "--tol-margin", help="Margin of conditions i and iv"),
    ) -> None:
        try:
            config = JobConfig(
                command=command,
                input_path=input_path,
                output_path=output_path,
                grid=grid,
                step=step,
                gamma_hint=gamma_hint,
                alpha_hint=alpha_hint,
                tol_eq=tol_eq,
                tol_margin=tol_margin,
            )
        except ValidationError as e:
            for error in e.errors():
                console.print(f"[red]invalid option[/red] {'.'.join(map(str, error['loc']))}: {error['msg']}")
            raise typer.Exit(code=EXIT_INPUT)
        raise typer.Exit(code=run(config))

    handler.__doc__ = HELP[command]
    return handler


for _command in Command:
    app.command(name=_command.value)(_handler(_command))


def main() -> None:
    app()


if __name__ == "__main__":
    main()
