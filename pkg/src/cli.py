"""
Command-line interface for the HLV QMC toolkit.

This module provides CLI commands for pricing geometric-average Asian calls
under the hyperbolic local volatility model, finite-difference Greeks,
implied volatility curves and MC / QMC convergence studies.

Exit codes: 0 success, 1 usage error, 2 numeric or domain error, 3 I/O error.
Results go to standard output; logs (including the resolved configuration)
go to standard error.
"""

import json
import logging
import math
import sys
from pathlib import Path
from typing import Optional

import click
from pydantic import ValidationError
from rich import box
from rich.console import Console
from rich.table import Table

from src import __version__
from src.errors import HlvQmcError
from src.models.config import get_settings

console = Console()
logger = logging.getLogger("src.cli")

EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_IO = 3


# ============================================================================
# Exit-code handling
# ============================================================================

class HlvQmcGroup(click.Group):
    """Click group mapping exceptions to the documented exit codes."""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            rv = super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
            code = rv if isinstance(rv, int) else 0
        except click.UsageError as e:
            e.show()
            code = EXIT_USAGE
        except click.ClickException as e:
            e.show()
            code = e.exit_code
        except click.Abort:
            click.echo("Aborted!", err=True)
            code = EXIT_USAGE
        except (ValidationError, json.JSONDecodeError) as e:
            click.echo(f"Error: invalid configuration\n{e}", err=True)
            code = EXIT_USAGE
        except OSError as e:
            click.echo(f"Error: {e}", err=True)
            code = EXIT_IO
        except (HlvQmcError, ValueError) as e:
            click.echo(f"Error: {e}", err=True)
            code = EXIT_NUMERIC
        if standalone_mode:
            sys.exit(code)
        return code


# ============================================================================
# Shared options and helpers
# ============================================================================

def _parse_floats(ctx, param, value: Optional[str]) -> Optional[list[float]]:
    if value is None:
        return None
    try:
        return [float(x) for x in value.split(",") if x.strip()]
    except ValueError:
        raise click.BadParameter(f"expected a comma-separated list of numbers, got {value!r}")


def _parse_ints(ctx, param, value: Optional[str]) -> Optional[list[int]]:
    if value is None:
        return None
    try:
        return [int(x) for x in value.split(",") if x.strip()]
    except ValueError:
        raise click.BadParameter(f"expected a comma-separated list of integers, got {value!r}")


POSITIVE = click.FloatRange(min=0, min_open=True)

MODEL_OPTIONS = [
    click.option("--spot", type=POSITIVE, default=100.0, show_default=True, help="Initial spot S0"),
    click.option("--rate", type=float, default=0.03, show_default=True, help="Risk-free rate r"),
    click.option("--maturity", type=POSITIVE, default=1.0, show_default=True, help="Maturity T in years"),
    click.option("--nu", type=POSITIVE, default=0.3, show_default=True, help="Volatility level nu"),
    click.option(
        "--beta",
        type=click.FloatRange(min=0, max=1, min_open=True),
        default=0.5,
        show_default=True,
        help="Skew parameter beta in (0, 1]",
    ),
    click.option("--steps", type=click.IntRange(min=1), default=256, show_default=True,
                 help="Fixings / Euler steps n"),
    click.option("--paths", type=click.IntRange(min=1), default=65536, show_default=True,
                 help="Number of paths N"),
    click.option("--sequence", type=click.Choice(["sobol", "mt"]), default="sobol", show_default=True,
                 help="Uniform source: Sobol QMC or Mersenne Twister MC"),
    click.option("--construction", type=click.Choice(["bridge", "incremental"]), default="bridge",
                 show_default=True, help="Wiener path construction"),
    click.option("--seed", type=click.IntRange(min=0), default=None,
                 help="Mersenne Twister seed (default from settings)"),
    click.option("--dirnums", type=click.Path(dir_okay=False, path_type=Path), default=None,
                 envvar="HLVQMC_DIRECTION_NUMBERS",
                 help="Joe-Kuo direction-number file (default: table bundled with SciPy)"),
]


def model_options(func):
    for option in reversed(MODEL_OPTIONS):
        func = option(func)
    return func


def _log_resolved(command: str, options: dict) -> None:
    settings = get_settings()
    resolved = {
        "command": command,
        **{k: (str(v) if isinstance(v, Path) else v) for k, v in options.items()},
        "threads": click.get_current_context().obj.get("threads") or settings.effective_threads,
        "chunk_size": settings.chunk_size,
    }
    logger.info("Resolved configuration: %s", json.dumps(resolved, sort_keys=True))


def _resolve_common(options: dict) -> dict:
    """Fill defaults that come from settings."""
    settings = get_settings()
    options = dict(options)
    if options.get("seed") is None:
        options["seed"] = settings.seed
    if options.get("dirnums") is None:
        options["dirnums"] = settings.direction_numbers
    return options


def _build_inputs(options: dict):
    from src.models.params import HlvParams
    from src.sequences import make_stream, resolve_direction_numbers

    params = HlvParams(
        nu=options["nu"], beta=options["beta"], rate=options["rate"], spot=options["spot"]
    )
    table = (
        resolve_direction_numbers(options["dirnums"]) if options["sequence"] == "sobol" else None
    )
    stream = make_stream(options["sequence"], options["steps"], table=table, seed=options["seed"])
    return params, stream


def _workers() -> Optional[int]:
    return click.get_current_context().obj.get("threads")


# ============================================================================
# CLI Commands
# ============================================================================

@click.group(cls=HlvQmcGroup)
@click.version_option(version=__version__, prog_name="hlv-qmc")
@click.option("--threads", type=click.IntRange(min=1), default=None,
              help="Worker threads (default: all cores); results do not depend on it")
@click.option("--log-level", default=None, help="Log level (default from settings)")
@click.pass_context
def cli(ctx, threads, log_level):
    """
    HLV QMC - Monte Carlo and quasi-Monte Carlo pricing under hyperbolic local volatility.

    Defaults reproduce the reference study: S0=100, r=3%, T=1, nu=30%,
    beta=0.5, n=256 fixings, strikes 80/100/120.
    """
    from src.utils.logging_utils import configure_logging

    configure_logging(log_level or get_settings().log_level)
    ctx.ensure_object(dict)
    ctx.obj["threads"] = threads


@cli.command()
@model_options
@click.option("--strike", type=POSITIVE, default=100.0, show_default=True, help="Strike K")
@click.option("--style", type=click.Choice(["geometric-asian-call", "european-call"]),
              default="geometric-asian-call", show_default=True, help="Payoff")
def price(**options):
    """
    Price one option and print the estimate.

    The standard error is printed for Mersenne Twister runs only.

    Examples:

        hlv-qmc price --beta 0.5 --strike 100 --paths 262144

        hlv-qmc price --sequence mt --construction incremental --seed 7
    """
    from src.models.params import OptionSpec
    from src.pricing import mc_price

    options = _resolve_common(options)
    _log_resolved("price", options)
    params, stream = _build_inputs(options)
    spec = OptionSpec(
        strike=options["strike"],
        maturity=options["maturity"],
        fixings=options["steps"],
        style=options["style"],
    )
    estimate = mc_price(spec, params, stream, options["construction"], options["paths"],
                        workers=_workers())

    click.echo(f"value      {estimate.value:.10f}")
    if estimate.std_error is not None:
        click.echo(f"std_error  {estimate.std_error:.10f}")
    click.echo(f"paths      {estimate.n_paths}")


@cli.command()
@model_options
@click.option("--strike", type=POSITIVE, default=100.0, show_default=True, help="Strike K")
@click.option("--shift-spot-pct", type=POSITIVE, default=1.0, show_default=True,
              help="Spot bump in % of S0")
@click.option("--shift-param-pct", type=POSITIVE, default=1.0, show_default=True,
              help="nu and beta bumps in % of their value")
@click.option("--recycle/--no-recycle", default=True, show_default=True,
              help="Reuse the same uniform points for every bump")
def greeks(**options):
    """
    Central finite-difference Delta, Gamma, nu-Vega and beta-Vega.

    beta-Vega needs beta + shift <= 1, so beta=1 exits with code 2.
    """
    from src.models.params import GreekShifts, OptionSpec
    from src.pricing import greeks as compute_greeks

    options = _resolve_common(options)
    _log_resolved("greeks", options)
    params, stream = _build_inputs(options)
    spec = OptionSpec(strike=options["strike"], maturity=options["maturity"], fixings=options["steps"])
    shifts = GreekShifts.relative(params, options["shift_spot_pct"], options["shift_param_pct"])
    report = compute_greeks(
        spec, params, stream, options["construction"], options["paths"], shifts,
        recycle=options["recycle"], workers=_workers(),
    )

    for name in ("price", "delta", "gamma", "vega_nu", "vega_beta"):
        click.echo(f"{name:<10} {getattr(report, name):.10f}")
    click.echo(f"{'paths':<10} {report.n_paths}")


@cli.command()
@model_options
@click.option("--strikes", callback=_parse_floats, default=None,
              help="Comma-separated strikes (default: 50,75,100,125,150% of spot)")
def smile(**options):
    """
    Implied volatility curve of simulated European calls, as CSV.

    Strikes whose price cannot be inverted are printed as NaN with a warning.
    """
    from src.pricing import DEFAULT_MONEYNESS, implied_vol_curve
    from src.utils.file_utils import format_float

    options = _resolve_common(options)
    if options["strikes"] is None:
        options["strikes"] = [m * options["spot"] for m in DEFAULT_MONEYNESS]
    _log_resolved("smile", options)
    params, stream = _build_inputs(options)
    curve = implied_vol_curve(
        params, options["strikes"], options["maturity"], options["paths"], options["construction"],
        steps=options["steps"], stream=stream, workers=_workers(),
    )

    click.echo("strike,implied_vol")
    for point in curve:
        vol = "nan" if math.isnan(point.implied_vol) else f"{point.implied_vol:.10f}"
        click.echo(f"{format_float(point.strike)},{vol}")


@cli.command()
@click.option("--config", "config_path", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Experiment JSON file (see configs/ and --print-schema)")
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=None,
              help="Output directory (default from settings)")
@click.option("--runs", type=click.IntRange(min=2), default=None, help="Override independent runs L")
@click.option("--reference-paths", type=click.IntRange(min=1), default=None,
              help="Override reference paths m")
@click.option("--grid", callback=_parse_ints, default=None, help="Override path grid, e.g. 128,256,512")
@click.option("--strikes", callback=_parse_floats, default=None, help="Override strikes")
@click.option("--seed", type=click.IntRange(min=0), default=None, help="Override base seed")
@click.option("--dirnums", type=click.Path(dir_okay=False, path_type=Path), default=None,
              envvar="HLVQMC_DIRECTION_NUMBERS", help="Joe-Kuo direction-number file")
@click.option("--print-schema", is_flag=True, help="Print the experiment JSON schema and exit")
def converge(config_path, out, runs, reference_paths, grid, strikes, seed, dirnums, print_schema):
    """
    Run a convergence study and write its CSV report.

    Writes one CSV per (quantity, strike), summary.csv and config.json to
    the output directory, then prints the fitted rates.
    """
    from src.harness import emit_report, run_study
    from src.models.experiment import ExperimentConfig
    from src.sequences import resolve_direction_numbers
    from src.utils.file_utils import read_json_file

    if print_schema:
        click.echo(json.dumps(ExperimentConfig.model_json_schema(), indent=2))
        return

    settings = get_settings()
    data = read_json_file(config_path) if config_path else {}
    overrides = {
        "runs": runs,
        "reference_paths": reference_paths,
        "path_grid": grid,
        "strikes": strikes,
        "seed": seed,
    }
    data.update({k: v for k, v in overrides.items() if v is not None})
    data.setdefault("seed", settings.seed)
    config = ExperimentConfig.model_validate(data)
    out = out or settings.ensure_output_dir()
    dirnums = dirnums or settings.direction_numbers

    _log_resolved("converge", {
        "config_file": config_path,
        "out": out,
        "dirnums": dirnums,
        "experiment": config.model_dump(mode="json"),
    })
    report = run_study(config, table=resolve_direction_numbers(dirnums), workers=_workers())
    emit_report(report, out)

    table = Table(box=box.SIMPLE, show_header=True, header_style="bold")
    for column in ("quantity", "strike", "method", "alpha", "r_squared", "reference"):
        table.add_column(column, justify="left" if column in ("quantity", "method") else "right")
    for cell in report.cells:
        fit = cell.fit
        table.add_row(
            cell.quantity.value,
            f"{cell.strike:g}",
            cell.method.value,
            f"{fit.alpha:.4f}" if fit else "n/a",
            f"{fit.r_squared:.4f}" if fit else "n/a",
            f"{cell.reference_value:.6f}",
        )
    console.print(table)


@cli.command()
@click.option("--dirnums", type=click.Path(dir_okay=False, path_type=Path), default=None,
              envvar="HLVQMC_DIRECTION_NUMBERS", help="Joe-Kuo direction-number file")
def selftest(dirnums):
    """
    Run fast property checks and print a pass/fail table.

    Exits with code 2 if any check fails.
    """
    from src.selftest import run_checks
    from src.sequences import resolve_direction_numbers

    dirnums = dirnums or get_settings().direction_numbers
    _log_resolved("selftest", {"dirnums": dirnums})
    results = run_checks(resolve_direction_numbers(dirnums), workers=_workers())

    table = Table(box=box.SIMPLE, show_header=True, header_style="bold")
    table.add_column("check")
    table.add_column("status")
    table.add_column("detail")
    for result in results:
        status = "[green]pass[/green]" if result.passed else "[red]FAIL[/red]"
        table.add_row(result.name, status, result.detail)
    console.print(table)

    if not all(r.passed for r in results):
        raise click.exceptions.Exit(EXIT_NUMERIC)


@cli.command()
def config():
    """
    Display current configuration settings.

    Shows the settings loaded from HLVQMC_* environment variables and .env.
    """
    settings = get_settings()
    _log_resolved("config", {})

    table = Table(box=box.ROUNDED, show_header=False)
    table.add_column("Setting", style="cyan")
    table.add_column("Value")
    table.add_row("Direction numbers", str(settings.direction_numbers or "SciPy bundled (new-joe-kuo-6.21201)"))
    table.add_row("Seed", str(settings.seed))
    table.add_row("Threads", str(settings.effective_threads))
    table.add_row("Chunk size", str(settings.chunk_size))
    table.add_row("Output Directory", str(settings.default_output_dir))
    table.add_row("Log level", settings.log_level)
    console.print(table)


def main() -> None:
    """Console-script entry point."""
    cli()


if __name__ == "__main__":
    main()
