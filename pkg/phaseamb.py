"""phaseamb -- Enumerate and classify the ambiguities of 1-D phase retrieval."""

import functools
import sys
from pathlib import Path

import click

from lib.ambiguity import check_invariants, enumerate_solutions
from lib.config import load_tolerances
from lib.errors import ConfigError, FormatError, PhaseRetrievalError
from lib.formats import (
    analysis_to_json,
    dump_json,
    parse_input,
    parse_raster,
    parse_zero_set,
    perturb_csv,
    plot_data_csv,
    raster_csv,
    region_to_json,
    report_to_json,
    signal_to_json,
    solutions_csv,
)
from lib.instances import MODES, GenSpec, generate, perturb_study
from lib.nonneg import feasible_region, pair_verdicts
from lib.roots import (
    associated_polynomial,
    find_roots,
    pair_roots,
    unit_circle_points,
    zeros_of_signal,
)
from lib.signals import DEFAULT_SAMPLES, Signal, autocorrelation

# ---------------------------------------------------------------------------
# Error plumbing
# ---------------------------------------------------------------------------


class InputError(click.ClickException):
    """I/O, format and configuration problems."""

    exit_code = 2


def handle_errors(func):
    """Map library exceptions onto exit statuses 1 (domain) and 2 (input)."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except PhaseRetrievalError as exc:
            raise click.ClickException(f"{type(exc).__name__}: {exc}") from exc
        except (ConfigError, FormatError, OSError) as exc:
            raise InputError(str(exc)) from exc

    return wrapper


# ---------------------------------------------------------------------------
# I/O helpers
# ---------------------------------------------------------------------------


def read_text(path):
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def write_text(path, text):
    if path is None or path == "-":
        click.echo(text, nl=False)
        return
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")


def warn(ctx, message):
    if not ctx.obj["quiet"]:
        click.echo(f"warning: {message}", err=True)


def info(ctx, message):
    if not ctx.obj["quiet"]:
        click.echo(message, err=True)


def read_signal_or_autocorrelation(ctx, path):
    return parse_input(read_text(path), source=path, tol=ctx.obj["tol"])


def read_signal(ctx, path):
    value = read_signal_or_autocorrelation(ctx, path)
    if not isinstance(value, Signal):
        raise FormatError(f"{path}: this command needs a signal ('values') document")
    return value


def as_autocorrelation(value):
    return autocorrelation(value) if isinstance(value, Signal) else value


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

input_option = click.option(
    "--input",
    "-i",
    "input_path",
    default="-",
    show_default=True,
    help="Input JSON file, '-' for stdin.",
)
output_option = click.option(
    "--output",
    "-o",
    "output_path",
    default=None,
    type=click.Path(dir_okay=False),
    help="Output file (default: stdout).",
)
samples_option = click.option(
    "--samples",
    default=DEFAULT_SAMPLES,
    show_default=True,
    type=click.IntRange(min=1),
    help="Frequency samples for intensity checks.",
)


def _tolerance_option(name, field):
    return click.option(
        name,
        field,
        default=None,
        type=click.FloatRange(min=0, min_open=True),
        help=f"Override the {field.removeprefix('tol_')} tolerance.",
    )


@click.group()
@click.option(
    "--config",
    "config_path",
    default=None,
    type=click.Path(dir_okay=False),
    help="TOML config file (default: ./phaseamb.toml or ~/.config/phaseamb/).",
)
@_tolerance_option("--tol-root", "tol_root")
@_tolerance_option("--tol-pair", "tol_pair")
@_tolerance_option("--tol-nn", "tol_nn")
@click.option("--quiet", "-q", is_flag=True, default=False, help="No diagnostics.")
@click.pass_context
def main(ctx, config_path, tol_root, tol_pair, tol_nn, quiet):
    """Enumerate and classify the ambiguities of 1-D phase retrieval."""
    try:
        tol = load_tolerances(config_path, root=tol_root, pair=tol_pair, nn=tol_nn)
    except ConfigError as exc:
        raise InputError(str(exc)) from exc
    ctx.obj = {"tol": tol, "quiet": quiet}


@main.command()
@input_option
@output_option
@click.option(
    "--plot-data",
    "plot_path",
    default=None,
    type=click.Path(dir_okay=False),
    help="Write zeros, pair members and unit-circle samples as CSV.",
)
@click.pass_context
@handle_errors
def analyze(ctx, input_path, output_path, plot_path):
    """Autocorrelation, zeros and flip units of a signal."""
    tol = ctx.obj["tol"]
    x = read_signal(ctx, input_path)
    a = autocorrelation(x)
    zeros = zeros_of_signal(x, tol) if x.support_length > 1 else []
    units = []
    if x.support_length > 1:
        units = pair_roots(find_roots(associated_polynomial(a), tol), tol)
    write_text(output_path, dump_json(analysis_to_json(x, a, zeros, units)))
    if plot_path:
        write_text(plot_path, plot_data_csv(zeros, units, unit_circle_points()))
        info(ctx, f"Plot data: {plot_path}")


@main.command("enumerate")
@input_option
@output_option
@samples_option
@click.option(
    "--nonneg-only",
    is_flag=True,
    default=False,
    help="List only the non-negative solution classes.",
)
@click.option(
    "--csv",
    "csv_path",
    default=None,
    type=click.Path(dir_okay=False),
    help="Also write the solutions as CSV.",
)
@click.option("--workers", default=None, type=click.IntRange(min=1))
@click.pass_context
@handle_errors
def enumerate_command(
    ctx, input_path, output_path, samples, nonneg_only, csv_path, workers
):
    """All solutions sharing the input's Fourier intensity."""
    tol = ctx.obj["tol"]
    a = as_autocorrelation(read_signal_or_autocorrelation(ctx, input_path))
    report = enumerate_solutions(a, tol, workers=workers)
    for message in report.warnings:
        warn(ctx, message)
    doc = report_to_json(report, nonneg_only=nonneg_only, a=a, samples=samples)
    write_text(output_path, dump_json(doc))
    if csv_path:
        write_text(csv_path, solutions_csv(report, nonneg_only=nonneg_only))
    info(
        ctx,
        f"{report.total_classes} class(es), "
        f"{report.nonnegative_classes} non-negative",
    )


@main.command()
@input_option
@output_option
@click.option(
    "--raster",
    default=None,
    help='Rasterize the region over "re_min,re_max,im_min,im_max,step".',
)
@click.option(
    "--raster-output",
    default=None,
    type=click.Path(dir_okay=False),
    help="Raster CSV file (default: stdout after the JSON).",
)
@click.option(
    "--beta",
    default=None,
    type=complex,
    help="Free zero such as 0.75+1j; reports its verdict and its reflection's.",
)
@click.pass_context
@handle_errors
def region(ctx, input_path, output_path, raster, raster_output, beta):
    """Feasible region of a free conjugate pair for fixed left-half-plane zeros."""
    tol = ctx.obj["tol"]
    fixed = parse_zero_set(read_text(input_path), source=input_path)
    feasible = feasible_region(fixed, tol)
    verdicts = pair_verdicts(fixed, beta, tol) if beta is not None else None
    write_text(output_path, dump_json(region_to_json(feasible, verdicts)))
    if raster:
        rows = feasible.raster(*parse_raster(raster), tol=tol)
        write_text(raster_output, raster_csv(rows))


@main.command("generate")
@output_option
@click.option("--N", "support_length", required=True, type=click.IntRange(min=2))
@click.option(
    "--mode",
    type=click.Choice(MODES),
    default=MODES[0],
    show_default=True,
)
@click.option("--seed", default=0, show_default=True, type=click.IntRange(0, 2**64 - 1))
@click.pass_context
@handle_errors
def generate_command(ctx, output_path, support_length, mode, seed):
    """Generate a maximally ambiguous or a uniquely solvable signal."""
    try:
        spec = GenSpec(support_length=support_length, mode=mode, seed=seed)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc
    x = generate(spec, ctx.obj["tol"])
    write_text(output_path, dump_json(signal_to_json(x)))


@main.command()
@input_option
@output_option
@click.option(
    "--delta",
    required=True,
    type=click.FloatRange(min=0),
    help="Noise amplitude; components move by at most delta.",
)
@click.option("--trials", default=100, show_default=True, type=click.IntRange(min=1))
@click.option("--seed", default=0, show_default=True, type=click.IntRange(0, 2**64 - 1))
@click.option("--workers", default=None, type=click.IntRange(min=1))
@click.pass_context
@handle_errors
def perturb(ctx, input_path, output_path, delta, trials, seed, workers):
    """Perturbation study: root displacement and class counts per trial."""
    x = read_signal(ctx, input_path)
    try:
        study = perturb_study(x, delta, trials, seed, ctx.obj["tol"], workers)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--delta") from exc
    write_text(output_path, perturb_csv(study))
    failed = sum(1 for r in study.results if r.error)
    if failed:
        warn(ctx, f"{failed} of {study.trials} trial(s) failed")
    if not study.scale_invariant:
        warn(ctx, "zeros moved under positive scaling beyond tol.pair")


@main.command()
@input_option
@samples_option
@click.pass_context
@handle_errors
def verify(ctx, input_path, samples):
    """Run the invariant suite on a signal and print PASS/FAIL per property."""
    x = read_signal(ctx, input_path)
    results = check_invariants(x, ctx.obj["tol"], samples)
    for name, passed, detail in results:
        line = f"{'PASS' if passed else 'FAIL'} {name}"
        click.echo(f"{line}  {detail}" if detail else line)
    if not all(passed for _, passed, _ in results):
        ctx.exit(1)


if __name__ == "__main__":
    main()
