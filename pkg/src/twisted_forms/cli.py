"""Command line: normalize, differentiate, integrate and braid expressions, verify invariants, export matrices."""

import functools
import logging
import sys
from collections.abc import Callable
from pathlib import Path
from typing import ParamSpec, TypeVar

import click

from twisted_forms.braiding import (
    TensorForm,
    braid_closed,
    braid_oracle,
    check_axioms,
    check_oracle,
    tensor_differential,
)
from twisted_forms.braidrep import (
    SubquotientSpec,
    enumerate_block,
    export_matrices,
    representation,
    verify_braid_relations,
    verify_involution,
    verify_oracle_matrices,
)
from twisted_forms.config import Config, load_config
from twisted_forms.errors import CapExceededError, TwistedFormsError
from twisted_forms.expressions import parse_expression, parse_form, parse_tensor
from twisted_forms.omega import AlgebraCtx, alpha_form, check_identities, differential, homotopy_I
from twisted_forms.reports import VerificationReport

logger = logging.getLogger(__name__)

P = ParamSpec("P")
R = TypeVar("R")

EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_CAPS = 3

SUITES = ["omega", "braiding", "braidrep", "involution", "all"]


def _exit_codes(command: Callable[P, R]) -> Callable[P, R]:
    @functools.wraps(command)
    def wrapper(*args: P.args, **kwargs: P.kwargs) -> R:
        try:
            return command(*args, **kwargs)
        except CapExceededError as error:
            click.echo(f"error: {error}", err=True)
            raise click.exceptions.Exit(EXIT_CAPS) from error
        except (TwistedFormsError, ValueError, OSError) as error:
            click.echo(f"error: {error}", err=True)
            raise click.exceptions.Exit(EXIT_USAGE) from error

    return wrapper


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s", force=True)


@click.group()
@click.option(
    "--config",
    "config_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="JSON document describing the field, the variables, alpha, relations and caps.",
)
@click.option("-v", "--verbose", count=True, help="Log to stderr; repeat for debug output.")
@click.pass_context
@_exit_codes
def main(context: click.Context, config_path: Path, verbose: int) -> None:
    """Exact twisted Kähler forms and their braiding."""
    _configure_logging(verbose)
    context.obj = load_config(config_path)


@main.command()
@click.argument("expression")
@click.pass_obj
@_exit_codes
def normalize(config: Config, expression: str) -> None:
    """Print the normal form of EXPRESSION."""
    click.echo(str(parse_expression(expression, config.context())))


@main.command("d")
@click.argument("expression")
@click.pass_obj
@_exit_codes
def differentiate(config: Config, expression: str) -> None:
    """Apply the differential to a form or a tensor of forms."""
    value = parse_expression(expression, config.context())
    if isinstance(value, TensorForm):
        click.echo(str(tensor_differential(value)))
    else:
        click.echo(str(differential(value)))


@main.command("I")
@click.argument("expression")
@click.pass_obj
@_exit_codes
def integrate(config: Config, expression: str) -> None:
    """Apply the homotopy operator I."""
    click.echo(str(homotopy_I(parse_form(expression, config.context()))))


@main.command()
@click.argument("expression")
@click.option("--times", default=1, show_default=True, type=click.IntRange(min=0), help="Power of alpha to apply.")
@click.pass_obj
@_exit_codes
def alpha(config: Config, expression: str, times: int) -> None:
    """Apply alpha, extended to forms."""
    click.echo(str(alpha_form(parse_form(expression, config.context()), times)))


@main.command("R")
@click.argument("expression")
@click.option("--oracle", is_flag=True, help="Compute R by the recursion instead of the closed formula.")
@click.pass_obj
@_exit_codes
def braid(config: Config, expression: str, *, oracle: bool) -> None:
    """Apply the braiding to a tensor of two forms."""
    t = parse_tensor(expression, config.context())
    click.echo(str(braid_oracle(t) if oracle else braid_closed(t)))


def _verification_context(
    config: Config, max_var_degree: int, max_form_degree: int
) -> tuple[AlgebraCtx, int, int]:
    """A context with room for the intermediates of d, R and the oracle, and the caps the checks may use."""
    if config.ctx.collapsed:
        # every form of a finite algebra with non-graded alpha sits in variable-degree 0
        max_var_degree = config.max_var_degree
    if max_var_degree > config.max_var_degree or max_form_degree > config.max_form_degree:
        msg = (
            f"verification caps D={max_var_degree}, N={max_form_degree} exceed the configured caps "
            f"D={config.max_var_degree}, N={config.max_form_degree}"
        )
        raise CapExceededError(msg)
    if config.endo.is_graded or config.endo.is_finite:
        return config.context(max_var_degree, 2 * max_form_degree + 2), max_var_degree, max_form_degree
    if max_form_degree > 0:
        logger.warning("alpha is not graded on an infinite-dimensional algebra: checking form-degree 0 only")
    return config.context(max_var_degree, 1), max_var_degree, 0


@main.command()
@click.option("--suite", type=click.Choice(SUITES), default="all", show_default=True)
@click.option("--max-var-degree", type=click.IntRange(min=0), default=None, help="Defaults to the configured cap.")
@click.option("--max-form-degree", type=click.IntRange(min=0), default=None, help="Defaults to the configured cap.")
@click.option("--arity", type=click.IntRange(min=1), default=3, show_default=True)
@click.pass_obj
@_exit_codes
def verify(
    config: Config, suite: str, max_var_degree: int | None, max_form_degree: int | None, arity: int
) -> None:
    """Run invariant suites; exit 1 when any check fails.

    ``all`` runs omega, braiding and braidrep; the involution suite runs only on request.
    """
    var_cap = config.max_var_degree if max_var_degree is None else max_var_degree
    form_cap = config.max_form_degree if max_form_degree is None else max_form_degree
    ctx, var_cap, form_cap = _verification_context(config, var_cap, form_cap)
    reports: list[VerificationReport] = []
    if suite in {"omega", "all"}:
        reports.append(check_identities(ctx, var_cap, form_cap))
    if suite in {"braiding", "all"}:
        reports.append(check_axioms(ctx, var_cap, form_cap))
        reports.append(check_oracle(ctx, var_cap, form_cap))
    if suite in {"braidrep", "all"}:
        window = SubquotientSpec()
        reports.append(verify_braid_relations(ctx, window, arity, var_cap, form_cap))
        reports.append(verify_oracle_matrices(ctx, window, arity, var_cap, form_cap))
    if suite == "involution":
        reports.append(verify_involution(ctx, SubquotientSpec(), arity, var_cap, form_cap))
    report = VerificationReport.combine(reports)
    click.echo(report.render())
    if not report.passed:
        raise click.exceptions.Exit(EXIT_FAILED)


@main.command()
@click.option("--arity", type=click.IntRange(min=1), required=True)
@click.option("--var-degree", type=click.IntRange(min=0), required=True)
@click.option("--form-degree", type=click.IntRange(min=0), required=True)
@click.option("--window", default=None, help="Variable-degree window lo:hi of the sub-quotient.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--oracle", is_flag=True, help="Build the matrices from the recursive oracle.")
@click.pass_obj
@_exit_codes
def repmat(
    config: Config,
    arity: int,
    var_degree: int,
    form_degree: int,
    window: str | None,
    out_path: Path,
    fmt: str,
    *,
    oracle: bool,
) -> None:
    """Export the matrices of every braid generator on one block."""
    block = enumerate_block(config.context(), SubquotientSpec.parse(window), arity, var_degree, form_degree)
    rep = representation(block, "oracle" if oracle else "closed")
    path = export_matrices(rep, out_path, fmt)
    summary = f"{len(rep.generators)} generator(s) of block {block.describe()} (dimension {block.dimension})"
    click.echo(f"wrote {summary} to {path}")

