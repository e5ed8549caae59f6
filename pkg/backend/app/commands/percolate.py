"""percolate: spanning fractions and threshold estimates"""

import logging

import click

from app.commands import CommandError
from app.config import DEFAULT_SEED, PERCOLATION_TRIALS, THRESHOLD_SIZES
from app.exceptions import MBQCError
from app.services.percolation_service import percolation_service

logger = logging.getLogger(__name__)


@click.command("percolate")
@click.option("--d", "dims", type=click.Choice(["2", "3"]), default="3", show_default=True)
@click.option("--L", "size", type=click.IntRange(min=2), default=32, show_default=True)
@click.option(
    "--p", "ps", type=click.FloatRange(0.0, 1.0), multiple=True, help="Repeatable; default 0.44"
)
@click.option(
    "--trials", type=click.IntRange(min=1), default=PERCOLATION_TRIALS, show_default=True
)
@click.option("--seed", type=click.IntRange(min=0), default=DEFAULT_SEED, show_default=True)
@click.option("--threshold", is_flag=True, help="Estimate the 50% spanning crossing")
@click.option(
    "--sizes",
    default=",".join(str(s) for s in THRESHOLD_SIZES),
    show_default=True,
    help="Side lengths for --threshold",
)
def percolate(dims, size, ps, trials, seed, threshold, sizes):
    """Site percolation on L^d grids."""
    d = int(dims)
    try:
        side_lengths = [int(s) for s in sizes.split(",") if s.strip()]
    except ValueError:
        raise click.BadParameter(f"{sizes!r} is not a comma-separated size list")
    try:
        if threshold:
            result = percolation_service.estimate_threshold(d, side_lengths, trials, seed)
            click.echo(percolation_service.format_threshold(result), nl=False)
            return
        curve = percolation_service.spanning_curve(size, d, ps or (0.44,), trials, seed)
    except (MBQCError, ValueError) as e:
        raise CommandError(str(e))
    click.echo(percolation_service.format_curve(d, curve, seed), nl=False)
