"""
Command-line entry point for cluster-state computation
Compiles circuits onto measurement patterns, verifies cluster invariants and
runs percolation estimates
"""

import logging
import sys

import click

from app import __version__
from app.commands.gadget_test import gadget_test
from app.commands.percolate import percolate
from app.commands.simulate import simulate
from app.commands.verify import verify
from app.config import LOG_LEVEL

logger = logging.getLogger(__name__)


@click.group()
@click.version_option(__version__, prog_name="oneway")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default=LOG_LEVEL,
    show_default=True,
)
def main(log_level):
    """One-way quantum computing on cluster states."""
    # stdout carries the tables, logs go to stderr
    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    logger.debug(f"[CLI] oneway {__version__} log level {log_level}")


# Register commands
main.add_command(simulate)
main.add_command(verify)
main.add_command(gadget_test)
main.add_command(percolate)


if __name__ == "__main__":
    main()
