"""
Command-line subcommands.

Each module holds one click command; ``app.cli`` registers them on the
``main`` group. Domain failures surface as CommandError (exit code 2);
failed checks exit with code 1.
"""

import click

VERIFICATION_FAILED = 1


class CommandError(click.ClickException):
    """Usage or input error reported by a subcommand."""

    exit_code = 2