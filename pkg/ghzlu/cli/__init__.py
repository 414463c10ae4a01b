"""
Command-line interface for the GHZ-class LU toolkit.

Usage:
    ghzlu classify phi.state            # family, subfamily, invariants, canonical ASD
    ghzlu equiv a.state b.state --oracle
    ghzlu transform phi.state           # rho-iota partner
    ghzlu asd amplitudes.state          # ASD and witness unitaries
    ghzlu invariants phi.state
    ghzlu sample --family "C4''" --count 3
    ghzlu selftest --quick
"""
import logging
from dataclasses import dataclass

import click

from ghzlu import __version__, create_toolkit
from ghzlu.exceptions import GhzluError
from ghzlu.services.lu_service import LUService

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_NOT_GHZ = 2
EXIT_INEQUIVALENT = 3

EXIT_CODES = {
    'not_ghz_class': EXIT_NOT_GHZ,
}


def exit_code_for(error_type: str) -> int:
    return EXIT_CODES.get(error_type, EXIT_INPUT_ERROR)


@dataclass
class CliContext:
    service: LUService
    output_json: bool


@click.group()
@click.version_option(version=__version__, prog_name='ghzlu')
@click.option('--tolerance', type=float, default=1.0, show_default=True,
              help='Scale every epsilon by this factor')
@click.option('--seed', type=int, default=None, envvar='GHZLU_SEED',
              help='Random seed (defaults to GHZLU_SEED, then the configured seed)')
@click.option('--json', 'output_json', is_flag=True, help='Machine-readable output')
@click.option('--config', 'config_name', default=None, envvar='GHZLU_ENV',
              type=click.Choice(['development', 'production', 'testing']),
              help='Configuration to run with')
@click.option('-v', '--verbose', is_flag=True, help='Debug logging on stderr')
@click.pass_context
def cli(ctx, tolerance, seed, output_json, config_name, verbose):
    """Local-unitary classification of three-qubit GHZ-class states."""
    try:
        service = create_toolkit(config_name, tolerance, seed)
    except GhzluError as e:
        click.echo(f"Error: {e}", err=True)
        ctx.exit(EXIT_INPUT_ERROR)
    if verbose:
        logging.getLogger('ghzlu').setLevel(logging.DEBUG)
    ctx.obj = CliContext(service, output_json)


# Import commands after cli is defined to avoid circular import
from ghzlu.cli import commands  # noqa: E402,F401
