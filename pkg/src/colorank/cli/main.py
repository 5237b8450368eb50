"""
Colorank CLI - Main entry point
"""

import logging

import click

from .. import __version__
from .commands import (
    build_universal_command,
    chain_command,
    defect_sweep_command,
    embed_command,
    force_command,
    generate_command,
    model_rank_command,
    rank_command,
    realize_command,
    validate_command,
)


@click.group()
@click.option('--config', '-c', 'config_path', type=click.Path(dir_okay=False),
              help='Configuration file (packaged defaults when omitted)')
@click.option('--verbose', '-v', is_flag=True,
              help='Enable verbose logging')
@click.option('--debug', '-d', is_flag=True,
              help='Enable debug logging')
@click.pass_context
def main(ctx, config_path, verbose, debug):
    """
    Colorank - Ranks of coloring trees, universal ranked trees,
    generic homogeneous families and convexity-defect realizations
    """
    log_level = logging.WARNING
    if verbose:
        log_level = logging.INFO
    if debug:
        log_level = logging.DEBUG

    logging.basicConfig(
        level=log_level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    ctx.ensure_object(dict)
    ctx.obj['config_path'] = config_path
    ctx.obj['verbose'] = verbose
    ctx.obj['debug'] = debug


main.add_command(validate_command)
main.add_command(rank_command)
main.add_command(chain_command)
main.add_command(build_universal_command)
main.add_command(embed_command)
main.add_command(model_rank_command)
main.add_command(force_command)
main.add_command(realize_command)
main.add_command(defect_sweep_command)
main.add_command(generate_command)


@main.command()
@click.option('--version', is_flag=True, help='Show version information')
def info(version):
    """Show Colorank information"""
    if version:
        click.echo(f"Colorank v{__version__}")
        return
    click.echo("Colorank - ranked coloring trees and convexity defects")
    click.echo("")
    click.echo("Commands:")
    click.echo("  validate         Check a tree, basic, ranked, condition or oracle file")
    click.echo("  rank             Rank every approximation of a truncation")
    click.echo("  chain            Extract a splitting chain")
    click.echo("  build-universal  Build the universal gamma-ranked tree")
    click.echo("  embed            Embed a ranked tree or a coloring into it")
    click.echo("  model-rank       Theta-rank and oracle of a finite model")
    click.echo("  force            Generic homogeneous family with certificates")
    click.echo("  realize          Realize a coloring as convexity defects")
    click.echo("  defect-sweep     Compare defects with the coloring")
    click.echo("  generate         Random corpus files")
    click.echo("")
    click.echo("Use 'colorank <command> --help' for more information.")


if __name__ == '__main__':
    main()
