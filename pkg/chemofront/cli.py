"""
Command-line entry point.

    chemofront simulate <config> [--scenario NAME]
    chemofront sweep <config> --param key=v1,v2 [--param ...]
    chemofront certify <config>
    chemofront validate-pme <config>

--out, --cells, --t-end and --threads override the config file. The exit
status is 0 when every check passed, 1 when one failed and 2 on error.
"""
import argparse
import logging
import sys
from typing import List, Optional

from chemofront import __version__
from chemofront.core.errors import ConfigError
from chemofront.harness import (
    certify_scenario,
    cli_overrides,
    load_config,
    parse_param,
    run_scenario,
    sweep,
)
from chemofront.harness.scenarios import EXIT_ERROR
from chemofront.presets import SCENARIOS

logger = logging.getLogger('chemofront')

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def _add_common(parser: argparse.ArgumentParser, scenario_flag: bool = True) -> None:
    parser.add_argument('config', help='JSON scenario config')
    if scenario_flag:
        parser.add_argument('--scenario', choices=SCENARIOS,
                            help='scenario to use when the config does not name one')
    parser.add_argument('--out', help='output directory')
    parser.add_argument('--cells', type=int, help='number of grid cells')
    parser.add_argument('--t-end', type=float, dest='t_end', help='final time')
    parser.add_argument('--threads', type=int, help='sweep worker processes')
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='-v for progress, -vv for debug output')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='chemofront',
        description='Free-boundary experiments for degenerate chemotaxis.',
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    commands = parser.add_subparsers(dest='command', required=True)

    _add_common(commands.add_parser('simulate', help='run one scenario'))

    sweep_parser = commands.add_parser('sweep', help='run a parameter sweep')
    _add_common(sweep_parser)
    sweep_parser.add_argument('--param', action='append', default=[], metavar='KEY=V1,V2',
                              help='swept key and values; repeat for a product grid')

    _add_common(commands.add_parser('certify', help='build certificates without a PDE run'))
    _add_common(commands.add_parser('validate-pme', help='Barenblatt convergence check'),
                scenario_flag=False)
    return parser


def _configure_logging(verbosity: int) -> None:
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(level=level, format=LOG_FORMAT)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)

    overrides = cli_overrides(args.out, args.cells, args.t_end, args.threads)
    scenario = getattr(args, 'scenario', None)
    if args.command == 'validate-pme':
        overrides['scenario'] = 'pme-validate'
    try:
        config = load_config(args.config, overrides, scenario=scenario)
        if args.command == 'sweep':
            grid = dict(parse_param(text) for text in args.param) or None
            code, summary = sweep(config, grid)
            logger.info("Sweep wrote %d row(s) to %s", len(summary), config.output_dir)
            return code
        if args.command == 'certify':
            code, _ = certify_scenario(config)
            return code
        code, _ = run_scenario(config)
        return code
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
