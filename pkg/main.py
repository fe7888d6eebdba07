#!/usr/bin/env python3

import argparse
import logging
import sys

from geomint.commands import RunConfig, cmd_algebra_check, cmd_compare, cmd_convergence, cmd_simulate
from geomint.densecore import NumericalError
from geomint.rotor import RotorParams

# Exit codes are a stable contract for scripts driving the CLI
EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

COMMANDS = {
    'simulate': cmd_simulate,
    'compare': cmd_compare,
    'convergence': cmd_convergence,
    'algebra-check': cmd_algebra_check
}

def get_parser():
    defaults = RotorParams()
    parser = argparse.ArgumentParser(add_help=False)

    source = parser.add_mutually_exclusive_group()
    source.add_argument('--system', type=str, default=None, help='JSON file holding a system {"A", "f"} or rotor parameters {"m", "k", "omega", "eps", "x0"}')
    source.add_argument('--rotor', action='store_true', help='Use the built-in rotor configured by the flags below (default)')
    parser.add_argument('--m', type=float, default=defaults.m, help=f"Rotor mass in kg (default: {defaults.m})")
    parser.add_argument('--k', type=float, default=defaults.k_stiff, help=f"Shaft stiffness in N/m (default: {defaults.k_stiff})")
    parser.add_argument('--omega', type=float, default=defaults.omega, help=f"Shaft speed in rad/s (default: {defaults.omega})")
    parser.add_argument('--eps', type=float, default=defaults.eps, help=f"Unbalance in m.kg (default: {defaults.eps})")
    parser.add_argument('--x0', type=float, nargs='+', default=None, help='Initial state (q1 q2 p1 p2 for the rotor, default all zero)')
    parser.add_argument('--method', action='append', default=None, help='Integrator name (repeat for several): exact, strang, midpoint, heun, sdirk2 (default: strang)')
    parser.add_argument('--h', type=float, default=0.05, help='Step size in seconds (default: 0.05)')
    parser.add_argument('--t0', type=float, default=0.0, help='Start time in seconds (default: 0)')
    parser.add_argument('--t-end', type=float, default=100.0, help='End time in seconds (default: 100)')
    parser.add_argument('--h-list', type=float, nargs='+', default=None, help='Successively halving step sizes for the convergence study (default: 0.1 0.05 0.025 0.0125)')
    parser.add_argument('--out', type=str, default=None, help='Output file (CSV or JSON depending on the subcommand, default stdout)')
    parser.add_argument('--summary', type=str, default=None, help='Summary JSON path for compare (default: <out>.summary.json)')
    parser.add_argument('--seed', type=int, default=0, help='Seed for the random elements of algebra-check (default: 0)')
    parser.add_argument('--log-level', type=str, default='INFO', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'], help='Set the logging level (default: INFO)')
    parser.add_argument('--log-file', type=str, default=None, help='Path to log file. If not specified, logs are written to stderr only.')

    cli_parser = argparse.ArgumentParser(description='Geometric integration of periodic linear systems')
    subcommands = cli_parser.add_subparsers(title='subcommands', required=True, dest='command', description='valid subcommands', help='Experiment to run')
    subcommands.add_parser('simulate', help='Integrate with one method and write the trajectory as CSV', parents=[parser])
    subcommands.add_parser('compare', help='Integrate with several methods, write q1 per method and a summary JSON', parents=[parser])
    subcommands.add_parser('convergence', help='Measure the global order of each method against the exact flow', parents=[parser])
    subcommands.add_parser('algebra-check', help='Report sub-algebra membership, closure, dimension and Jacobi checks', parents=[parser])
    return cli_parser

def setup_logging(log_level, log_file=None):
    """
    Configure logging with timestamps and severity levels.

    :param log_level: String level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
    :param log_file: Optional path to log file. If None, logs only go to stderr.
    """
    numeric_level = getattr(logging, log_level.upper(), logging.INFO)

    formatter = logging.Formatter(
        fmt='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    root_logger = logging.getLogger()
    root_logger.setLevel(numeric_level)
    root_logger.handlers = []

    # stdout may carry CSV or JSON results
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(numeric_level)
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    if log_file:
        file_handler = logging.FileHandler(log_file, mode='a', encoding='utf-8')
        file_handler.setLevel(numeric_level)
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)
        root_logger.info(f"Logging to file: {log_file}")

    return root_logger

def get_run_config(args):
    x0 = args.x0
    rotor = RotorParams(args.m, args.k, args.omega, args.eps, x0 if x0 else (0.0, 0.0, 0.0, 0.0))
    return RunConfig(
        rotor=rotor,
        system_file=args.system,
        methods=args.method,
        h=args.h,
        t0=args.t0,
        t_end=args.t_end,
        h_list=args.h_list,
        out=args.out,
        summary=args.summary,
        seed=args.seed,
        x0=x0
    )

def run(args):
    logger = logging.getLogger(__name__)
    try:
        cfg = get_run_config(args)
        logger.debug(cfg.as_json())
        COMMANDS[args.command](cfg)
    except NumericalError as e:
        logger.error(f"Numerical failure in {args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as e:
        logger.error(f"Invalid input for {args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"Cannot write output of {args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK

if __name__ == "__main__":
    _args = get_parser().parse_args()

    logger = setup_logging(_args.log_level, _args.log_file)
    logger.info(f"Starting {_args.command}")

    sys.exit(run(_args))
