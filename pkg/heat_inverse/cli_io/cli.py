"""
Command line front end: heat-inverse {simulate,forward,fit} --config <path> [flags].
"""

import argparse
import logging
import sys
from typing import List, Optional

from heat_inverse.cli_io.run_config import RunConfig, load_config
from heat_inverse.cli_io.workflows import WORKFLOWS, ExitCode
from heat_inverse.shared.errors import ConfigError, DataError, SolverError
from heat_inverse.shared.utils import setup_logging

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heat-inverse",
                                     description="Estimate k(u)/C(u) of steel plates from cooling experiments.")
    parser.add_argument("mode", choices=sorted(WORKFLOWS), help="workflow to run")
    parser.add_argument("--config", help="flat key = value config file (defaults are used without one)")
    parser.add_argument("--seed", type=int, help="seed for synthetic noise")
    parser.add_argument("--out", dest="out_dir", help="output directory")
    parser.add_argument("--auto-dt", dest="auto_dt", action="store_true", default=None,
                        help="pick dt = dt_safety x stability bound for every candidate")
    parser.add_argument("--pin-scale", dest="pin_scale", action="store_true", default=None,
                        help="fix C at u_min to its initial value (gauge fixing)")
    parser.add_argument("--jobs", type=int, help="worker threads for experiments / Jacobian columns")
    parser.add_argument("--progress", action="store_true", default=None, help="show progress bars")
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    config = load_config(args.config, check_files=False) if args.config else RunConfig()
    config = config.override(mode=args.mode, seed=args.seed, out_dir=args.out_dir, auto_dt=args.auto_dt,
                             pin_scale=args.pin_scale, jobs=args.jobs, progress=args.progress)
    return config.validate()


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    try:
        config = resolve_config(args)
        return int(WORKFLOWS[config.mode](config))
    except ConfigError as err:
        logger.error("Configuration error: %s", err)
        return int(ExitCode.CONFIG_ERROR)
    except DataError as err:
        logger.error("Data error: %s", err)
        return int(ExitCode.DATA_ERROR)
    except SolverError as err:
        logger.error("Solver error: %s", err)
        return int(ExitCode.SOLVER_ERROR)


if __name__ == "__main__":
    sys.exit(main())
