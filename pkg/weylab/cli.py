"""
Command-line entry point.

    python -m weylab normal-order --op "a a+"
    python -m weylab stirling --op "a+ a" --rows 6 --format latex
    python -m weylab expand data/epsilon.json --trunc 8 --margin 8

Exit status is 0 on success, 1 for domain errors and 2 for usage, parse and
configuration errors.
"""

import argparse
import logging
import sys
from typing import List, Optional

from .commands import COMMANDS
from .config import DENOMS, FORMATS, JobConfig, load_config
from .errors import WeylabError

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weylab", description="Exact normal ordering and ladder expansions.")
    parser.add_argument("--config", default=None, help="YAML configuration (default: ./config.yaml)")
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    subparsers = parser.add_subparsers(dest="command", required=True)

    for name, command in COMMANDS.items():
        sub = subparsers.add_parser(name, help=command.__doc__)
        sub.add_argument("--format", choices=FORMATS, default=None)
        sub.add_argument("--out", default=None, help="Output path (default: stdout)")
        sub.add_argument("--rows", dest="n_max", type=int, default=None, help="Last Stirling row n_max")
        sub.add_argument("--trunc", type=int, default=None, help="Truncation order N")
        sub.add_argument("--lambda-order", dest="lambda_order", type=int, default=None)
        sub.add_argument("--x-order", dest="x_order", type=int, default=None)
        sub.add_argument("--margin", type=int, default=None, help="Extra working degree for expansions")
        sub.add_argument("--denoms", choices=DENOMS, default=None)
        if name == "expand":
            sub.add_argument("fixture", help="JSON file with the matrix, bases and sequences")
        else:
            sub.add_argument("--op", default=None, help="Operator expression, e.g. \"a+ a a+\"")
        if name == "integrate":
            sub.add_argument("--alpha", default=None, help="Coefficient of x^m d/dx")
            sub.add_argument("--m", type=int, default=None, help="Exponent m >= 2")
            sub.add_argument("--beta", default=None, help="Coefficient of x^(m-1)")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    flags = vars(args)
    try:
        config_data = load_config(flags.pop("config"))
        job = JobConfig.from_sources(flags.pop("command"), config_data, flags)
        logging.basicConfig(level=job.log_level, stream=sys.stderr, force=True)
        with COMMANDS[job.command](job) as command:
            command.execute()
    except WeylabError as e:
        logger.error(f"❌ {e}")
        print(f"weylab: error: {e}", file=sys.stderr)
        return e.exit_code
    return 0
