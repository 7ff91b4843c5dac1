"""Entry point for the redheffer command.

This module parses the command line into a RunConfig, runs the experiment
and maps the outcome to an exit code.
"""

import argparse
import sys
from pathlib import Path
from typing import NoReturn, Optional, Sequence

from .application import EXIT_GUARD, EXIT_INVALID, ExperimentRunner
from .core.operators import SizeGuardError
from .data.models import Command, OutputFormat, RunConfig
from .utils.logger import Logger, get_logger
from .utils.validators import ValidationError
from .utils.xdg import CACHE_DIR_ENV

logger = get_logger(__name__)


class _ArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that reports bad flags as ValidationError (exit code 1)."""

    def error(self, message: str) -> NoReturn:
        raise ValidationError(message)


_COMMAND_HELP = {
    Command.VERIFY_DET: "exact det(A_k) against the Mertens function for k <= n",
    Command.SINGULAR_VECTOR: "top singular vector by power iteration, as CSV",
    Command.SIMILARITY: "cosine between v_n and A^T A v_n, as JSON",
    Command.ALPHA: "extrapolated series and the closed-form limit alpha",
    Command.RECORDS: "divisor-count and abundancy records side by side",
    Command.CONSTANTS: "unweighted double gcd sum and ||v_n||^2/n against 5 zeta(3)/2",
    Command.PROFILE: "prime vs composite statistics of v_n and the singular vector",
}


def build_parser() -> argparse.ArgumentParser:
    """Build the command-line parser with one subcommand per experiment."""
    common = _ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=1000, help="dimension")
    common.add_argument(
        "--tol", type=float, default=1e-10, help="relative residual tolerance of power iteration"
    )
    common.add_argument("--max-iter", type=int, default=10_000, help="power iteration limit")
    common.add_argument(
        "--output", "-o", dest="output_path", type=Path, default=None, help="output file (stdout)"
    )
    common.add_argument(
        "--format",
        choices=[f.value for f in OutputFormat],
        default=None,
        help="csv or json (command default)",
    )
    common.add_argument("--threads", type=int, default=0, help="worker threads, 0 = one per CPU")
    common.add_argument(
        "--cache-dir",
        type=Path,
        default=None,
        help=f"sieve cache directory (${CACHE_DIR_ENV}, else the XDG cache)",
    )
    common.add_argument("--no-cache", action="store_true", help="do not read or write the cache")
    common.add_argument("--force", action="store_true", help="override size guards")
    common.add_argument("--debug", action="store_true", help="debug output on stderr")

    parser = _ArgumentParser(
        prog="redheffer",
        description="Numerical experiments on the Redheffer matrix and its top singular vector.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)
    for command in Command:
        sub = subparsers.add_parser(
            command.value,
            parents=[common],
            help=_COMMAND_HELP[command],
            formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        )
        if command is Command.ALPHA:
            sub.add_argument("--cutoff", type=int, default=1_000_000, help="single sum cutoff N2")
            sub.add_argument("--cutoff-lo", type=int, default=100_000, help="single sum cutoff N1")
            sub.add_argument(
                "--double-cutoff", type=int, default=10_000, help="double sum cutoff N2"
            )
            sub.add_argument(
                "--double-cutoff-lo", type=int, default=5_000, help="double sum cutoff N1"
            )
        elif command is Command.CONSTANTS:
            sub.add_argument(
                "--cutoff", type=int, default=2000, help="unweighted double sum cutoff"
            )
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> tuple[RunConfig, bool]:
    """Parse arguments into a RunConfig.

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])

    Returns:
        Tuple of (config, debug flag)

    Raises:
        ValidationError: If arguments are invalid
    """
    namespace = build_parser().parse_args(argv)
    options = {
        "command": Command(namespace.command),
        "n": namespace.n,
        "tol": namespace.tol,
        "max_iter": namespace.max_iter,
        "output_path": namespace.output_path,
        "format": OutputFormat(namespace.format) if namespace.format else None,
        "threads": namespace.threads,
        "cache_dir": namespace.cache_dir,
        "use_cache": not namespace.no_cache,
        "force": namespace.force,
    }
    for name in ("cutoff", "cutoff_lo", "double_cutoff", "double_cutoff_lo"):
        if hasattr(namespace, name):
            options[name] = getattr(namespace, name)
    return RunConfig(**options), namespace.debug


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point.

    Returns:
        Exit code: 0 success, 1 invalid arguments, 2 size guard violation,
        3 non-converged power iteration
    """
    try:
        config, debug = parse_args(argv)
        if debug:
            Logger.set_debug_mode(True)
            logger.info("Debug mode enabled")

        exit_code = ExperimentRunner(config).run()
        logger.debug(f"Exiting with code {exit_code}")
        return exit_code

    except ValidationError as e:
        logger.error(f"Invalid arguments: {e}")
        return EXIT_INVALID

    except SizeGuardError as e:
        logger.error(str(e))
        return EXIT_GUARD

    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return 130

    except Exception as e:
        logger.critical(f"Unhandled exception: {e}", exc_info=True)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
