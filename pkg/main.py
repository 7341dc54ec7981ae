"""
Discord Demon Engine - Main Entry Point

This is the main application file that verifies the numerical backend,
configures logging, parses the command line and runs the requested
computation.
"""
import logging
import sys

from utils.system_check import verify_system_requirements
from ui.cli import build_parser, config_from_args, run
from config import LOG_FORMAT, LOG_LEVEL

logger = logging.getLogger("discord_demon")


def configure_logging(verbosity):
    """Send log records to stderr; each -v lowers the threshold one level."""
    level = logging.getLevelName(LOG_LEVEL) - 10 * verbosity
    logging.basicConfig(
        stream=sys.stderr,
        level=max(level, logging.DEBUG),
        format=LOG_FORMAT,
    )


def main(argv=None):
    """
    Main application entry point.

    This function:
    1. Parses the command line
    2. Verifies numerical backend requirements
    3. Runs the requested command and returns its exit status
    """
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad usage; usage errors are validation errors here
        return 0 if e.code in (0, None) else 1
    configure_logging(args.verbose)

    logger.info("[1/3] Parsed command '%s'", args.command)
    if not args.skip_checks:
        logger.info("[2/3] Verifying numerical backend...")
        if not verify_system_requirements():
            print("Error: numerical backend requirements not met", file=sys.stderr)
            return 3

    logger.info("[3/3] Running...")
    try:
        return run(config_from_args(args))
    except Exception as e:
        logger.exception("Internal failure")
        print(f"Error: internal numerical failure: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
