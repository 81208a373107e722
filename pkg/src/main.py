# src/main.py
"""
Entry point of the gvkit command line.

Parses arguments, configures logging and dispatches to `cli.commands`.
Exit codes: 0 success, 1 report-level violations, 2 input errors.
"""

import logging
import sys

from config import LOG_LEVEL
from errors import GvkitError, InternalConsistencyError
from schemas import ErrorDocument

from cli.commands import COMMANDS
from cli.parser import build_parser

logger = logging.getLogger(__name__)


def _fail(exc: BaseException, code: int) -> int:
    sys.stderr.write(ErrorDocument(error=type(exc).__name__, message=str(exc)).model_dump_json() + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    """Run one subcommand and return its exit code."""
    args = build_parser().parse_args(argv)

    level = "ERROR" if args.quiet else (args.log_level or LOG_LEVEL).upper()
    logging.basicConfig(
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        level=getattr(logging, level, logging.WARNING),
    )

    try:
        return COMMANDS[args.command](args)
    except InternalConsistencyError as e:
        logger.error("internal consistency failure: %s", e)
        return _fail(e, 1)
    except GvkitError as e:
        return _fail(e, 2)
    except OSError as e:
        return _fail(e, 2)


if __name__ == "__main__":
    sys.exit(main())
