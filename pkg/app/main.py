"""
Main CLI entry point.
Parses arguments, configures logging and maps library errors to exit codes.
"""
import logging
import re
import sys
from typing import Sequence

from app.api.router import build_parser
from app.api.schemas import ErrorResponse, to_plain
from app.core.exceptions import LatticeException, exit_code_for
from app.core.logging import configure_logging

logger = logging.getLogger(__name__)


def _error_name(exc: LatticeException) -> str:
    return re.sub(r"(?<!^)(?=[A-Z])", "_", type(exc).__name__).lower()


def main(argv: Sequence[str] | None = None) -> int:
    """Run one command; errors go to stderr as JSON."""
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except LatticeException as exc:
        logger.error(f"{type(exc).__name__}: {exc.message}")
        error = ErrorResponse(
            error=_error_name(exc),
            message=exc.message,
            details=to_plain(exc.details) or None,
        )
        print(error.to_json(), file=sys.stderr)
        return exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
