import logging
import sys
from typing import List, Optional

from lpslice.cli.router import build_parser
from lpslice.core.exceptions import InvalidInputError, SliceError
from lpslice.core.logging import configure_logging

logger = logging.getLogger("lpslice")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except InvalidInputError as exc:
        logger.error("invalid input: %s", exc)
        return EXIT_USAGE
    except SliceError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
