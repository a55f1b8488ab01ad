import argparse

from lpslice.cli import constants, estimates, scan, verify
from lpslice.core.config import settings


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.PROJECT_NAME,
        description="Volumes of central sections and projections of lp balls, and numerical checks of their inequalities",
    )
    parser.add_argument("--log-level", default=None, help="logging level for stderr (default: LOG_LEVEL)")
    subparsers = parser.add_subparsers(dest="command", required=True)

    estimates.register(subparsers)
    constants.register(subparsers)
    scan.register(subparsers)
    verify.register(subparsers)
    return parser
