import argparse
import json
import logging

from lpslice.core.config import settings
from lpslice.services.suites import SUITES, count_statuses, run_tasks

logger = logging.getLogger(__name__)


def build_report(suite: str, samples: int, seed: int) -> dict:
    tasks = SUITES[suite](samples, seed)
    logger.info("suite %s: %d tasks at %d samples", suite, len(tasks), samples)
    verdicts = run_tasks(tasks)
    return {
        "suite": suite,
        "samples": samples,
        "seed": seed,
        "counts": count_statuses(verdicts),
        "verdicts": [v.model_dump(mode="json", by_alias=True) for v in verdicts],
    }


def cmd_verify(args: argparse.Namespace) -> int:
    report = build_report(args.suite, args.samples, args.seed)
    if args.report:
        with open(args.report, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    counts = report["counts"]
    print(f"{args.suite}: {counts['pass']} pass, {counts['fail']} fail, {counts['inconclusive']} inconclusive")
    return 1 if counts["fail"] else 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="run a verification suite")
    parser.add_argument("--suite", choices=sorted(SUITES), required=True)
    parser.add_argument("--report", default=None, help="JSON report path")
    parser.add_argument("--samples", type=int, default=settings.VERIFY_SAMPLES)
    parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    parser.set_defaults(handler=cmd_verify)
