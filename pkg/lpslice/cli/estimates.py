import argparse
import json

import numpy as np

from lpslice.core.config import settings
from lpslice.core.exceptions import InvalidInputError
from lpslice.schemas.domain import Direction, Exponent, MCEstimate, canonicalize
from lpslice.schemas.queries import ProjectionQuery
from lpslice.services.projections import estimate_projection_ratio, exact_projection_ratio_2d
from lpslice.services.sections import section_ratio


def parse_direction(raw: str) -> Direction:
    """Comma-separated raw coordinates, canonicalized"""
    try:
        values = [float(tok) for tok in raw.split(",") if tok.strip()]
    except ValueError:
        raise InvalidInputError(f"cannot parse direction {raw!r}")
    return canonicalize(values)


def _pad_to_two(a: Direction) -> Direction:
    support = a.support()
    return Direction(coords=tuple(np.pad(support, (0, 2 - support.size))))


def projection_ratio(a: Direction, q: Exponent, samples: int, seed: int) -> MCEstimate:
    """Gamma(1/q) E|sum a_j X_j|: exact when at most two coordinates are nonzero"""
    if q.is_infinite or q.value > 2.0:
        raise InvalidInputError(f"projection exponent must lie in [1, 2], got {q}")
    if a.support().size <= 2:
        return MCEstimate.exact(exact_projection_ratio_2d(_pad_to_two(a), q), seed)
    return estimate_projection_ratio(ProjectionQuery(a=a, q=q, samples=samples, seed=seed))


def _emit(kind: str, a: Direction, exponent_name: str, exponent: Exponent, estimate: MCEstimate) -> None:
    print(json.dumps({
        "kind": kind,
        "direction": a.label,
        exponent_name: exponent.label,
        "value": estimate.mean,
        "std_error": estimate.std_error,
        "samples": estimate.samples,
        "seed": estimate.seed,
        "heavy_tail": estimate.heavy_tail,
    }, indent=2))


def cmd_section(args: argparse.Namespace) -> int:
    a = parse_direction(args.a)
    p = Exponent.of(args.p)
    estimate = section_ratio(a, p, samples=args.samples, seed=args.seed)
    _emit("section", a, "p", p, estimate)
    return 0


def cmd_projection(args: argparse.Namespace) -> int:
    a = parse_direction(args.a)
    q = Exponent.of(args.q)
    estimate = projection_ratio(a, q, args.samples, args.seed)
    _emit("projection", a, "q", q, estimate)
    return 0


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--a", required=True, help="direction as comma-separated coordinates, e.g. 1,1")
    parser.add_argument("--samples", type=int, default=settings.DEFAULT_SAMPLES)
    parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)


def register(subparsers) -> None:
    section = subparsers.add_parser("section", help="section ratio A_{n,p}(a)")
    _common(section)
    section.add_argument("--p", required=True, help="exponent p >= 1 or 'inf'")
    section.set_defaults(handler=cmd_section)

    projection = subparsers.add_parser("projection", help="projection ratio Gamma(1/q) E|sum a_j X_j|")
    _common(projection)
    projection.add_argument("--q", required=True, help="exponent q in [1, 2]")
    projection.set_defaults(handler=cmd_projection)
