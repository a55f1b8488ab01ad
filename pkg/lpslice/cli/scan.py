import argparse
import logging
import math
import sys
from typing import Callable, List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy import optimize

from lpslice.cli.estimates import projection_ratio
from lpslice.core.config import settings
from lpslice.core.exceptions import InvalidInputError
from lpslice.schemas.domain import Direction, Exponent
from lpslice.schemas.queries import ScanRow, SectionQuery
from lpslice.services.projections import projection_ratio_constant
from lpslice.services.sections import ball_direction_value, estimate_section_ratio
from lpslice.services.special import log_gamma

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["exponent", "diagonal_value", "ball_value", "difference", "n_used"]


def diagonal_limit_section(p) -> float:
    """lim_n A_{n,p}(1/sqrt(n), ..., 1/sqrt(n)) = Gamma(1+1/p) sqrt(2/pi) sqrt(3 Gamma(1+1/p) / Gamma(1+3/p))"""
    p = Exponent.of(p)
    if not p.is_infinite and p.value <= 1.0:
        raise InvalidInputError(f"diagonal section limit needs p in (1, inf], got {p}")
    r = p.reciprocal
    log_scale = log_gamma(1.0 + r)
    log_second_moment = log_gamma(1.0 + 3.0 * r) - log_scale
    return math.exp(log_scale) * math.sqrt(2.0 / math.pi) * math.sqrt(3.0 * math.exp(-log_second_moment))


def diagonal_limit_projection(q) -> float:
    """lim_n E|sum X_j / sqrt(n)| = sqrt(2 Gamma(2 - 1/q) / (pi Gamma(1/q)))"""
    q = Exponent.of(q)
    if q.is_infinite or not 1.0 < q.value <= 2.0:
        raise InvalidInputError(f"diagonal projection limit needs q in (1, 2], got {q}")
    second_moment = math.exp(log_gamma(2.0 - 1.0 / q.value) - log_gamma(1.0 / q.value))
    return math.sqrt(2.0 * second_moment / math.pi)


def parse_grid(raw: str) -> List[float]:
    """Comma-separated values or start:stop:count"""
    raw = raw.strip()
    if not raw:
        raise InvalidInputError("empty grid")
    if ":" in raw:
        try:
            start, stop, count = raw.split(":")
            grid = [float(x) for x in np.linspace(float(start), float(stop), int(count))]
        except ValueError:
            raise InvalidInputError(f"cannot parse grid {raw!r}")
    else:
        try:
            grid = [float(tok) for tok in raw.split(",") if tok.strip()]
        except ValueError:
            raise InvalidInputError(f"cannot parse grid {raw!r}")
    if not grid:
        raise InvalidInputError("empty grid")
    return grid


def _limit_difference(mode: str) -> Callable[[float], float]:
    if mode == "section":
        return lambda p: diagonal_limit_section(p) - ball_direction_value(Exponent.of(p))
    # ratio level on both sides: Gamma(1/q) times the bare moments
    return lambda q: (
        math.exp(log_gamma(1.0 / q)) * diagonal_limit_projection(q) - projection_ratio_constant(Exponent.of(q))
    )


def scan_rows(mode: str, grid: List[float], n: Optional[int], samples: int, seed: int) -> List[ScanRow]:
    rows = []
    for x in grid:
        exponent = Exponent.of(x)
        if mode == "section":
            if not exponent.is_infinite and exponent.value <= 2.0:
                raise InvalidInputError(f"section scan needs p > 2, got {x}")
            ball = ball_direction_value(exponent)
            limit = diagonal_limit_section(exponent)
        else:
            if exponent.is_infinite or not 1.0 < exponent.value < 2.0:
                raise InvalidInputError(f"projection scan needs q in (1, 2), got {x}")
            ball = projection_ratio_constant(exponent)
            limit = math.exp(log_gamma(1.0 / exponent.value)) * diagonal_limit_projection(exponent)
        rows.append(ScanRow(exponent=x, diagonal_value=limit, ball_value=ball, n_used="limit"))
        if n:
            diagonal = Direction(coords=(1.0,) * n)
            if mode == "section":
                est = estimate_section_ratio(SectionQuery(a=diagonal, p=exponent, samples=samples, seed=seed))
            else:
                est = projection_ratio(diagonal, exponent, samples, seed)
            rows.append(ScanRow(exponent=x, diagonal_value=est.mean, ball_value=ball, n_used=n))
    return rows


def bracket_root(mode: str, grid: List[float]) -> Optional[Tuple[float, float, float]]:
    """(lo, hi, root) for the first sign change of the limit difference along the grid"""
    finite = sorted(x for x in grid if math.isfinite(x))
    diff = _limit_difference(mode)
    values = [diff(x) for x in finite]
    for (lo, f_lo), (hi, f_hi) in zip(zip(finite, values), zip(finite[1:], values[1:])):
        if f_lo == 0.0:
            return lo, lo, lo
        if f_lo * f_hi < 0.0:
            return lo, hi, float(optimize.brentq(diff, lo, hi, xtol=1e-12))
    return None


def write_csv(rows: List[ScanRow], out) -> None:
    frame = pd.DataFrame([row.model_dump() for row in rows], columns=CSV_COLUMNS)
    frame.to_csv(out, index=False, float_format="%.12g", lineterminator="\n")


def cmd_scan(args: argparse.Namespace) -> int:
    grid = parse_grid(args.grid)
    rows = scan_rows(args.mode, grid, args.n, args.samples, args.seed)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            write_csv(rows, fh)
    else:
        write_csv(rows, sys.stdout)
    root = bracket_root(args.mode, grid)
    if root is not None:
        lo, hi, x = root
        logger.info("%s scan: difference changes sign in [%g, %g], root %.10g", args.mode, lo, hi, x)
        print(f"# root in [{lo:g}, {hi:g}]: {x:.10g}", file=sys.stderr)
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("scan", help="diagonal against the two-coordinate direction along an exponent grid")
    parser.add_argument("--mode", choices=("section", "projection"), required=True)
    parser.add_argument("--grid", required=True, help="comma-separated exponents or start:stop:count")
    parser.add_argument("--n", type=int, default=None, help="also estimate the diagonal at this dimension")
    parser.add_argument("--samples", type=int, default=settings.DEFAULT_SAMPLES)
    parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    parser.add_argument("--output", default=None, help="CSV path (default: stdout)")
    parser.set_defaults(handler=cmd_scan)
