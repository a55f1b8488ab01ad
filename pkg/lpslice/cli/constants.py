import argparse

import pandas as pd

from lpslice.schemas.domain import VerdictStatus
from lpslice.services.stability import (
    BALL_GAMMA0,
    BALL_NEAR_C1,
    SZAREK_DELTA0,
    SZAREK_GAMMA0,
    ball_case_constants,
    szarek_case_constants,
)
from lpslice.services.suites import ball_constant_verdicts, szarek_constant_verdicts


def cmd_constants(args: argparse.Namespace) -> int:
    if args.side == "szarek":
        consts = szarek_case_constants(
            delta0=SZAREK_DELTA0 if args.delta0 is None else args.delta0,
            gamma0=SZAREK_GAMMA0 if args.gamma0 is None else args.gamma0,
        )
        minimum = ("kappa1", consts.kappa1)
        verdicts = szarek_constant_verdicts(consts)
    else:
        consts = ball_case_constants(
            gamma0=BALL_GAMMA0 if args.gamma0 is None else args.gamma0,
            c1=BALL_NEAR_C1 if args.c1 is None else args.c1,
        )
        minimum = ("kappa_inf", consts.kappa_inf)
        verdicts = ball_constant_verdicts(consts)

    table = pd.DataFrame(
        [{"name": name, "value": value} for name, value in consts.candidates.items()] + [
            {"name": minimum[0], "value": minimum[1]}
        ]
    )
    print(table.to_string(index=False, float_format=lambda v: f"{v:.6g}"))
    if any(value is not None for value in (args.delta0, args.gamma0, args.c1)):
        # quoted values apply only at the default parameters
        return 0
    print()
    checks = pd.DataFrame([
        {"check": v.statement, "status": v.status.value, "value": v.lhs} for v in verdicts
    ])
    print(checks.to_string(index=False, float_format=lambda v: f"{v:.6g}"))
    return 1 if any(v.status is VerdictStatus.FAIL for v in verdicts) else 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("constants", help="recompute the stability constants")
    parser.add_argument("--side", choices=("szarek", "ball"), required=True)
    parser.add_argument("--delta0", type=float, default=None, help="Szarek side: deficit split point")
    parser.add_argument("--gamma0", type=float, default=None, help="large-a1 threshold")
    parser.add_argument("--c1", type=float, default=None, help="Ball side: near-regime constant used far away")
    parser.set_defaults(handler=cmd_constants)
