import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy import optimize

from lpslice.core.config import settings
from lpslice.core.exceptions import DomainError, InvalidInputError
from lpslice.schemas.domain import SQRT2, Direction, Exponent, StabilityReport, deficit
from lpslice.schemas.queries import BallConstants, ProjectionQuery, SectionQuery, SzarekConstants
from lpslice.services.projections import estimate_projection_ratio, khinchin_exact
from lpslice.services.sections import cube_section_fourier, estimate_section_ratio
from lpslice.services.special import ball_psi, haagerup_F

logger = logging.getLogger(__name__)

KAPPA_SZAREK = 8e-5
KAPPA_BALL = 6e-5
SZAREK_DELTA0 = 0.66
SZAREK_GAMMA0 = 8e-5
BALL_GAMMA0 = 3.2e-5
BALL_NEAR_C1 = 0.12
NEAR_GRID = 10_000
FOURIER_MAX_N = 6
S_THRESHOLD = 9.0 / 4.0


def robust_szarek_margin(a: Direction, kappa1: float = KAPPA_SZAREK,
                         samples: Optional[int] = None, seed: Optional[int] = None) -> StabilityReport:
    """E|sum a_j eps_j| - 1/sqrt(2) - kappa1 sqrt(delta(a))"""
    delta = deficit(a)
    std_error = 0.0
    if a.support().size <= settings.ENUM_MAX_N:
        value, method = khinchin_exact(a), "exact"
    else:
        est = estimate_projection_ratio(ProjectionQuery(
            a=a, q=Exponent(value=1.0), samples=samples or settings.DEFAULT_SAMPLES,
            seed=settings.DEFAULT_SEED if seed is None else seed,
        ))
        value, method, std_error = est.mean, "montecarlo", est.std_error
    bound = 1.0 / SQRT2 + kappa1 * math.sqrt(delta)
    return StabilityReport(
        direction=a, deficit=delta, functional_value=value, bound=bound,
        margin=value - bound, method=method, std_error=std_error,
    )


def robust_ball_margin(a: Direction, samples: Optional[int] = None, seed: Optional[int] = None,
                       kappa_inf: float = KAPPA_BALL) -> StabilityReport:
    """sqrt(2) - kappa_inf sqrt(delta(a)) - vol(Q_n cap a^perp)"""
    delta = deficit(a)
    std_error = 0.0
    if a.support().size <= FOURIER_MAX_N:
        value, method = cube_section_fourier(a), "fourier"
    else:
        est = estimate_section_ratio(SectionQuery(
            a=a, p=Exponent.inf(), samples=samples or settings.DEFAULT_SAMPLES,
            seed=settings.DEFAULT_SEED if seed is None else seed,
        ))
        value, method, std_error = est.mean, "montecarlo", est.std_error
    bound = SQRT2 - kappa_inf * math.sqrt(delta)
    return StabilityReport(
        direction=a, deficit=delta, functional_value=value, bound=bound,
        margin=bound - value, method=method, std_error=std_error,
    )


def szarek_case_constants(delta0: float = SZAREK_DELTA0, gamma0: float = SZAREK_GAMMA0) -> SzarekConstants:
    """Candidate constants of the four deficit regimes and their minimum kappa1"""
    if not 0.0 < delta0 < 2.0 / 3.0:
        raise InvalidInputError(f"delta0 must lie in (0, 2/3), got {delta0}")
    if not 0.0 < gamma0 <= 1.0 - 1.0 / SQRT2:
        raise InvalidInputError(f"gamma0 must lie in (0, 1 - 1/sqrt(2)], got {gamma0}")
    if 2.0 * math.sqrt(gamma0) >= delta0:
        raise InvalidInputError("need 2 sqrt(gamma0) < delta0")
    f2 = haagerup_F(2.0)
    c0 = (math.sqrt((4.0 - delta0) / 5.0) - math.sqrt(delta0)) / (2.0 * SQRT2)
    c1 = (haagerup_F(8.0 / (2.0 - delta0) ** 2) - f2) / (2.0 * SQRT2)
    shifted = 2.0 + 2.0 * math.sqrt(gamma0) - delta0
    c2 = (
        (haagerup_F(8.0 / shifted ** 2) - f2) / (2.0 * SQRT2) * math.sqrt(delta0 - 2.0 * math.sqrt(gamma0))
        - math.sqrt(2.0 * gamma0 + gamma0 ** 2)
    )
    kappa1 = min(c0, c1, c2, gamma0)
    logger.info("szarek constants delta0=%g gamma0=%g: c0=%.4g c1=%.4g c2=%.4g kappa1=%.4g",
                delta0, gamma0, c0, c1, c2, kappa1)
    return SzarekConstants(delta0=delta0, gamma0=gamma0, c0=c0, c1=c1, c2=c2, kappa1=kappa1)


def _ball_M(delta: float) -> float:
    root = math.sqrt(delta * (2.0 - delta))
    first = 1.0 / (1.0 - delta + root / math.sqrt(5.0))
    second = (1.0 - delta - root / (2.0 * SQRT2)) / (1.0 - delta) ** 2
    return max(first, second)


def ball_M(delta: float) -> float:
    """Upper factor M(delta) of the near-extremizer cube-section bound, 0 < delta < 1/4"""
    if not 0.0 < delta < 0.25:
        raise DomainError(f"ball_M needs 0 < delta < 1/4, got {delta}")
    return _ball_M(delta)


def ball_near_ratio(delta: float) -> float:
    """sqrt(2)(1 - M(delta)) / sqrt(delta); continuous up to delta = 1/4"""
    if not 0.0 < delta <= 0.25:
        raise DomainError(f"near-regime ratio needs 0 < delta <= 1/4, got {delta}")
    return SQRT2 * (1.0 - _ball_M(delta)) / math.sqrt(delta)


def near_regime_infimum(grid: int = NEAR_GRID) -> Tuple[float, float]:
    """(inf, argmin) of sqrt(2)(1 - M)/sqrt(delta) over (0, 1/4): grid, then bounded refinement"""
    deltas = np.linspace(0.25 / grid, 0.25, grid)
    values = np.array([ball_near_ratio(float(d)) for d in deltas])
    idx = int(np.argmin(values))
    best_delta, best = float(deltas[idx]), float(values[idx])
    lo = float(deltas[max(idx - 1, 0)])
    hi = float(deltas[min(idx + 1, grid - 1)])
    if hi > lo:
        res = optimize.minimize_scalar(ball_near_ratio, bounds=(lo, hi), method="bounded",
                                       options={"xatol": 1e-12})
        if res.success and res.fun < best:
            best_delta, best = float(res.x), float(res.fun)
    return best, best_delta


def ball_case_constants(gamma0: float = BALL_GAMMA0, c1: float = BALL_NEAR_C1) -> BallConstants:
    """Near, far and large-a1 constants of the robust cube-section bound and kappa_inf"""
    c1_near, c1_delta = near_regime_infimum()
    theta = (3.0 / math.pi) ** 0.25
    psi_margin = SQRT2 * (1.0 - theta)
    far_composite = (
        SQRT2
        - SQRT2 * min(c1 * math.sqrt(0.125 - math.sqrt(gamma0)), 1.0 - theta)
        + 2.0 * math.sqrt(gamma0 ** 2 + 2.0 * gamma0)
    )
    c2_far = min(psi_margin, SQRT2 - far_composite)
    gamma0_term = 2.0 * gamma0 / (1.0 + gamma0 * SQRT2)
    kappa_inf = min(c1_near, c2_far / SQRT2, gamma0_term)
    logger.info("ball constants: c1=%.4g c2=%.4g gamma0 term=%.4g kappa_inf=%.4g",
                c1_near, c2_far, gamma0_term, kappa_inf)
    return BallConstants(
        c1_near=c1_near, c1_near_delta=c1_delta, psi_margin=psi_margin, far_composite=far_composite,
        c2_far=c2_far, gamma0=gamma0, gamma0_term=gamma0_term, kappa_inf=kappa_inf,
    )


def s_of_delta(delta: float) -> Tuple[float, bool]:
    """(s, s >= 9/4) with s = 2 (1 - delta/2)^{-2}"""
    if not 0.0 <= delta < 2.0:
        raise DomainError(f"s_of_delta needs 0 <= delta < 2, got {delta}")
    s = 2.0 / (1.0 - 0.5 * delta) ** 2
    return s, s >= S_THRESHOLD


def s_threshold_delta() -> float:
    """delta at which s(delta) = 9/4, namely 2(1 - 2 sqrt(2)/3)"""
    return 2.0 * (1.0 - 2.0 * SQRT2 / 3.0)


def haagerup_bound(a: Direction) -> float:
    """sum_j a_j^2 F(a_j^{-2}) over the nonzero coordinates"""
    return float(sum(x * x * haagerup_F(1.0 / (x * x)) for x in a.support()))


def ball_projection_bound(a: Direction) -> float:
    """vol(Q_n cap a^perp) <= 1/a1"""
    return 1.0 / a.a1


def ball_hoelder_bound(a: Direction) -> float:
    """prod_j Psi(a_j^{-2})^{a_j^2}, an upper bound for vol(Q_n cap a^perp) when a1 <= 1/sqrt(2)"""
    if a.a1 > 1.0 / SQRT2 + 1e-15:
        raise InvalidInputError("Hoelder bound needs a1 <= 1/sqrt(2)")
    log_bound = 0.0
    for x in a.support():
        s = max(1.0 / (x * x), 2.0)
        log_bound += x * x * math.log(ball_psi(s))
    return math.exp(log_bound)


def ball_far_small_a1_bound(a: Direction) -> Tuple[float, float]:
    """(1/a1, sum_j a_j^2 Psi(a_j^{-2})), two upper bounds for vol(Q_n cap a^perp) away from the extremizer"""
    if a.a1 > 1.0 / SQRT2 + 1e-15:
        raise InvalidInputError("the Psi bound needs a1 <= 1/sqrt(2)")
    psi_sum = float(sum(x * x * ball_psi(max(1.0 / (x * x), 2.0)) for x in a.support()))
    return ball_projection_bound(a), psi_sum
