import logging
import math
from typing import Optional

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate, special

from lpslice.core.exceptions import AccuracyError, DomainError
from lpslice.schemas.queries import QuadratureSpec

logger = logging.getLogger(__name__)

PSI_NODES = 64
PSI_BATCH = 4096
PSI_LIMIT = math.sqrt(6.0 / math.pi)

_psi_u, _psi_w = leggauss(PSI_NODES)
# nodes mapped from [-1, 1] to [0, pi]
_PSI_U = 0.5 * math.pi * (_psi_u + 1.0)
_PSI_W = 0.5 * math.pi * _psi_w


def _require_positive(name: str, x: float) -> float:
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"{name} requires a positive finite argument, got {x}")
    return x


def log_gamma(x: float) -> float:
    """log Gamma(x) for x > 0"""
    return float(special.gammaln(_require_positive("log_gamma", x)))


def gamma(x: float) -> float:
    """Gamma(x) for x > 0, through log_gamma"""
    return math.exp(log_gamma(x))


def gamma_ratio(a: float, b: float) -> float:
    """Gamma(a) / Gamma(b) without overflow"""
    return math.exp(log_gamma(a) - log_gamma(b))


def gamma_second_derivative(x: float) -> float:
    """Gamma''(x) = Gamma(x) (psi'(x) + psi(x)^2)"""
    x = _require_positive("gamma_second_derivative", x)
    psi = float(special.digamma(x))
    return gamma(x) * (float(special.polygamma(1, x)) + psi * psi)


def haagerup_F(s: float) -> float:
    """F(s) = 2/sqrt(pi s) * Gamma((s+1)/2) / Gamma(s/2)"""
    s = _require_positive("haagerup_F", s)
    return 2.0 / math.sqrt(math.pi * s) * gamma_ratio(0.5 * (s + 1.0), 0.5 * s)


def gamma_second_difference(x: float) -> float:
    """h(x) = Gamma(1+3x) - 2 Gamma(1+2x) + Gamma(1+x) on [0, 1/3)"""
    x = float(x)
    if not 0.0 <= x < 1.0 / 3.0:
        raise DomainError(f"gamma_second_difference needs 0 <= x < 1/3, got {x}")
    if x == 0.0:
        return 0.0
    # Gamma(1+kx) - 1 via expm1 keeps the O(x^2) remainder after the linear terms cancel
    g1, g2, g3 = (math.expm1(float(special.gammaln(1.0 + k * x))) for k in (1, 2, 3))
    return g3 - 2.0 * g2 + g1


def sine_power_integral(s: float) -> float:
    """I_s = integral of sin(u)^s over [0, pi]"""
    return math.sqrt(math.pi) * gamma_ratio(0.5 * (s + 1.0), 0.5 * s + 1.0)


def ball_psi(s: float, spec: Optional[QuadratureSpec] = None) -> float:
    """Psi(s) = (2/pi) sqrt(s) * integral of |sin t / t|^s over (0, inf), s >= 2"""
    s = float(s)
    if not math.isfinite(s) or s < 2.0:
        raise DomainError(f"ball_psi is evaluated only for s >= 2, got {s}")
    spec = spec or QuadratureSpec()
    tol = spec.abs_tol
    prefactor = 2.0 / math.pi * math.sqrt(s)

    head, head_err = integrate.quad(
        lambda t: np.abs(np.sinc(t / math.pi)) ** s,
        0.0, math.pi, epsabs=tol / (8.0 * prefactor), epsrel=1e-14, limit=400,
    )
    if head_err * prefactor > tol / 4.0:
        raise AccuracyError(f"first-period quadrature error {head_err:.3g} exceeds tolerance")

    sin_pow = np.sin(_PSI_U) ** s * _PSI_W
    body = 0.0
    periods = 1
    tail = 0.0
    while True:
        span = periods * math.pi
        crude = prefactor * span ** (1.0 - s) / (s - 1.0)
        if crude <= tol / 2.0:
            break
        # mean-value tail with error at most I_s (N pi)^(-s) <= pi (N pi)^(-s)
        if prefactor * math.pi * span ** (-s) <= tol / 2.0:
            tail = sine_power_integral(s) / math.pi * span ** (1.0 - s) / (s - 1.0)
            break
        if periods >= spec.max_periods:
            raise AccuracyError(
                f"ball_psi({s}) tail bound {crude:.3g} above {tol:.3g} after {periods} periods"
            )
        stop = min(periods + PSI_BATCH, spec.max_periods)
        k = np.arange(periods, stop, dtype=float)
        shifted = _PSI_U[None, :] + math.pi * k[:, None]
        body += float(np.sum(np.sum(sin_pow[None, :] * shifted ** (-s), axis=1)[::-1]))
        periods = stop
    logger.debug("ball_psi(%s): %d periods, tail estimate %.3g", s, periods, tail)
    return prefactor * (head + body + tail)


def ball_psi_limit() -> float:
    """Psi(inf) = sqrt(6/pi)"""
    return PSI_LIMIT
