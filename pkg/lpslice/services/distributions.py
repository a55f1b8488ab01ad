"""Laws of the random ingredients: section radii R, projection factors X,
uniform directions on the 2-sphere, uniform U on [-1, 1] and Rademacher signs.

Samplers come in two forms: *_block functions that fill an array from a
generator (used by the estimators) and sample_* functions that return the
value at one stream index.
"""
import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
from scipy import special as sp

from lpslice.core.exceptions import DivergentMomentError, InvalidInputError
from lpslice.schemas.domain import Exponent
from lpslice.services.montecarlo import TAG_FACTOR, TAG_RADIUS, TAG_SPHERE, RngStream
from lpslice.services.special import gamma_ratio, log_gamma

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class SectionRadiusLaw:
    """R with density x^p e^{-x^p} / alpha_p on (0, inf); R = 1 when p = inf"""
    p: Exponent

    @classmethod
    def of(cls, p) -> "SectionRadiusLaw":
        return cls(Exponent.of(p))

    @property
    def alpha(self) -> float:
        """alpha_p = Gamma(1 + 1/p) / p"""
        if self.p.is_infinite:
            return 0.0
        return math.exp(log_gamma(1.0 + 1.0 / self.p.value)) / self.p.value

    @property
    def gamma_shape(self) -> float:
        """R^p is Gamma-distributed with shape (p+1)/p"""
        return 1.0 + self.p.reciprocal


@dataclass(frozen=True)
class ProjectionFactorLaw:
    """X with density |x|^{(2-q)/(q-1)} e^{-|x|^{q/(q-1)}} / gamma_q, for q in (1, 2]"""
    q: Exponent

    def __post_init__(self):
        if self.q.is_infinite or not 1.0 < self.q.value <= 2.0:
            raise InvalidInputError(f"projection factor law needs q in (1, 2], got {self.q}")

    @classmethod
    def of(cls, q) -> "ProjectionFactorLaw":
        return cls(Exponent.of(q))

    @property
    def normalizer(self) -> float:
        """gamma_q = 2(q-1) Gamma(1 + 1/q)"""
        q = self.q.value
        return 2.0 * (q - 1.0) * math.exp(log_gamma(1.0 + 1.0 / q))

    @property
    def gamma_shape(self) -> float:
        """|X|^{q/(q-1)} is Gamma-distributed with shape 1/q"""
        return 1.0 / self.q.value


def density_R(law: SectionRadiusLaw, x: ArrayLike) -> ArrayLike:
    """g_p(x); zero off the positive half-line"""
    if law.p.is_infinite:
        raise InvalidInputError("R is the constant 1 when p = inf and has no density")
    p = law.p.value
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(x_arr)
    pos = x_arr > 0.0
    with np.errstate(over="ignore"):
        logx = np.log(x_arr[pos])
        out[pos] = np.exp(p * logx - np.exp(p * logx) - math.log(law.alpha))
    return out if np.ndim(x) else float(out[0])


def cdf_R(law: SectionRadiusLaw, x: ArrayLike) -> ArrayLike:
    """P(R <= x) = P(Gamma((p+1)/p) <= x^p)"""
    x_arr = np.asarray(x, dtype=float)
    if law.p.is_infinite:
        out = (x_arr >= 1.0).astype(float)
    else:
        with np.errstate(over="ignore", divide="ignore"):
            out = np.where(x_arr > 0.0, sp.gammainc(law.gamma_shape, np.clip(x_arr, 0.0, None) ** law.p.value), 0.0)
    return out if out.ndim else float(out)


def moment_R(law: SectionRadiusLaw, s: float) -> float:
    """E R^s = Gamma(1 + (s+1)/p) / Gamma(1 + 1/p), s > -p - 1"""
    if law.p.is_infinite:
        return 1.0
    p = law.p.value
    if s <= -p - 1.0:
        raise DivergentMomentError(f"E R^s diverges for s = {s} <= -p - 1 = {-p - 1.0}")
    return gamma_ratio(1.0 + (s + 1.0) / p, 1.0 + 1.0 / p)


def radius_block(law: SectionRadiusLaw, gen: np.random.Generator, shape) -> np.ndarray:
    """R = exp(log(G)/p) with G ~ Gamma((p+1)/p), kept in log space for large p"""
    if law.p.is_infinite:
        return np.ones(shape)
    g = gen.standard_gamma(law.gamma_shape, size=shape)
    return np.exp(np.log(g) / law.p.value)


def sample_R(law: SectionRadiusLaw, stream: RngStream, i: int) -> float:
    block, offset = stream.locate(i)
    values = radius_block(law, stream.with_tag(TAG_RADIUS).generator(block), (stream.block_size,))
    return float(values[offset])


def density_absX(law: ProjectionFactorLaw, x: ArrayLike) -> ArrayLike:
    """f_q(x), the density of |X|; zero for x <= 0"""
    q = law.q.value
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(x_arr)
    pos = x_arr > 0.0
    logx = np.log(x_arr[pos])
    log_norm = math.log(q - 1.0) + log_gamma(1.0 + 1.0 / q)
    with np.errstate(over="ignore"):
        out[pos] = np.exp((2.0 - q) / (q - 1.0) * logx - np.exp(q / (q - 1.0) * logx) - log_norm)
    return out if np.ndim(x) else float(out[0])


def cdf_absX(law: ProjectionFactorLaw, x: ArrayLike) -> ArrayLike:
    """P(|X| <= x) = P(Gamma(1/q) <= x^{q/(q-1)})"""
    q = law.q.value
    x_arr = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        out = np.where(x_arr > 0.0, sp.gammainc(law.gamma_shape, np.clip(x_arr, 0.0, None) ** (q / (q - 1.0))), 0.0)
    return out if out.ndim else float(out)


def moment_absX(law: ProjectionFactorLaw, s: float) -> float:
    """E|X|^s = Gamma(1 + (s-1)(q-1)/q) / Gamma(1/q), s > -1/(q-1)"""
    q = law.q.value
    if s <= -1.0 / (q - 1.0):
        raise DivergentMomentError(f"E|X|^s diverges for s = {s} <= -1/(q-1)")
    return gamma_ratio(1.0 + (s - 1.0) * (q - 1.0) / q, 1.0 / q)


def factor_block(law: ProjectionFactorLaw, gen: np.random.Generator, shape) -> np.ndarray:
    """Signed X = +-G^{(q-1)/q}, G ~ Gamma(1/q).

    Shape 1/q < 1 is boosted: G = G1 * U^q with G1 ~ Gamma(1/q + 1), so that
    log|X| = ((q-1)/q) log G1 + (q-1) log U stays accurate as q -> 1.
    """
    q = law.q.value
    g1 = gen.standard_gamma(law.gamma_shape + 1.0, size=shape)
    u = gen.random(size=shape)
    sign = np.where(gen.random(size=shape) < 0.5, -1.0, 1.0)
    log_abs = (q - 1.0) / q * np.log(g1) + (q - 1.0) * np.log1p(-u)
    return sign * np.exp(log_abs)


def sample_X(law: ProjectionFactorLaw, stream: RngStream, i: int) -> float:
    block, offset = stream.locate(i)
    values = factor_block(law, stream.with_tag(TAG_FACTOR).generator(block), (stream.block_size,))
    return float(values[offset])


def sphere_block(gen: np.random.Generator, shape) -> np.ndarray:
    """Uniform points on the unit 2-sphere, normalized Gaussians; trailing axis of length 3"""
    shape = tuple(shape) if isinstance(shape, (tuple, list)) else (shape,)
    z = gen.standard_normal(size=shape + (3,))
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def sample_sphere3(stream: RngStream, i: int) -> np.ndarray:
    block, offset = stream.locate(i)
    return sphere_block(stream.with_tag(TAG_SPHERE).generator(block), (stream.block_size,))[offset]


def rademacher_block(gen: np.random.Generator, shape) -> np.ndarray:
    return np.where(gen.random(size=shape) < 0.5, -1.0, 1.0)


def uniform_block(gen: np.random.Generator, shape) -> np.ndarray:
    """U uniform on [-1, 1]"""
    return gen.uniform(-1.0, 1.0, size=shape)


def two_atom_radius_squared(a1: float, a2: float, u: ArrayLike) -> ArrayLike:
    """|a1 xi1 + a2 xi2|^2 written as a1^2 + a2^2 + 2 a1 a2 U"""
    if a1 <= 0.0 or a2 <= 0.0:
        raise InvalidInputError("two-atom representation needs a1, a2 > 0")
    u_arr = np.asarray(u, dtype=float)
    if np.any(np.abs(u_arr) > 1.0):
        raise InvalidInputError("u must lie in [-1, 1]")
    value = np.maximum(a1 * a1 + a2 * a2 + 2.0 * a1 * a2 * u_arr, 0.0)
    return value if value.ndim else float(value)


def radius_and_sphere(law: SectionRadiusLaw, stream: RngStream, block: int, chunk: int, width: int) -> Tuple[np.ndarray, np.ndarray]:
    """Radii (B, width) and sphere points (B, width, 3) for one coordinate chunk"""
    gen = stream.generator(block, chunk)
    radii = radius_block(law, gen, (stream.block_size, width))
    xi = sphere_block(gen, (stream.block_size, width))
    return radii, xi
