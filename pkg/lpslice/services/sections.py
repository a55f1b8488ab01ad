import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from lpslice.core.config import settings
from lpslice.core.exceptions import AccuracyError, DimensionError, InvalidInputError
from lpslice.schemas.domain import Direction, Exponent, MCEstimate, canonicalize
from lpslice.schemas.queries import SectionQuery
from lpslice.services import montecarlo
from lpslice.services.distributions import (
    SectionRadiusLaw,
    radius_and_sphere,
    uniform_block,
)
from lpslice.services.montecarlo import TAG_BOX, TAG_SPHERE, TAG_UNIFORM, RngStream
from lpslice.services.special import log_gamma

logger = logging.getLogger(__name__)

FOURIER_NODES = 32
FOURIER_BATCH = 2048
FOURIER_TOL = 1e-9
TAIL_FACTORS = 8

_gl_x, _gl_w = leggauss(FOURIER_NODES)


def _chunk_bounds(k: int, width: int):
    for chunk, start in enumerate(range(0, k, width)):
        yield chunk, start, min(start + width, k)


def _grouped_sums(
    coords: np.ndarray,
    law: SectionRadiusLaw,
    stream: RngStream,
    block: int,
    groups: Sequence[Tuple[int, int]],
) -> List[np.ndarray]:
    """Sum_j a_j R_j xi_j over each coordinate range in `groups`, one block of samples"""
    k = int(np.count_nonzero(coords))
    width = settings.COORD_CHUNK
    sums = [np.zeros((stream.block_size, 3)) for _ in groups]
    for chunk, start, stop in _chunk_bounds(k, width):
        radii, xi = radius_and_sphere(law, stream, block, chunk, stop - start)
        terms = (coords[start:stop] * radii)[:, :, None] * xi
        for g, (lo, hi) in enumerate(groups):
            lo_c, hi_c = max(lo, start), min(hi, stop)
            if lo_c < hi_c:
                sums[g] += terms[:, lo_c - start:hi_c - start, :].sum(axis=1)
    return sums


def _norm3(v: np.ndarray) -> np.ndarray:
    return np.sqrt(np.einsum("ij,ij->i", v, v))


def estimate_section_ratio(query: SectionQuery) -> MCEstimate:
    """A_{n,p}(a) = Gamma(1 + 1/p) E|sum a_j R_j xi_j|^{-1}; R = 1 when p = inf"""
    law = SectionRadiusLaw(query.p)
    coords = query.a.array()
    scale = 1.0 if query.p.is_infinite else math.exp(log_gamma(1.0 + query.p.reciprocal))
    stream = RngStream(query.seed, TAG_SPHERE)
    groups = [(0, query.a.n)]

    def block_fn(block: int, size: int) -> np.ndarray:
        (total,) = _grouped_sums(coords, law, stream, block, groups)
        return scale / _norm3(total)[:size]

    result = montecarlo.estimate(block_fn, query.samples, query.seed)
    logger.debug("section ratio a=%s p=%s: %.8f +- %.2g", query.a.label, query.p, result.mean, result.std_error)
    return result


def exact_section_ratio_2d(a: Direction, p: Exponent) -> float:
    """A_{2,p}(a) = 1/||a||_p"""
    if a.n != 2:
        raise DimensionError(f"closed form holds only for n = 2, got n = {a.n}")
    if p.is_infinite:
        return 1.0 / a.a1
    return 1.0 / lp_norm(a.array(), p.value)


def lp_norm(x: np.ndarray, r: float) -> float:
    """||x||_r, computed after scaling by the largest entry"""
    x = np.abs(np.asarray(x, dtype=float))
    top = float(x.max())
    if top == 0.0:
        return 0.0
    if math.isinf(r):
        return top
    return top * float(np.sum((x / top) ** r)) ** (1.0 / r)


def ball_direction_value(p: Exponent) -> float:
    """A_{n,p}((e1+e2)/sqrt(2)) = 2^{1/2 - 1/p}"""
    return 2.0 ** (0.5 - p.reciprocal)


def _fourier_horizon(support: np.ndarray, tol: float) -> float:
    """Smallest T for which the sinc-product tail beyond T is below tol/2"""
    best = math.inf
    for kk in range(3, min(support.size, TAIL_FACTORS) + 1):
        log_const = float(np.sum(np.log(2.0 / support[:kk])))
        # (1/pi) prod(2/a_j) T^{1-kk} / (kk-1) <= tol/2
        log_t = (log_const - math.log(math.pi * (kk - 1) * tol / 2.0)) / (kk - 1)
        best = min(best, math.exp(log_t))
    return best


def cube_section_fourier(a: Direction, tol: float = FOURIER_TOL, max_chunks: Optional[int] = None) -> float:
    """vol(Q_n cap a^perp) for the unit-volume cube, (1/pi) int_0^inf prod_j sinc(a_j t/2) dt"""
    support = a.support()
    k = support.size
    if k == 1:
        return 1.0
    if k == 2:
        return 1.0 / support[0]
    max_chunks = max_chunks or settings.FOURIER_MAX_CHUNKS
    horizon = _fourier_horizon(support, tol)
    # chunks end on zeros of the leading factor, split further when the other factors oscillate faster
    splits = max(1, math.ceil(float(support.sum()) / (4.0 * support[0])))
    width = 2.0 * math.pi / support[0] / splits
    chunks = math.ceil(horizon / width)
    if chunks > max_chunks:
        raise AccuracyError(f"cube section quadrature needs {chunks} chunks, cap is {max_chunks}")

    half = 0.5 * width
    nodes = half * (_gl_x + 1.0)
    weights = half * _gl_w
    total = 0.0
    for first in range(0, chunks, FOURIER_BATCH):
        starts = width * np.arange(first, min(first + FOURIER_BATCH, chunks), dtype=float)
        t = (starts[:, None] + nodes[None, :]).ravel()
        values = np.ones_like(t)
        for aj in support:
            values *= np.sinc(aj * t / (2.0 * math.pi))
        total += float(np.sum(values.reshape(-1, FOURIER_NODES) @ weights))
    logger.debug("cube_section_fourier a=%s: T=%.3g over %d chunks", a.label, horizon, chunks)
    return total / math.pi


def busemann_norm(x, samples: Optional[int] = None, seed: Optional[int] = None) -> float:
    """N(x) = |x| / vol(Q_n cap x^perp)"""
    raw = np.asarray(x, dtype=float)
    length = float(np.linalg.norm(raw))
    a = canonicalize(raw)
    try:
        volume = cube_section_fourier(a)
    except AccuracyError:
        logger.warning("busemann_norm: Fourier oracle out of budget for n=%d, using Monte Carlo", a.n)
        volume = estimate_section_ratio(
            SectionQuery(a=a, p=Exponent.inf(), samples=samples or settings.DEFAULT_SAMPLES,
                         seed=settings.DEFAULT_SEED if seed is None else seed)
        ).mean
    return length / volume


def section_ratio(a: Direction, p: Exponent, samples: Optional[int] = None, seed: Optional[int] = None) -> MCEstimate:
    """A_{n,p}(a) from the best available oracle: exact for n = 2, Fourier for p = inf, else Monte Carlo"""
    seed = settings.DEFAULT_SEED if seed is None else seed
    support = a.support()
    if support.size <= 2:
        return MCEstimate.exact(exact_section_ratio_2d(canonicalize(np.pad(support, (0, 2 - support.size))), p), seed)
    if p.is_infinite:
        try:
            return MCEstimate.exact(cube_section_fourier(a), seed)
        except AccuracyError:
            logger.warning("section_ratio: Fourier oracle out of budget, falling back to Monte Carlo")
    return estimate_section_ratio(SectionQuery(a=a, p=p, samples=samples or settings.DEFAULT_SAMPLES, seed=seed))


def two_atom_inverse_moment(x1: float, x2: float) -> float:
    """E|x1 xi1 + x2 xi2|^{-1} = 1 / max(x1, x2)"""
    if x1 <= 0.0 or x2 <= 0.0:
        raise InvalidInputError("two-atom inverse moment needs positive weights")
    return 1.0 / max(x1, x2)


def min_representation_check(a: Direction, split: int, p: Exponent, samples: int, seed: int):
    """(E|X+Y|^{-1}, E min{|X|^{-1}, |Y|^{-1}}, difference) for the block sums X, Y of sum a_j R_j xi_j"""
    if not 1 <= split < a.n:
        raise InvalidInputError(f"split must satisfy 1 <= split < n = {a.n}")
    law = SectionRadiusLaw(p)
    coords = a.array()
    stream = RngStream(seed, TAG_SPHERE)
    groups = [(0, split), (split, a.n)]

    def block_fn(block: int, size: int) -> np.ndarray:
        x, y = _grouped_sums(coords, law, stream, block, groups)
        with np.errstate(divide="ignore"):
            full = 1.0 / _norm3(x + y)[:size]
            nx, ny = _norm3(x)[:size], _norm3(y)[:size]
            # a zero block sum contributes |other|^{-1}
            smaller = np.where(ny == 0.0, 1.0 / nx, np.where(nx == 0.0, 1.0 / ny, 1.0 / np.maximum(nx, ny)))
        return np.stack([full, smaller])

    return montecarlo.paired_estimate(block_fn, samples, seed)


def konig_kwapien_check(x, s: float, samples: int, seed: int) -> Tuple[MCEstimate, MCEstimate]:
    """(E|sum x_j xi_j|^s, (1+s) E|sum x_j U_j|^s) from independent streams"""
    if s <= -1.0 or s == 0.0:
        raise InvalidInputError("moment order must satisfy s > -1, s != 0")
    if s <= -0.5:
        logger.warning("konig_kwapien_check: order %g has infinite variance, standard errors are unreliable", s)
    coords = np.asarray(x, dtype=float)
    if not np.any(coords):
        raise InvalidInputError("zero vector")
    law = SectionRadiusLaw(Exponent.inf())
    sphere = RngStream(seed, TAG_SPHERE)
    uniform = RngStream(seed, TAG_UNIFORM)
    ordered = np.sort(np.abs(coords))[::-1]
    groups = [(0, ordered.size)]

    def sphere_fn(block: int, size: int) -> np.ndarray:
        (total,) = _grouped_sums(ordered, law, sphere, block, groups)
        return _norm3(total)[:size] ** s

    def uniform_fn(block: int, size: int) -> np.ndarray:
        total = np.zeros(uniform.block_size)
        for chunk, start, stop in _chunk_bounds(ordered.size, settings.COORD_CHUNK):
            u = uniform_block(uniform.generator(block, chunk), (uniform.block_size, stop - start))
            total += u @ ordered[start:stop]
        return (1.0 + s) * np.abs(total[:size]) ** s

    lhs = montecarlo.estimate(sphere_fn, samples, seed)
    rhs = montecarlo.estimate(uniform_fn, samples, seed)
    return lhs, rhs


def ball_volume(n: int, p: Exponent) -> float:
    """vol(B_p^n) = (2 Gamma(1 + 1/p))^n / Gamma(1 + n/p)"""
    if n < 1:
        raise InvalidInputError("dimension must be positive")
    if p.is_infinite:
        return 2.0 ** n
    r = p.reciprocal
    return math.exp(n * (math.log(2.0) + log_gamma(1.0 + r)) - log_gamma(1.0 + n * r))


def ball_volume_rejection(n: int, p: Exponent, samples: int, seed: int) -> MCEstimate:
    """Box-rejection estimate of vol(B_p^n) inside [-1, 1]^n"""
    stream = RngStream(seed, TAG_BOX)

    def block_fn(block: int, size: int) -> np.ndarray:
        pts = stream.generator(block).uniform(-1.0, 1.0, size=(stream.block_size, n))
        if p.is_infinite:
            inside = np.ones(stream.block_size)
        else:
            inside = (np.sum(np.abs(pts) ** p.value, axis=1) <= 1.0).astype(float)
        return 2.0 ** n * inside[:size]

    return montecarlo.estimate(block_fn, samples, seed)


def section_volume_absolute(a: Direction, n: int, p: Exponent, samples: int, seed: int) -> MCEstimate:
    """vol(B_p^n cap a^perp) = A_{n,p}(a) vol(B_p^{n-1})"""
    if n < 2 or n < a.n:
        raise InvalidInputError(f"need 2 <= n and n >= len(a) = {a.n}, got n = {n}")
    ratio = estimate_section_ratio(SectionQuery(a=a, p=p, samples=samples, seed=seed))
    volume = ball_volume(n - 1, p)
    return ratio.model_copy(update={"mean": ratio.mean * volume, "std_error": ratio.std_error * volume})


def slab_section_volume(a: Direction, p: Exponent, half_width: float, samples: int, seed: int) -> MCEstimate:
    """vol{x in B_p^n : |<a, x>| <= h} / (2h), which tends to the section volume as h -> 0"""
    n = a.n
    coords = a.array()
    stream = RngStream(seed, TAG_BOX)

    def block_fn(block: int, size: int) -> np.ndarray:
        pts = stream.generator(block).uniform(-1.0, 1.0, size=(stream.block_size, n))
        if p.is_infinite:
            inside = np.ones(stream.block_size, dtype=bool)
        else:
            inside = np.sum(np.abs(pts) ** p.value, axis=1) <= 1.0
        hit = inside & (np.abs(pts @ coords) <= half_width)
        return 2.0 ** n * hit[:size] / (2.0 * half_width)

    return montecarlo.estimate(block_fn, samples, seed)


def estimate_section_gap(a: Direction, p: Exponent, samples: int, seed: int):
    """(A_{n,p}(a), A_{n,inf}(a), difference) with both sides on the same sphere points"""
    law = SectionRadiusLaw(p)
    coords = a.array()
    k = int(np.count_nonzero(coords))
    scale = math.exp(log_gamma(1.0 + p.reciprocal))
    stream = RngStream(seed, TAG_SPHERE)

    def block_fn(block: int, size: int) -> np.ndarray:
        with_radii = np.zeros((stream.block_size, 3))
        plain = np.zeros((stream.block_size, 3))
        for chunk, start, stop in _chunk_bounds(k, settings.COORD_CHUNK):
            radii, xi = radius_and_sphere(law, stream, block, chunk, stop - start)
            weights = coords[start:stop]
            with_radii += np.einsum("bj,bjk->bk", weights * radii, xi)
            plain += np.einsum("j,bjk->bk", weights, xi)
        return np.stack([scale / _norm3(with_radii)[:size], 1.0 / _norm3(plain)[:size]])

    return montecarlo.paired_estimate(block_fn, samples, seed)
