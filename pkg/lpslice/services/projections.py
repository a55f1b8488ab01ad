import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from lpslice.core.config import settings
from lpslice.core.exceptions import DimensionError, EnumerationLimitError, InvalidInputError
from lpslice.schemas.domain import Direction, Exponent, MCEstimate
from lpslice.schemas.queries import ProjectionQuery
from lpslice.services import montecarlo
from lpslice.services.distributions import ProjectionFactorLaw, factor_block, rademacher_block
from lpslice.services.montecarlo import TAG_FACTOR, TAG_SIGN, RngStream
from lpslice.services.sections import lp_norm
from lpslice.services.special import log_gamma

logger = logging.getLogger(__name__)


def _check_q(q: Exponent) -> float:
    if q.is_infinite or q.value > 2.0:
        raise InvalidInputError(f"projection exponent must lie in [1, 2], got {q}")
    return q.value


def _factor_sums(
    coords: np.ndarray,
    q: Exponent,
    stream: RngStream,
    block: int,
    groups: Sequence[Tuple[int, int]],
) -> List[np.ndarray]:
    """Sum_j a_j X_j over each coordinate range; X_j are signs when q = 1"""
    k = int(np.count_nonzero(coords))
    law = None if q.value == 1.0 else ProjectionFactorLaw(q)
    width = settings.COORD_CHUNK
    sums = [np.zeros(stream.block_size) for _ in groups]
    for chunk, start in enumerate(range(0, k, width)):
        stop = min(start + width, k)
        gen = stream.generator(block, chunk)
        shape = (stream.block_size, stop - start)
        x = rademacher_block(gen, shape) if law is None else factor_block(law, gen, shape)
        terms = x * coords[start:stop]
        for g, (lo, hi) in enumerate(groups):
            lo_c, hi_c = max(lo, start), min(hi, stop)
            if lo_c < hi_c:
                sums[g] += terms[:, lo_c - start:hi_c - start].sum(axis=1)
    return sums


def _stream_for(q: Exponent, seed: int) -> RngStream:
    return RngStream(seed, TAG_SIGN if q.value == 1.0 else TAG_FACTOR)


def estimate_projection_ratio(query: ProjectionQuery) -> MCEstimate:
    """Gamma(1/q) E|sum a_j X_j|; q = 1 is E|sum a_j eps_j|, exact up to ENUM_MAX_N coordinates"""
    q = query.q
    coords = query.a.array()
    k = int(np.count_nonzero(coords))
    if q.value == 1.0 and k <= settings.ENUM_MAX_N:
        return MCEstimate.exact(khinchin_exact(query.a), query.seed)
    scale = math.exp(log_gamma(1.0 / q.value))
    stream = _stream_for(q, query.seed)
    groups = [(0, query.a.n)]

    def block_fn(block: int, size: int) -> np.ndarray:
        (total,) = _factor_sums(coords, q, stream, block, groups)
        return scale * np.abs(total[:size])

    result = montecarlo.estimate(block_fn, query.samples, query.seed)
    logger.debug("projection ratio a=%s q=%s: %.8f +- %.2g", query.a.label, q, result.mean, result.std_error)
    return result


def exact_projection_ratio_2d(a: Direction, q: Exponent) -> float:
    """Gamma(1/q) E|a1 X1 + a2 X2| = ||a||_{q/(q-1)}"""
    if a.n != 2:
        raise DimensionError(f"closed form holds only for n = 2, got n = {a.n}")
    _check_q(q)
    dual = q.dual()
    return lp_norm(a.array(), dual.as_float())


def szarek_value(q: Exponent) -> float:
    """c_q = E|(X1 + X2)/sqrt(2)| = 2^{1/2 - 1/q} / Gamma(1/q), the bare moment"""
    qv = _check_q(q)
    return math.exp((0.5 - 1.0 / qv) * math.log(2.0) - log_gamma(1.0 / qv))


def projection_ratio_constant(q: Exponent) -> float:
    """Gamma(1/q) c_q = 2^{1/2 - 1/q}, the ratio-level constant"""
    qv = _check_q(q)
    return 2.0 ** (0.5 - 1.0 / qv)


def _signed_sums(values: np.ndarray, first_fixed: bool) -> np.ndarray:
    """All sums +-v_1 +- ... +- v_m; with first_fixed the first sign is +"""
    if values.size == 0:
        return np.zeros(1)
    sums = np.array([values[0]]) if first_fixed else np.array([values[0], -values[0]])
    for v in values[1:]:
        sums = np.concatenate([sums + v, sums - v])
    return sums


def khinchin_exact(a: Direction, max_enum_n: Optional[int] = None) -> float:
    """E|sum a_j eps_j| over all 2^{k-1} sign patterns of the k nonzero coordinates.

    Meet in the middle: sums of the first half (leading sign fixed) against the
    sorted sums of the second half, with prefix sums turning each row of
    |s_A + s_B| into two searchsorted lookups.
    """
    max_enum_n = settings.ENUM_MAX_N if max_enum_n is None else max_enum_n
    support = a.support()
    k = support.size
    if k > max_enum_n:
        raise EnumerationLimitError(f"{k} nonzero coordinates exceed the enumeration cutoff {max_enum_n}")
    if k == 1:
        return float(support[0])
    half = (k + 1) // 2
    left = _signed_sums(support[:half], first_fixed=True)
    right = np.sort(_signed_sums(support[half:], first_fixed=False))
    prefix = np.concatenate([[0.0], np.cumsum(right)])
    total_right = prefix[-1]
    m = right.size
    # for each s in left: sum over b of |s + b|
    cut = np.searchsorted(right, -left, side="left")
    below = prefix[cut]
    above = total_right - below
    count_below = cut.astype(float)
    count_above = m - count_below
    rows = (left * count_above + above) - (left * count_below + below)
    return float(np.sum(rows) / (left.size * m))


def crosspolytope_projection(a: Direction, n: Optional[int] = None) -> float:
    """vol(Proj_{a^perp} B_1^n) = 2^{n-1}/(n-1)! E|sum a_j eps_j|"""
    n = a.n if n is None else n
    if n < max(2, a.n):
        raise InvalidInputError(f"need n >= max(2, len(a)), got n = {n}")
    return math.exp((n - 1) * math.log(2.0) - log_gamma(float(n))) * khinchin_exact(a)


def cube_projection(a: Direction, n: Optional[int] = None) -> float:
    """vol(Proj_{a^perp} B_inf^n) = ||a||_1 2^{n-1}"""
    n = a.n if n is None else n
    if n < max(2, a.n):
        raise InvalidInputError(f"need n >= max(2, len(a)), got n = {n}")
    return float(np.sum(a.array())) * 2.0 ** (n - 1)


def max_representation_check(a: Direction, split: int, q: Exponent, samples: int, seed: int):
    """(E|X+Y|, E max{|X|, |Y|}, difference) for the block sums X, Y of sum a_j X_j"""
    if not 1 <= split < a.n:
        raise InvalidInputError(f"split must satisfy 1 <= split < n = {a.n}")
    _check_q(q)
    coords = a.array()
    stream = _stream_for(q, seed)
    groups = [(0, split), (split, a.n)]

    def block_fn(block: int, size: int) -> np.ndarray:
        x, y = _factor_sums(coords, q, stream, block, groups)
        x, y = x[:size], y[:size]
        return np.stack([np.abs(x + y), np.maximum(np.abs(x), np.abs(y))])

    return montecarlo.paired_estimate(block_fn, samples, seed)


def estimate_bare_moment(a: Direction, q: Exponent, samples: int, seed: int) -> MCEstimate:
    """E|sum a_j X_j| without the Gamma(1/q) factor"""
    qv = _check_q(q)
    query = ProjectionQuery(a=a, q=q, samples=samples, seed=seed)
    ratio = estimate_projection_ratio(query)
    scale = math.exp(-log_gamma(1.0 / qv))
    return MCEstimate(
        mean=ratio.mean * scale, std_error=ratio.std_error * scale, samples=ratio.samples,
        seed=seed, kurtosis=ratio.kurtosis, heavy_tail=ratio.heavy_tail,
    )


def sign_coupling_gap(a: Direction, q: Exponent, samples: int, seed: int):
    """(E|sum a_j X_j|, E|sum a_j sgn X_j|, difference) from the same factor draws"""
    qv = _check_q(q)
    if qv == 1.0:
        raise InvalidInputError("sign coupling needs q > 1")
    law = ProjectionFactorLaw(q)
    coords = a.array()
    k = int(np.count_nonzero(coords))
    stream = RngStream(seed, TAG_FACTOR)

    def block_fn(block: int, size: int) -> np.ndarray:
        plain = np.zeros(stream.block_size)
        signed = np.zeros(stream.block_size)
        for chunk, start in enumerate(range(0, k, settings.COORD_CHUNK)):
            stop = min(start + settings.COORD_CHUNK, k)
            x = factor_block(law, stream.generator(block, chunk), (stream.block_size, stop - start))
            plain += x @ coords[start:stop]
            signed += np.sign(x) @ coords[start:stop]
        return np.stack([np.abs(plain[:size]), np.abs(signed[:size])])

    return montecarlo.paired_estimate(block_fn, samples, seed)
