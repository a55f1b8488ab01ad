"""Counter-based random streams and the block reduction behind every estimate.

Sample i of a stream lives in block i // BLOCK_SIZE. A block is always drawn
at full size and truncated, so the value at index i is a pure function of
(seed, tag, i). Blocks are reduced to shifted power sums and combined in
block order, which makes the result independent of the worker count.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence

import numpy as np

from lpslice.core.config import settings
from lpslice.schemas.domain import MCEstimate

logger = logging.getLogger(__name__)

# stream tags, one per random ingredient
TAG_RADIUS = 1
TAG_SPHERE = 2
TAG_FACTOR = 3
TAG_SIGN = 4
TAG_UNIFORM = 5
TAG_BOX = 6

BlockFn = Callable[[int, int], np.ndarray]


class RngStream:
    """Philox stream keyed by (seed, tag); block b owns its own generator"""

    def __init__(self, seed: int, tag: int = 0, block_size: Optional[int] = None):
        if not 0 <= int(seed) < 2 ** 64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = int(seed)
        self.tag = int(tag)
        self.block_size = int(block_size or settings.BLOCK_SIZE)

    def generator(self, block: int, chunk: int = 0) -> np.random.Generator:
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.tag, int(block), int(chunk)))
        return np.random.Generator(np.random.Philox(seq))

    def with_tag(self, tag: int) -> "RngStream":
        return RngStream(self.seed, tag, self.block_size)

    def locate(self, index: int):
        """(block, offset) of a sample index"""
        if index < 0:
            raise ValueError("sample index must be nonnegative")
        return divmod(int(index), self.block_size)

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, tag={self.tag}, block_size={self.block_size})"


def block_layout(samples: int, block_size: Optional[int] = None) -> List[int]:
    """Number of kept samples in each block"""
    block_size = int(block_size or settings.BLOCK_SIZE)
    full, rest = divmod(int(samples), block_size)
    sizes = [block_size] * full
    if rest:
        sizes.append(rest)
    return sizes


def _power_sums(values: np.ndarray, shift: np.ndarray) -> np.ndarray:
    """Per-row [count, S1, S2, S3, S4] of values - shift"""
    d = values - shift[:, None]
    d2 = d * d
    count = np.full(values.shape[0], values.shape[1], dtype=float)
    return np.stack([count, d.sum(axis=1), d2.sum(axis=1), (d2 * d).sum(axis=1), (d2 * d2).sum(axis=1)], axis=1)


def _pairwise_total(parts: Sequence[np.ndarray]) -> np.ndarray:
    """Fixed-shape pairwise combination in block order"""
    parts = list(parts)
    while len(parts) > 1:
        merged = [parts[i] + parts[i + 1] for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            merged.append(parts[-1])
        parts = merged
    return parts[0]


def _summarize(total: np.ndarray, shift: float, seed: int) -> MCEstimate:
    count, s1, s2, s3, s4 = (float(v) for v in total)
    m1 = s1 / count
    var_pop = max(s2 / count - m1 * m1, 0.0)
    mean = shift + m1
    if count > 1:
        var = var_pop * count / (count - 1.0)
        std_error = math.sqrt(var / count)
    else:
        std_error = 0.0
    kurtosis = None
    heavy = False
    if var_pop > 0.0:
        m4 = s4 / count - 4.0 * m1 * s3 / count + 6.0 * m1 * m1 * s2 / count - 3.0 * m1 ** 4
        kurtosis = m4 / (var_pop * var_pop) - 3.0
        heavy = kurtosis > settings.KURTOSIS_ALARM
    if heavy:
        logger.warning("heavy-tail flag: excess kurtosis %.3g over %d samples", kurtosis, int(count))
    return MCEstimate(
        mean=mean, std_error=std_error, samples=int(count), seed=seed, kurtosis=kurtosis, heavy_tail=heavy,
    )


def estimate_many(block_fn: BlockFn, samples: int, seed: int, threads: Optional[int] = None) -> List[MCEstimate]:
    """Reduce k per-sample functionals.

    block_fn(block, size) returns an array of shape (k, size) or (size,) holding
    the functionals for the first `size` samples of that block.
    """
    if samples <= 0:
        raise ValueError("samples must be positive")
    sizes = block_layout(samples)

    def rows(block: int) -> np.ndarray:
        values = np.asarray(block_fn(block, sizes[block]), dtype=float)
        return values.reshape(1, -1) if values.ndim == 1 else values

    first = rows(0)
    shift = first.mean(axis=1)
    parts = [None] * len(sizes)
    parts[0] = _power_sums(first, shift)

    workers = threads or settings.worker_count
    if len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            for block, part in zip(
                range(1, len(sizes)),
                executor.map(lambda b: _power_sums(rows(b), shift), range(1, len(sizes))),
            ):
                parts[block] = part
    total = _pairwise_total(parts)
    logger.debug("reduced %d samples over %d blocks with %d workers", samples, len(sizes), workers)
    return [_summarize(total[k], float(shift[k]), seed) for k in range(total.shape[0])]


def estimate(block_fn: BlockFn, samples: int, seed: int, threads: Optional[int] = None) -> MCEstimate:
    """Reduce a single per-sample functional"""
    return estimate_many(block_fn, samples, seed, threads)[0]


def paired_estimate(block_fn: BlockFn, samples: int, seed: int, threads: Optional[int] = None):
    """Estimates of X, Y and X - Y from a block_fn returning rows (X, Y)"""

    def with_difference(block: int, size: int) -> np.ndarray:
        x, y = np.asarray(block_fn(block, size), dtype=float)
        return np.stack([x, y, x - y])

    return tuple(estimate_many(with_difference, samples, seed, threads))
