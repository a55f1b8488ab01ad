import numpy as np
import pytest

from lpslice.core.config import settings
from lpslice.services.montecarlo import (
    TAG_RADIUS,
    RngStream,
    block_layout,
    estimate,
    estimate_many,
    paired_estimate,
)


def uniform_fn(seed):
    stream = RngStream(seed, TAG_RADIUS)

    def block_fn(block, size):
        return stream.generator(block).random(stream.block_size)[:size]

    return block_fn


def test_block_layout():
    assert block_layout(10, 4) == [4, 4, 2]
    assert block_layout(8, 4) == [4, 4]
    assert block_layout(3, 4) == [3]


def test_stream_rejects_bad_seed():
    with pytest.raises(ValueError):
        RngStream(-1)
    with pytest.raises(ValueError):
        RngStream(2 ** 64)


def test_locate():
    stream = RngStream(7, block_size=100)
    assert stream.locate(250) == (2, 50)
    with pytest.raises(ValueError):
        stream.locate(-1)


def test_generators_are_keyed_by_block_and_tag():
    stream = RngStream(11)
    first = stream.generator(3).random(5)
    again = stream.generator(3).random(5)
    other_block = stream.generator(4).random(5)
    other_tag = stream.with_tag(9).generator(3).random(5)
    np.testing.assert_array_equal(first, again)
    assert not np.array_equal(first, other_block)
    assert not np.array_equal(first, other_tag)


def test_uniform_mean(seed):
    est = estimate(uniform_fn(seed), 50_000, seed)
    assert est.samples == 50_000
    assert abs(est.mean - 0.5) <= 4.0 * est.std_error
    assert est.std_error == pytest.approx((1.0 / 12.0 / 50_000) ** 0.5, rel=0.05)
    assert not est.heavy_tail


def test_result_independent_of_worker_count(seed):
    one = estimate(uniform_fn(seed), 3 * settings.BLOCK_SIZE + 17, seed, threads=1)
    many = estimate(uniform_fn(seed), 3 * settings.BLOCK_SIZE + 17, seed, threads=4)
    assert one.mean == many.mean
    assert one.std_error == many.std_error


def test_prefix_property(seed):
    # a longer run keeps the leading samples of a shorter one
    stream = RngStream(seed, TAG_RADIUS)
    short = stream.generator(0).random(stream.block_size)[:10]
    full = stream.generator(0).random(stream.block_size)
    np.testing.assert_array_equal(short, full[:10])


def test_single_sample_has_zero_error(seed):
    est = estimate(uniform_fn(seed), 1, seed)
    assert est.std_error == 0.0


def test_constant_functional():
    est = estimate(lambda block, size: np.full(size, 2.0), 1000, 0)
    assert est.mean == 2.0
    assert est.std_error == 0.0
    assert est.kurtosis is None


def test_estimate_many_rows(seed):
    base = uniform_fn(seed)

    def block_fn(block, size):
        u = base(block, size)
        return np.stack([u, u * u])

    mean_u, mean_u2 = estimate_many(block_fn, 40_000, seed)
    assert abs(mean_u.mean - 0.5) <= 4.0 * mean_u.std_error
    assert abs(mean_u2.mean - 1.0 / 3.0) <= 4.0 * mean_u2.std_error


def test_paired_difference_is_consistent(seed):
    base = uniform_fn(seed)

    def block_fn(block, size):
        u = base(block, size)
        return np.stack([u, u - 0.1])

    x, y, diff = paired_estimate(block_fn, 20_000, seed)
    assert diff.mean == pytest.approx(x.mean - y.mean, abs=1e-12)
    assert diff.mean == pytest.approx(0.1, abs=1e-12)
    assert diff.std_error < 1e-12


def test_heavy_tail_flag(seed):
    stream = RngStream(seed, TAG_RADIUS)

    def block_fn(block, size):
        u = stream.generator(block).random(stream.block_size)[:size]
        return u ** -0.95

    est = estimate(block_fn, 200_000, seed)
    assert est.heavy_tail
    assert est.kurtosis > settings.KURTOSIS_ALARM


def test_rejects_nonpositive_samples():
    with pytest.raises(ValueError):
        estimate(lambda block, size: np.zeros(size), 0, 0)
