import math

import mpmath
import numpy as np
import pytest
from scipy import integrate

from lpslice.core.exceptions import DivergentMomentError, InvalidInputError
from lpslice.schemas.domain import Exponent
from lpslice.services import montecarlo
from lpslice.services.distributions import (
    ProjectionFactorLaw,
    SectionRadiusLaw,
    cdf_absX,
    cdf_R,
    density_absX,
    density_R,
    factor_block,
    moment_absX,
    moment_R,
    radius_block,
    rademacher_block,
    sample_R,
    sample_sphere3,
    sample_X,
    sphere_block,
    two_atom_radius_squared,
    uniform_block,
)
from lpslice.services.montecarlo import TAG_FACTOR, TAG_RADIUS, TAG_SPHERE, RngStream
from tests.helpers import within


@pytest.mark.parametrize("p", [1.0, 2.0, 3.5, 10.0])
def test_radius_density_integrates_to_one(p):
    law = SectionRadiusLaw.of(p)
    total, _ = integrate.quad(lambda x: density_R(law, x), 0.0, np.inf)
    assert total == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("p", [2.0, 5.0])
def test_radius_cdf_matches_density(p):
    law = SectionRadiusLaw.of(p)
    for x in (0.3, 0.9, 1.4):
        area, _ = integrate.quad(lambda t: density_R(law, t), 0.0, x)
        assert cdf_R(law, x) == pytest.approx(area, abs=1e-10)


def test_radius_cdf_at_infinity_is_step():
    law = SectionRadiusLaw(Exponent.inf())
    assert cdf_R(law, 0.99) == 0.0
    assert cdf_R(law, 1.0) == 1.0


def test_radius_density_undefined_at_infinity():
    with pytest.raises(InvalidInputError):
        density_R(SectionRadiusLaw(Exponent.inf()), 1.0)


@pytest.mark.parametrize("p, s", [(2.0, 1.0), (2.0, -2.5), (4.0, 2.0), (7.0, -1.0)])
def test_radius_moment_matches_mpmath(p, s):
    law = SectionRadiusLaw.of(p)
    exact = mpmath.gamma(1 + mpmath.mpf(s + 1) / p) / mpmath.gamma(1 + mpmath.mpf(1) / p)
    assert moment_R(law, s) == pytest.approx(float(exact), rel=1e-12)


def test_radius_moment_diverges():
    with pytest.raises(DivergentMomentError):
        moment_R(SectionRadiusLaw.of(2.0), -3.0)


def test_radius_moment_at_infinity():
    assert moment_R(SectionRadiusLaw(Exponent.inf()), -1.0) == 1.0


@pytest.mark.parametrize("p", [2.0, 6.0])
def test_radius_sampler_moments(p, seed):
    law = SectionRadiusLaw.of(p)
    stream = RngStream(seed, TAG_RADIUS)

    def block_fn(block, size):
        return radius_block(law, stream.generator(block), (stream.block_size,))[:size] ** 2

    est = montecarlo.estimate(block_fn, 60_000, seed)
    assert within(est, moment_R(law, 2.0))


def test_radius_sampler_is_stable_for_huge_p(seed):
    law = SectionRadiusLaw.of(1e6)
    values = radius_block(law, np.random.default_rng(seed), (10_000,))
    assert np.all(np.isfinite(values))
    assert np.all(np.abs(values - 1.0) < 1e-4)


def test_sample_R_matches_block(seed):
    law = SectionRadiusLaw.of(3.0)
    stream = RngStream(seed, block_size=64)
    block = radius_block(law, stream.with_tag(TAG_RADIUS).generator(1), (64,))
    assert sample_R(law, stream, 64 + 5) == block[5]


def test_factor_law_rejects_q_outside_range():
    for q in (1.0, 2.5):
        with pytest.raises(InvalidInputError):
            ProjectionFactorLaw.of(q)


@pytest.mark.parametrize("q", [1.2, 1.5, 2.0])
def test_factor_density_integrates_to_one(q):
    law = ProjectionFactorLaw.of(q)
    total, _ = integrate.quad(lambda x: density_absX(law, x), 0.0, np.inf, limit=200)
    assert total == pytest.approx(1.0, abs=1e-7)


@pytest.mark.parametrize("q", [1.3, 1.8])
def test_factor_cdf_matches_density(q):
    law = ProjectionFactorLaw.of(q)
    for x in (0.2, 1.0, 1.7):
        area, _ = integrate.quad(lambda t: density_absX(law, t), 0.0, x, limit=200)
        assert cdf_absX(law, x) == pytest.approx(area, abs=1e-8)


def test_factor_first_moment_is_inverse_gamma():
    q = 1.5
    law = ProjectionFactorLaw.of(q)
    assert moment_absX(law, 1.0) == pytest.approx(1.0 / math.gamma(1.0 / q), rel=1e-13)


def test_factor_is_gaussian_at_two():
    law = ProjectionFactorLaw.of(2.0)
    # density e^{-x^2}/sqrt(pi) on the line: E X^2 = 1/2
    assert moment_absX(law, 2.0) == pytest.approx(0.5, rel=1e-13)


def test_factor_moment_diverges():
    with pytest.raises(DivergentMomentError):
        moment_absX(ProjectionFactorLaw.of(1.5), -2.0)


@pytest.mark.parametrize("q", [1.05, 1.5, 2.0])
def test_factor_sampler_moments(q, seed):
    law = ProjectionFactorLaw.of(q)
    stream = RngStream(seed, TAG_FACTOR)

    def block_fn(block, size):
        x = factor_block(law, stream.generator(block), (stream.block_size,))[:size]
        return np.abs(x)

    est = montecarlo.estimate(block_fn, 60_000, seed)
    assert within(est, moment_absX(law, 1.0))


def test_factor_sampler_is_symmetric(seed):
    law = ProjectionFactorLaw.of(1.4)
    x = factor_block(law, np.random.default_rng(seed), (100_000,))
    assert abs(np.mean(x > 0.0) - 0.5) < 0.01


def test_factor_sampler_near_one_concentrates_on_signs(seed):
    law = ProjectionFactorLaw.of(1.0 + 1e-9)
    x = factor_block(law, np.random.default_rng(seed), (10_000,))
    assert np.all(np.isfinite(x))
    assert np.median(np.abs(np.abs(x) - 1.0)) < 1e-6


def test_sample_X_matches_block(seed):
    law = ProjectionFactorLaw.of(1.5)
    stream = RngStream(seed, block_size=32)
    block = factor_block(law, stream.with_tag(TAG_FACTOR).generator(0), (32,))
    assert sample_X(law, stream, 7) == block[7]


def test_sphere_points_are_unit_and_centered(seed):
    pts = sphere_block(np.random.default_rng(seed), (50_000,))
    np.testing.assert_allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)
    assert np.all(np.abs(pts.mean(axis=0)) < 0.02)
    # each coordinate is uniform on [-1, 1]
    assert abs(np.mean(pts[:, 2] ** 2) - 1.0 / 3.0) < 0.01


def test_sample_sphere3(seed):
    stream = RngStream(seed, block_size=16)
    expected = sphere_block(stream.with_tag(TAG_SPHERE).generator(2), (16,))[3]
    np.testing.assert_array_equal(sample_sphere3(stream, 2 * 16 + 3), expected)


def test_rademacher_and_uniform(seed):
    gen = np.random.default_rng(seed)
    signs = rademacher_block(gen, (1000,))
    assert set(np.unique(signs)) == {-1.0, 1.0}
    u = uniform_block(gen, (1000,))
    assert np.all((u >= -1.0) & (u <= 1.0))


def test_two_atom_radius_squared():
    assert two_atom_radius_squared(0.6, 0.8, 1.0) == pytest.approx(1.96)
    assert two_atom_radius_squared(0.6, 0.8, -1.0) == pytest.approx(0.04)
    with pytest.raises(InvalidInputError):
        two_atom_radius_squared(0.6, 0.8, 1.5)
    with pytest.raises(InvalidInputError):
        two_atom_radius_squared(0.0, 0.8, 0.0)


def test_two_atom_representation_in_law(seed):
    # |a1 xi1 + a2 xi2|^2 and a1^2 + a2^2 + 2 a1 a2 U agree in mean and spread
    a1, a2 = 0.8, 0.6
    gen = np.random.default_rng(seed)
    xi = sphere_block(gen, (2, 100_000))
    direct = np.sum((a1 * xi[0] + a2 * xi[1]) ** 2, axis=1)
    through_u = two_atom_radius_squared(a1, a2, uniform_block(gen, (100_000,)))
    assert abs(direct.mean() - through_u.mean()) < 0.01
    assert abs(direct.std() - through_u.std()) < 0.01
