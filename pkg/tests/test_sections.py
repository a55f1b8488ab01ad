import math

import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from lpslice.core.exceptions import AccuracyError, DimensionError, InvalidInputError
from lpslice.schemas.domain import Direction, Exponent, canonicalize
from lpslice.schemas.queries import SectionQuery
from lpslice.services.sections import (
    ball_direction_value,
    ball_volume,
    ball_volume_rejection,
    busemann_norm,
    cube_section_fourier,
    estimate_section_gap,
    estimate_section_ratio,
    exact_section_ratio_2d,
    konig_kwapien_check,
    lp_norm,
    min_representation_check,
    section_ratio,
    section_volume_absolute,
    slab_section_volume,
    two_atom_inverse_moment,
)
from tests.helpers import SQRT2, within

INF = Exponent.inf()


class TestExactOracles:
    def test_two_dimensional_closed_form(self):
        a = canonicalize([3.0, 4.0])
        assert exact_section_ratio_2d(a, Exponent.of(2)) == pytest.approx(1.0)
        assert exact_section_ratio_2d(a, INF) == pytest.approx(1.25)
        expected = 1.0 / (0.8 ** 3 + 0.6 ** 3) ** (1.0 / 3.0)
        assert exact_section_ratio_2d(a, Exponent.of(3)) == pytest.approx(expected)

    def test_two_dimensional_only(self):
        with pytest.raises(DimensionError):
            exact_section_ratio_2d(canonicalize([1.0, 1.0, 1.0]), INF)

    def test_ball_direction_value(self):
        assert ball_direction_value(INF) == pytest.approx(SQRT2)
        assert ball_direction_value(Exponent.of(2)) == pytest.approx(1.0)
        assert ball_direction_value(Exponent.of(4)) == pytest.approx(2.0 ** 0.25)

    def test_lp_norm_survives_large_exponents(self):
        assert lp_norm(np.array([0.8, 0.6]), 1e6) == pytest.approx(0.8, rel=1e-6)
        assert lp_norm(np.array([0.8, 0.6]), math.inf) == 0.8
        assert lp_norm(np.zeros(3), 2.0) == 0.0

    def test_two_atom_inverse_moment(self):
        assert two_atom_inverse_moment(0.3, 0.5) == pytest.approx(2.0)
        with pytest.raises(InvalidInputError):
            two_atom_inverse_moment(0.0, 0.5)


class TestCubeFourier:
    def test_single_and_pair(self):
        assert cube_section_fourier(canonicalize([1.0])) == 1.0
        assert cube_section_fourier(canonicalize([1.0, 1.0])) == pytest.approx(SQRT2)

    def test_hexagon(self):
        assert cube_section_fourier(canonicalize([1.0, 1.0, 1.0])) == pytest.approx(3.0 * math.sqrt(3.0) / 4.0, abs=1e-8)

    def test_four_equal(self):
        assert cube_section_fourier(canonicalize([1.0] * 4)) == pytest.approx(4.0 / 3.0, abs=1e-8)

    def test_six_equal(self):
        assert cube_section_fourier(canonicalize([1.0] * 6)) == pytest.approx(11.0 * math.sqrt(6.0) / 20.0, abs=1e-8)

    @given(st.lists(st.floats(min_value=0.05, max_value=1.0), min_size=3, max_size=5))
    @hsettings(max_examples=30, deadline=None)
    def test_between_one_and_sqrt2(self, raw):
        value = cube_section_fourier(canonicalize(raw))
        assert 1.0 - 1e-7 <= value <= SQRT2 + 1e-7

    def test_budget(self):
        with pytest.raises(AccuracyError):
            cube_section_fourier(canonicalize([1.0, 1.0, 1.0]), max_chunks=2)

    def test_busemann_norm(self):
        assert busemann_norm([2.0, 0.0]) == pytest.approx(2.0)
        assert busemann_norm([1.0, 1.0]) == pytest.approx(1.0)


class TestSectionRatio:
    def test_exact_for_two_coordinates(self):
        est = section_ratio(canonicalize([1.0, 1.0]), INF)
        assert est.std_error == 0.0
        assert est.mean == pytest.approx(SQRT2)

    def test_single_coordinate_is_one(self):
        assert section_ratio(canonicalize([1.0, 0.0, 0.0]), Exponent.of(3)).mean == pytest.approx(1.0)

    def test_fourier_for_cube(self):
        est = section_ratio(canonicalize([1.0, 1.0, 1.0]), INF)
        assert est.std_error == 0.0
        assert est.mean == pytest.approx(3.0 * math.sqrt(3.0) / 4.0, abs=1e-8)

    def test_monte_carlo_matches_two_dimensional_formula(self, samples, seed):
        a = canonicalize([0.9, 0.4])
        for p in (Exponent.of(1.5), Exponent.of(4), INF):
            est = estimate_section_ratio(SectionQuery(a=a, p=p, samples=samples, seed=seed))
            assert within(est, exact_section_ratio_2d(a, p))

    def test_monte_carlo_matches_fourier(self, samples, seed):
        a = canonicalize([3.0, 2.0, 1.0, 1.0])
        est = estimate_section_ratio(SectionQuery(a=a, p=INF, samples=samples, seed=seed))
        assert within(est, cube_section_fourier(a))

    def test_p_two_is_one(self, samples, seed):
        a = canonicalize([1.0, 2.0, 3.0, 4.0, 5.0])
        est = estimate_section_ratio(SectionQuery(a=a, p=Exponent.of(2), samples=samples, seed=seed))
        assert within(est, 1.0)

    def test_reproducible(self, seed):
        query = SectionQuery(a=canonicalize([1.0, 1.0, 1.0]), p=Exponent.of(5), samples=5000, seed=seed)
        assert estimate_section_ratio(query) == estimate_section_ratio(query)

    def test_wide_directions_use_chunks(self, seed):
        a = Direction(coords=(1.0,) * 150)
        est = estimate_section_ratio(SectionQuery(a=a, p=INF, samples=4000, seed=seed))
        assert math.isfinite(est.mean)
        assert est.mean == pytest.approx(math.sqrt(6.0 / math.pi), abs=0.1)


class TestRepresentations:
    def test_min_representation(self, samples, seed):
        a = canonicalize([1.0, 1.0, 1.0, 1.0])
        full, smaller, diff = min_representation_check(a, 2, Exponent.of(3), samples, seed)
        assert diff.mean == pytest.approx(full.mean - smaller.mean, abs=1e-12)
        assert within(diff, 0.0, k=5.0)

    def test_min_representation_split(self):
        with pytest.raises(InvalidInputError):
            min_representation_check(canonicalize([1.0, 1.0]), 2, INF, 10, 0)

    def test_konig_kwapien_at_e1(self, samples, seed):
        # both sides equal one
        lhs, rhs = konig_kwapien_check([1.0], 1.0, samples, seed)
        assert lhs.mean == pytest.approx(1.0)
        assert within(rhs, 1.0)

    def test_konig_kwapien_agrees(self, samples, seed):
        lhs, rhs = konig_kwapien_check([0.5, 0.3, 0.2], 2.0, samples, seed)
        assert abs(lhs.mean - rhs.mean) <= 4.0 * math.hypot(lhs.std_error, rhs.std_error)

    def test_konig_kwapien_order(self):
        with pytest.raises(InvalidInputError):
            konig_kwapien_check([1.0], -1.0, 10, 0)
        with pytest.raises(InvalidInputError):
            konig_kwapien_check([1.0], 0.0, 10, 0)


class TestVolumes:
    def test_ball_volume(self):
        assert ball_volume(2, Exponent.of(2)) == pytest.approx(math.pi)
        assert ball_volume(3, Exponent.of(2)) == pytest.approx(4.0 * math.pi / 3.0)
        assert ball_volume(3, Exponent.of(1)) == pytest.approx(8.0 / 6.0)
        assert ball_volume(5, INF) == 32.0
        with pytest.raises(InvalidInputError):
            ball_volume(0, INF)

    def test_rejection_volume(self, samples, seed):
        est = ball_volume_rejection(3, Exponent.of(2), samples, seed)
        assert within(est, 4.0 * math.pi / 3.0)

    def test_absolute_section_of_disc(self, samples, seed):
        # a line through the unit disc has length 2
        est = section_volume_absolute(canonicalize([1.0, 1.0]), 2, Exponent.of(2), samples, seed)
        assert within(est, 2.0)

    def test_absolute_section_dimension(self):
        with pytest.raises(InvalidInputError):
            section_volume_absolute(canonicalize([1.0, 1.0, 1.0]), 2, INF, 10, 0)

    def test_slab_tends_to_section(self, seed):
        a = canonicalize([1.0, 1.0, 1.0])
        est = slab_section_volume(a, INF, 0.01, 200_000, seed)
        exact = cube_section_fourier(a) * 2.0 ** 2
        assert within(est, exact, floor=0.02 * exact)


class TestSectionGap:
    def test_gap_at_p_infinity_is_zero(self, seed):
        a = canonicalize([1.0, 1.0, 1.0])
        with_radii, plain, diff = estimate_section_gap(a, INF, 8000, seed)
        assert diff.mean == pytest.approx(0.0, abs=1e-12)
        assert with_radii.mean == pytest.approx(plain.mean)

    def test_gap_sides(self, samples, seed):
        a = canonicalize([1.0, 0.8, 0.5])
        with_radii, plain, diff = estimate_section_gap(a, Exponent.of(6), samples, seed)
        assert within(plain, cube_section_fourier(a))
        assert diff.mean == pytest.approx(with_radii.mean - plain.mean, abs=1e-12)
