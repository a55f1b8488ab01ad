import math

import numpy as np
import pytest
from hypothesis import given, settings

from lpslice.core.exceptions import InvalidInputError
from lpslice.schemas.domain import (
    Direction,
    Exponent,
    LemmaId,
    LemmaVerdict,
    MCEstimate,
    VerdictStatus,
    canonicalize,
    deficit,
)
from tests.helpers import SQRT2, canonical_directions, raw_vectors


class TestExponent:
    def test_parses_infinity_tokens(self):
        for token in ("inf", "INF", "infinity", math.inf):
            assert Exponent.of(token).is_infinite

    def test_parses_numbers(self):
        assert Exponent.of("3").value == 3.0
        assert Exponent.of(1.5).reciprocal == pytest.approx(2.0 / 3.0)

    def test_rejects_below_one(self):
        with pytest.raises(InvalidInputError):
            Exponent.of(0.5)

    def test_rejects_garbage(self):
        with pytest.raises(InvalidInputError):
            Exponent.of("abc")

    def test_dual(self):
        assert Exponent.of(1).dual().is_infinite
        assert Exponent.inf().dual().value == 1.0
        assert Exponent.of(3).dual().value == pytest.approx(1.5)

    def test_infinite_reciprocal_is_zero(self):
        assert Exponent.inf().reciprocal == 0.0
        assert Exponent.inf().label == "inf"


class TestCanonicalize:
    def test_sorts_and_normalizes(self):
        a = canonicalize([0.0, -3.0, 4.0])
        assert a.coords == pytest.approx((0.8, 0.6, 0.0))

    def test_zero_vector(self):
        with pytest.raises(InvalidInputError):
            canonicalize([0.0, 0.0])

    @pytest.mark.parametrize("scale", [1e-200, 1e-310, 1e200, 1e307])
    def test_extreme_magnitudes(self, scale):
        a = canonicalize([scale, -scale])
        assert a.coords == pytest.approx((1.0 / SQRT2, 1.0 / SQRT2), rel=1e-15)
        assert deficit(a) == pytest.approx(0.0, abs=1e-15)

    def test_extreme_magnitudes_keep_ratios(self):
        a = canonicalize([3e-200, 4e-200])
        assert a.coords == pytest.approx((0.8, 0.6), rel=1e-15)

    def test_non_finite(self):
        with pytest.raises(InvalidInputError):
            canonicalize([1.0, float("nan")])

    def test_empty(self):
        with pytest.raises(InvalidInputError):
            canonicalize([])

    @given(raw_vectors)
    @settings(max_examples=200, deadline=None)
    def test_canonical_form(self, raw):
        a = canonicalize(raw)
        arr = a.array()
        assert np.all(arr >= 0.0)
        assert np.all(np.diff(arr) <= 0.0)
        assert np.linalg.norm(arr) == pytest.approx(1.0, abs=1e-12)

    @given(canonical_directions)
    @settings(max_examples=100, deadline=None)
    def test_idempotent(self, a):
        again = canonicalize(a.coords)
        assert again.coords == pytest.approx(a.coords, abs=1e-15)


class TestDeficit:
    def test_extremizer(self):
        assert deficit(Direction(coords=(1.0, 1.0))) <= 1e-15

    def test_coordinate_vector(self):
        assert deficit(Direction(coords=(1.0,))) == pytest.approx(2.0 - SQRT2)

    @given(canonical_directions)
    @settings(max_examples=200, deadline=None)
    def test_range(self, a):
        assert 0.0 <= deficit(a) <= 2.0

    def test_tail_mass(self):
        a = canonicalize([1.0, 1.0, 1.0, 1.0])
        assert a.tail_mass() == pytest.approx(0.5)


class TestMCEstimate:
    def test_exact(self):
        est = MCEstimate.exact(2.5, seed=3)
        assert est.std_error == 0.0
        assert est.agrees_with(2.5, floor=0.0)

    def test_agreement_band(self):
        est = MCEstimate(mean=1.0, std_error=0.01, samples=100, seed=0)
        assert est.agrees_with(1.039)
        assert not est.agrees_with(1.05)
        assert est.agrees_with(1.05, floor=0.06)
        assert est.relative_error == pytest.approx(0.01)


class TestLemmaVerdict:
    def test_deterministic_pass_and_fail(self):
        ok = LemmaVerdict.evaluate(LemmaId.RADIUS_L2, 1.0, 2.0, "<=")
        bad = LemmaVerdict.evaluate(LemmaId.RADIUS_L2, 3.0, 2.0, "<=")
        assert ok.passed and ok.status is VerdictStatus.PASS
        assert not bad.passed and bad.status is VerdictStatus.FAIL
        assert ok.slack == pytest.approx(1.0)

    def test_guard_band_is_three_valued(self):
        inside = LemmaVerdict.evaluate(LemmaId.RADIUS_EVENT, 1.0, 1.01, ">=", std_error=0.01)
        clear = LemmaVerdict.evaluate(LemmaId.RADIUS_EVENT, 1.2, 1.0, ">=", std_error=0.01)
        far = LemmaVerdict.evaluate(LemmaId.RADIUS_EVENT, 0.5, 1.0, ">=", std_error=0.01)
        assert inside.status is VerdictStatus.INCONCLUSIVE
        assert clear.status is VerdictStatus.PASS
        assert far.status is VerdictStatus.FAIL

    def test_equality_relation(self):
        close = LemmaVerdict.evaluate(LemmaId.SPHERE_EVENT, 0.101, 0.1, "==", std_error=0.001)
        apart = LemmaVerdict.evaluate(LemmaId.SPHERE_EVENT, 0.11, 0.1, "==", std_error=0.001)
        assert close.status is VerdictStatus.PASS
        assert apart.status is VerdictStatus.FAIL

    def test_tolerance_absorbs_rounding(self):
        verdict = LemmaVerdict.evaluate(LemmaId.STATED_CONSTANT, 1.0 - 1e-16, 1.0, ">=", tol=1e-12)
        assert verdict.status is VerdictStatus.PASS

    def test_unknown_relation(self):
        with pytest.raises(InvalidInputError):
            LemmaVerdict.evaluate(LemmaId.RADIUS_L2, 1.0, 2.0, "<")

    def test_dump_uses_pass_alias(self):
        dumped = LemmaVerdict.evaluate(LemmaId.CP_SANDWICH, 1.0, 0.0, params={"p": 2}).model_dump(
            mode="json", by_alias=True
        )
        assert dumped["pass"] is True
        assert dumped["lemma_id"] == "cp_sandwich"
        assert dumped["status"] == "pass"
