import math

import numpy as np
import pytest

from v2vgame.curves import Curve, ModelCurves, affine, constant, piecewise, power
from v2vgame.errors import CurveError


class TestEvaluation:
    def test_affine(self):
        c = affine(0.1, 0.4)
        assert c(0.0) == 0.1
        assert c(0.5) == pytest.approx(0.3, abs=1e-15)
        assert c(1.0) == 0.5

    def test_constant_is_flat(self):
        c = constant(0.25)
        assert c(0.0) == c(0.37) == c(1.0) == 0.25

    def test_power(self):
        c = power(0.1, 0.8, 2.0)
        assert c(0.5) == pytest.approx(0.3, abs=1e-15)
        assert c(0.0) == 0.1
        assert c(1.0) == pytest.approx(0.9, abs=1e-15)

    def test_piecewise_interpolates(self):
        c = piecewise([(0.0, 0.0), (0.5, 0.2), (1.0, 0.8)])
        assert c(0.0) == 0.0
        assert c(0.5) == 0.2
        assert c(0.25) == pytest.approx(0.1, abs=1e-15)
        assert c(0.75) == pytest.approx(0.5, abs=1e-15)

    def test_piecewise_clamps_outside_knot_span(self):
        c = piecewise([(0.0, 0.1), (1.0, 0.8)])
        assert c(-0.5) == c(0.0)
        assert c(1.5) == c(1.0)

    def test_constant_helper_is_flat_affine(self):
        assert constant(0.25) == affine(0.25, 0.0)


class TestInverse:
    def test_affine_inverse_exact(self):
        c = affine(0.1, 0.4)
        assert c.inverse(0.3) == pytest.approx(0.5, abs=1e-15)
        assert c.inverse(0.1) == 0.0
        assert c.inverse(0.5) == 1.0

    def test_power_inverse(self):
        c = power(0.0, 1.0, 2.0)
        assert c.inverse(0.25) == pytest.approx(0.5, abs=1e-12)

    def test_inverse_clamps_out_of_range_values(self):
        c = affine(0.1, 0.4)
        assert c.inverse(0.0) == 0.0
        assert c.inverse(0.9) == 1.0

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_piecewise_inverse_residual(self, seed):
        rng = np.random.default_rng(seed)
        xs = np.sort(rng.uniform(0.0, 1.0, 5))
        xs[0], xs[-1] = 0.0, 1.0
        vs = np.sort(rng.uniform(0.0, 1.0, 5))
        vs += np.arange(5) * 1e-3  # keep strictly increasing
        vs = np.clip(vs / vs.max(), 0.0, 1.0)
        c = piecewise(list(zip(xs, vs)))
        for v in rng.uniform(vs[0], vs[-1], 50):
            x = c.inverse(float(v))
            assert abs(c(x) - v) <= 1e-12

    def test_roundtrip_on_random_interior_points(self):
        rng = np.random.default_rng(3)
        for c in (affine(0.05, 0.9), power(0.1, 0.7, 1.7)):
            for x in rng.uniform(0.0, 1.0, 50):
                assert c.inverse(c(float(x))) == pytest.approx(float(x), abs=1e-10)


class TestSerialization:
    def test_parse_and_spec_roundtrip(self):
        for text in ("affine:0.1,0.4", "power:0.1,0.8,2", "piecewise:0,0,0.5,0.2,1,0.8"):
            c = Curve.parse(text)
            again = Curve.parse(c.spec())
            assert again == c

    def test_dict_roundtrip(self):
        c = power(0.1, 0.8, 2.0)
        assert Curve.from_dict(c.to_dict()) == c

    def test_parse_requires_family_prefix(self):
        with pytest.raises(CurveError):
            Curve.parse("0.1,0.4")

    @pytest.mark.parametrize(
        "bad",
        [
            ("affine", (0.1,)),
            ("power", (0.1, 0.8)),
            ("mystery", (0.1,)),
            ("affine", (0.1, float("nan"))),
            ("piecewise", (0.0, 0.1, 0.5, 0.2)),          # does not span [0, 1]
            ("piecewise", (0.0, 0.1, 0.6, 0.2, 0.4, 0.3, 1.0, 0.5)),  # unordered knots
            ("piecewise", (0.0, 0.1, 1.0)),               # odd value count
        ],
    )
    def test_structural_validation(self, bad):
        family, params = bad
        with pytest.raises(CurveError):
            Curve(family, params)

    def test_value_range(self):
        assert affine(0.1, 0.4).value_range() == (0.1, 0.5)
        assert piecewise([(0.0, 0.2), (1.0, 0.7)]).value_range() == (0.2, 0.7)


class TestModelCurves:
    def test_valid_set_passes(self):
        ModelCurves(constant(0.5), constant(0.1), affine(0.1, 0.4)).validate()

    def test_detection_rates_must_separate(self):
        with pytest.raises(CurveError):
            ModelCurves(constant(0.5), constant(0.5), affine(0.1, 0.4)).validate()

    def test_separation_checked_on_a_grid_not_just_endpoints(self):
        # rates cross mid-range even though the right endpoint looks fine
        with pytest.raises(CurveError):
            ModelCurves(affine(0.3, 0.1), affine(0.05, 0.6), affine(0.1, 0.4)).validate()

    def test_crash_curve_must_strictly_increase(self):
        with pytest.raises(CurveError):
            ModelCurves(constant(0.5), constant(0.1), constant(0.3)).validate()
        with pytest.raises(CurveError):
            flat_tail = piecewise([(0.0, 0.1), (0.5, 0.3), (1.0, 0.3)])
            ModelCurves(constant(0.5), constant(0.1), flat_tail).validate()

    def test_crash_curve_must_stay_in_unit_interval(self):
        with pytest.raises(CurveError):
            ModelCurves(constant(0.5), constant(0.1), affine(0.5, 0.6)).validate()

    def test_detection_rates_must_stay_probabilities(self):
        with pytest.raises(CurveError):
            ModelCurves(affine(0.6, 0.6), constant(0.1), affine(0.1, 0.4)).validate()


def test_is_strictly_increasing_helper():
    assert affine(0.1, 0.4).is_strictly_increasing()
    assert not constant(0.3).is_strictly_increasing()
    assert not affine(0.5, -0.2).is_strictly_increasing()


def test_curves_hashable_and_frozen():
    c = affine(0.1, 0.4)
    assert hash(c) == hash(affine(0.1, 0.4))
    with pytest.raises(Exception):
        c.params = (0.0, 1.0)


def test_power_matches_math_pow():
    c = power(0.2, 0.5, 1.3)
    for x in (0.1, 0.37, 0.9):
        assert c(x) == 0.2 + 0.5 * math.pow(x, 1.3)
