from __future__ import annotations

import numpy as np
import pytest

from skinforge.colorspace import YCgCrPixel, YiqPixel, rgb_to_ycgcr, rgb_to_yiq
from skinforge.skin_model import (
    SkinModelParams,
    classify_pixel,
    in_skin_cgcr,
    in_skin_iq,
    rgb_nonskin_heuristic,
    texture_bit,
)


def independent_classify(r: int, g: int, b: int) -> bool:
    """Literal re-evaluation of the skin decision, kept apart from the library."""
    i = 0.596 * r - 0.274 * g - 0.322 * b
    q = 0.212 * r - 0.523 * g + 0.311 * b
    iq = 15 <= i <= 90 and -20 <= q <= 10
    rn, gn, bn = r / 255, g / 255, b / 255
    cg = 128 - 81.085 * rn + 112 * gn - 30.915 * bn
    cr = 128 + 112 * rn - 93.786 * gn - 18.214 * bn
    cgcr = 85 <= cg <= 135 and 260 <= cg + cr <= 280
    dark = r < 80 and g < 80 and b < 80
    disordered = (r < 230 and g < 230 and b < 230) and not (r > g > b)
    return iq and cgcr and not (dark or disordered)


class TestCgCrModel:
    def test_interior_point(self):
        assert in_skin_cgcr(YCgCrPixel(0.0, 100.0, 165.0))

    def test_cg_below_band(self):
        assert not in_skin_cgcr(YCgCrPixel(0.0, 84.0, 180.0))

    def test_skin_tone(self):
        p = rgb_to_ycgcr((200, 150, 120))
        assert in_skin_cgcr(p)
        assert 260 <= p.cg + p.cr <= 280

    def test_boundaries_are_closed(self):
        assert in_skin_cgcr(YCgCrPixel(0.0, 85.0, 175.0))  # cg at edge, sum = 260
        assert in_skin_cgcr(YCgCrPixel(0.0, 135.0, 145.0))  # cg at edge, sum = 280
        assert not in_skin_cgcr(YCgCrPixel(0.0, 100.0, 159.9))


class TestIqModel:
    def test_interior_point(self):
        assert in_skin_iq(YiqPixel(0.0, 50.0, 0.0))

    def test_below_i_low(self):
        assert not in_skin_iq(YiqPixel(0.0, 14.9, 0.0))

    def test_skin_tone(self):
        assert in_skin_iq(rgb_to_yiq((200, 150, 120)))

    def test_boundaries_are_closed(self):
        assert in_skin_iq(YiqPixel(0.0, 90.0, 10.0))
        assert in_skin_iq(YiqPixel(0.0, 15.0, -20.0))
        assert not in_skin_iq(YiqPixel(0.0, 90.1, 0.0))


class TestHeuristic:
    def test_all_dark(self):
        assert rgb_nonskin_heuristic((70, 70, 70))

    def test_ordered_skin_tone_passes(self):
        assert not rgb_nonskin_heuristic((200, 150, 120))

    def test_disordered_channels(self):
        assert rgb_nonskin_heuristic((100, 150, 120))

    def test_bright_disordered_not_flagged(self):
        # above the brightness limit the ordering test does not apply
        assert not rgb_nonskin_heuristic((240, 250, 245))

    def test_strict_ordering(self):
        assert rgb_nonskin_heuristic((150, 150, 120))  # r > g fails (equal)


class TestTextureBit:
    def test_flat_skin(self):
        assert not texture_bit(0.0, (200, 150, 120))

    def test_strong_gradient(self):
        assert texture_bit(255.0, (200, 150, 120))

    def test_heuristic_fires_without_gradient(self):
        assert texture_bit(0.0, (70, 70, 70))

    def test_threshold_is_strict(self):
        m = SkinModelParams()
        assert not texture_bit(m.gradient_threshold, (200, 150, 120), m)


class TestClassify:
    def test_canonical_skin(self):
        assert classify_pixel((200, 150, 120), 0.0)

    def test_gray_fails_iq(self):
        assert not classify_pixel((128, 128, 128), 0.0)

    def test_dark_fails_heuristic(self):
        assert not classify_pixel((70, 70, 70), 0.0)

    def test_monotone_rejection(self, rng):
        for _ in range(500):
            p = tuple(int(v) for v in rng.integers(0, 256, 3))
            grad = float(rng.uniform(0, 100))
            if classify_pixel(p, grad):
                assert in_skin_iq(rgb_to_yiq(p))
                assert in_skin_cgcr(rgb_to_ycgcr(p))

    def test_threshold_monotonicity(self, rng):
        for _ in range(300):
            p = tuple(int(v) for v in rng.integers(0, 256, 3))
            grad = float(rng.uniform(0, 60))
            was_skin = False
            for threshold in np.linspace(0, 60, 13):
                m = SkinModelParams(gradient_threshold=float(threshold))
                is_skin = classify_pixel(p, grad, m)
                assert not (was_skin and not is_skin)
                was_skin = is_skin

    def test_lattice_agrees_with_independent_evaluation(self):
        for r in range(0, 256, 8):
            for g in range(0, 256, 8):
                for b in range(0, 256, 8):
                    assert classify_pixel((r, g, b), 0.0) == independent_classify(r, g, b), (r, g, b)


class TestParams:
    def test_defaults(self):
        m = SkinModelParams()
        assert (m.cgcr_sum_lo, m.cgcr_sum_hi) == (260.0, 280.0)
        assert (m.i_lo, m.i_hi, m.q_lo, m.q_hi) == (15.0, 90.0, -20.0, 10.0)
        assert m.gradient_threshold == 24.0

    def test_validation(self):
        with pytest.raises(ValueError):
            SkinModelParams(cg_lo=140.0)
        with pytest.raises(ValueError):
            SkinModelParams(gradient_threshold=-1.0)

    def test_config_round_trip(self):
        m = SkinModelParams(i_lo=12.0, gradient_threshold=30.0, dark_limit=60)
        assert SkinModelParams.from_config_text(m.to_config_text()) == m

    def test_config_partial_and_comments(self):
        text = "# tighter texture gate\ngradient_threshold=10\n\ni_hi=80\n"
        m = SkinModelParams.from_config_text(text)
        assert m.gradient_threshold == 10.0
        assert m.i_hi == 80.0
        assert m.cg_lo == 85.0

    def test_config_rejects_unknown_key(self):
        with pytest.raises(ValueError, match="unknown"):
            SkinModelParams.from_config_text("not_a_field=3\n")
        with pytest.raises(ValueError, match="bad value"):
            SkinModelParams.from_config_text("i_lo=abc\n")
