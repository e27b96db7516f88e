"""Dark channel, airlight, transmission, box and guided filter contracts."""

import numpy as np
import pytest

from dehaze.estimation import (
    box_filter,
    box_filter_naive,
    channel_min,
    dark_channel,
    estimate_airlight,
    estimate_transmission,
    guided_filter,
    transmission_from_channel_min,
)
from dehaze.synth import HazeSpec, compose_haze


def _zero_dark_image(rng, h, w, high=0.7):
    """Image where every pixel has one zero channel (dark channel == 0)."""
    img = rng.uniform(0.0, high, size=(h, w, 3))
    kill = rng.integers(0, 3, size=(h, w))
    for c in range(3):
        img[:, :, c][kill == c] = 0.0
    return img


def _airlight_oracle(image, dark, top_fraction, alpha):
    """Full-sort reference: order by (-dark, index), average top K."""
    flat = dark.ravel()
    n = flat.size
    k = max(1, int(np.floor(top_fraction * n)))
    order = sorted(range(n), key=lambda i: (-flat[i], i))[:k]
    mean = image.reshape(-1, 3)[order].mean(axis=0)
    return np.maximum(alpha * mean, 1e-6)


class TestChannelMinAndDarkChannel:
    def test_channel_min_is_pointwise(self):
        rng = np.random.default_rng(20)
        img = rng.random((8, 9, 3))
        assert np.array_equal(channel_min(img), img.min(axis=2))

    def test_white_image_dark_channel_one(self):
        img = np.ones((20, 20, 3))
        assert np.allclose(dark_channel(img, 7), 1.0)

    def test_zero_dark_scene(self):
        rng = np.random.default_rng(21)
        img = _zero_dark_image(rng, 24, 30)
        assert np.allclose(dark_channel(img, 7), 0.0)

    def test_hazy_composition_gives_airlight_residual(self):
        # Haze over a zero-dark scene leaves A*(1-t) in the dark channel.
        rng = np.random.default_rng(22)
        clean = _zero_dark_image(rng, 40, 50)
        hazy = compose_haze(clean, HazeSpec(airlight=(0.8, 0.8, 0.8), transmission=0.6))
        dark = dark_channel(hazy, 7)
        assert np.abs(dark - 0.8 * 0.4).max() < 1e-6

    def test_dark_channel_bounded_by_channel_min(self):
        rng = np.random.default_rng(23)
        img = rng.random((15, 17, 3))
        assert (dark_channel(img, 3) <= channel_min(img) + 1e-15).all()


class TestEstimateAirlight:
    def test_constant_image_scales_by_alpha(self):
        img = np.full((16, 16, 3), 0.6)
        a = estimate_airlight(img, dark_channel(img, 7))
        assert np.allclose(a, 0.8 * 0.6, atol=1e-12)

    def test_single_brightest_pixel(self):
        img = np.full((10, 10, 3), 0.2)
        img[4, 7] = (0.9, 0.8, 0.7)
        dark = np.zeros((10, 10))
        dark[4, 7] = 1.0
        a = estimate_airlight(img, dark, top_fraction=1e-6, alpha=1.0)
        assert np.allclose(a, (0.9, 0.8, 0.7), atol=1e-12)

    def test_matches_full_sort_oracle(self):
        rng = np.random.default_rng(24)
        for _ in range(30):
            img = rng.random((16, 16, 3))
            dark = dark_channel(img, int(rng.integers(1, 4)))
            a = estimate_airlight(img, dark, top_fraction=0.05, alpha=0.8)
            want = _airlight_oracle(img, dark, 0.05, 0.8)
            assert np.allclose(a, want, atol=1e-12)

    def test_ties_break_by_linear_index(self):
        img = np.zeros((2, 4, 3))
        img[0, 1] = 0.9   # flat index 1
        img[1, 0] = 0.5   # flat index 4
        img[1, 3] = 0.3   # flat index 7
        dark = np.array([[0.0, 0.7, 0.0, 0.0], [0.7, 0.0, 0.0, 0.7]])
        # K = 2 among three tied pixels: indices 1 and 4 win.
        a = estimate_airlight(img, dark, top_fraction=0.25, alpha=1.0)
        assert np.allclose(a, (0.9 + 0.5) / 2, atol=1e-12)

    def test_k_is_floor_with_minimum_one(self):
        img = np.random.default_rng(25).random((10, 10, 3))
        dark = dark_channel(img, 2)
        # floor(0.009 * 100) = 0 -> K = 1
        a_tiny = estimate_airlight(img, dark, top_fraction=0.009, alpha=1.0)
        want = _airlight_oracle(img, dark, 0.009, 1.0)
        assert np.allclose(a_tiny, want, atol=1e-12)

    def test_top_fraction_one_averages_everything(self):
        rng = np.random.default_rng(26)
        img = rng.random((8, 8, 3))
        a = estimate_airlight(img, dark_channel(img, 2), top_fraction=1.0, alpha=1.0)
        assert np.allclose(a, img.reshape(-1, 3).mean(axis=0), atol=1e-12)

    def test_components_never_exceed_alpha(self):
        rng = np.random.default_rng(27)
        for _ in range(20):
            img = rng.random((12, 12, 3))
            alpha = float(rng.uniform(0.1, 1.0))
            a = estimate_airlight(img, dark_channel(img, 2), 0.01, alpha)
            assert (a <= alpha + 1e-12).all()

    def test_black_image_floored(self):
        img = np.zeros((8, 8, 3))
        a = estimate_airlight(img, dark_channel(img, 2))
        assert np.allclose(a, 1e-6)

    def test_scale_consistency_dyadic_exact(self):
        rng = np.random.default_rng(28)
        img = rng.uniform(0.1, 0.9, size=(20, 24, 3))
        base = estimate_airlight(img, dark_channel(img, 3))
        for s in (0.5, 0.25):
            scaled = estimate_airlight(img * s, dark_channel(img * s, 3))
            assert np.array_equal(scaled, base * s)

    def test_scale_consistency_general(self):
        rng = np.random.default_rng(29)
        img = rng.uniform(0.2, 0.9, size=(16, 16, 3))
        base = estimate_airlight(img, dark_channel(img, 3))
        for s in (0.9, 0.7, 0.3):
            scaled = estimate_airlight(img * s, dark_channel(img * s, 3))
            assert np.allclose(scaled, base * s, atol=1e-12)

    def test_rejects_bad_parameters(self):
        img = np.full((4, 4, 3), 0.5)
        dark = np.zeros((4, 4))
        with pytest.raises(ValueError, match="top_fraction"):
            estimate_airlight(img, dark, top_fraction=0.0)
        with pytest.raises(ValueError, match="top_fraction"):
            estimate_airlight(img, dark, top_fraction=1.5)
        with pytest.raises(ValueError, match="alpha"):
            estimate_airlight(img, dark, alpha=0.0)

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(ValueError, match="disagree"):
            estimate_airlight(np.zeros((4, 4, 3)), np.zeros((4, 5)))


class TestEstimateTransmission:
    def test_formula_matches_direct_computation(self):
        rng = np.random.default_rng(30)
        for _ in range(20):
            img = rng.random((9, 11, 3))
            a = rng.uniform(0.3, 1.0, size=3)
            omega = float(rng.uniform(0.1, 1.0))
            t_min = float(rng.uniform(0.01, 0.4))
            got = estimate_transmission(img, a, omega, t_min)
            want = np.clip(1.0 - omega * img.min(axis=2) / a.max(), t_min, 1.0)
            assert np.allclose(got, want, atol=1e-12)

    def test_output_within_clamp_range(self):
        rng = np.random.default_rng(31)
        for _ in range(50):
            img = rng.random((6, 6, 3))
            a = rng.uniform(0.05, 1.0, size=3)
            t = estimate_transmission(img, a)
            assert t.min() >= 0.05
            assert t.max() <= 1.0

    def test_black_image_full_transmission(self):
        img = np.zeros((5, 5, 3))
        t = estimate_transmission(img, (0.8, 0.8, 0.8))
        assert np.allclose(t, 1.0)

    def test_channel_min_variant_agrees(self):
        rng = np.random.default_rng(32)
        img = rng.random((7, 8, 3))
        a = np.array([0.7, 0.8, 0.75])
        direct = estimate_transmission(img, a, 0.5, 0.05)
        via_cmin = transmission_from_channel_min(channel_min(img), a, 0.5, 0.05)
        assert np.array_equal(direct, via_cmin)

    def test_rejects_bad_parameters(self):
        img = np.full((4, 4, 3), 0.5)
        with pytest.raises(ValueError, match="omega"):
            estimate_transmission(img, (0.8, 0.8, 0.8), omega=0.0)
        with pytest.raises(ValueError, match="t_min"):
            estimate_transmission(img, (0.8, 0.8, 0.8), t_min=1.0)
        with pytest.raises(ValueError, match="airlight"):
            estimate_transmission(img, (0.0, 0.8, 0.8))


class TestBoxFilter:
    def test_matches_naive_reference(self):
        rng = np.random.default_rng(33)
        for _ in range(40):
            h = int(rng.integers(1, 16))
            w = int(rng.integers(1, 16))
            radius = int(rng.integers(0, 6))
            m = rng.random((h, w))
            got = box_filter(m, radius)
            want = box_filter_naive(m, radius)
            assert np.abs(got - want).max() < 1e-6

    def test_radius_zero_is_identity(self):
        m = np.random.default_rng(34).random((4, 4))
        out = box_filter(m, 0)
        assert np.array_equal(out, m)
        assert out is not m

    def test_constant_preserved(self):
        m = np.full((10, 12), 0.41)
        assert np.abs(box_filter(m, 4) - 0.41).max() < 1e-12

    def test_window_mean_small_case(self):
        m = np.arange(9, dtype=np.float64).reshape(3, 3)
        out = box_filter(m, 1)
        assert abs(out[1, 1] - 4.0) < 1e-12


class TestGuidedFilter:
    @staticmethod
    def _reference(p, guide, radius, eps):
        """Per-window least squares with explicit loops; replicate border."""
        h, w = p.shape
        pp = np.pad(p, radius, mode="edge")
        gg = np.pad(guide, radius, mode="edge")
        k = 2 * radius + 1
        a = np.empty((h, w))
        b = np.empty((h, w))
        for i in range(h):
            for j in range(w):
                wp = pp[i : i + k, j : j + k]
                wg = gg[i : i + k, j : j + k]
                mi = wg.mean()
                mp = wp.mean()
                cov = (wg * wp).mean() - mi * mp
                var = (wg * wg).mean() - mi * mi
                a[i, j] = cov / (var + eps)
                b[i, j] = mp - a[i, j] * mi
        aa = np.pad(a, radius, mode="edge")
        bb = np.pad(b, radius, mode="edge")
        q = np.empty((h, w))
        for i in range(h):
            for j in range(w):
                q[i, j] = (
                    aa[i : i + k, j : j + k].mean() * guide[i, j]
                    + bb[i : i + k, j : j + k].mean()
                )
        return np.clip(q, 0.0, 1.0)

    def test_matches_reference(self):
        rng = np.random.default_rng(35)
        for _ in range(8):
            p = rng.random((14, 13))
            guide = rng.random((14, 13))
            radius = int(rng.integers(1, 4))
            eps = float(rng.choice([1e-4, 1e-3, 1e-2]))
            got = guided_filter(p, guide, radius, eps)
            want = self._reference(p, guide, radius, eps)
            assert np.abs(got - want).max() < 1e-5

    def test_preserves_constants(self):
        rng = np.random.default_rng(36)
        guide = rng.random((12, 12))
        p = np.full((12, 12), 0.63)
        q = guided_filter(p, guide, 3, 1e-3)
        assert np.abs(q - 0.63).max() < 1e-9

    def test_output_clamped(self):
        rng = np.random.default_rng(37)
        p = rng.random((16, 16))
        guide = rng.random((16, 16))
        q = guided_filter(p, guide, 2, 1e-4)
        assert q.min() >= 0.0 and q.max() <= 1.0

    def test_smooths_noise_on_flat_guide(self):
        rng = np.random.default_rng(38)
        p = 0.5 + rng.normal(0.0, 0.1, size=(20, 20)).clip(-0.4, 0.4)
        guide = np.full((20, 20), 0.5)
        q = guided_filter(p, guide, 4, 1e-3)
        assert q.std() < p.std() * 0.5

    def test_rejects_bad_arguments(self):
        p = np.zeros((5, 5))
        with pytest.raises(ValueError, match="disagree"):
            guided_filter(p, np.zeros((5, 6)), 2, 1e-3)
        with pytest.raises(ValueError, match=">= 1"):
            guided_filter(p, p, 0, 1e-3)
        with pytest.raises(ValueError, match="eps"):
            guided_filter(p, p, 2, 0.0)
