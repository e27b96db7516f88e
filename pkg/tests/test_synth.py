"""Forward haze model and metric contracts."""

import numpy as np
import pytest

from dehaze.synth import (
    HazeSpec,
    compose_haze,
    depth_transmission,
    psnr,
    ramp_transmission,
    transmission_rmse,
)


class TestComposeHaze:
    def test_midpoint_arithmetic(self):
        clean = np.full((3, 3, 3), 0.2)
        hazy = compose_haze(clean, HazeSpec(airlight=(0.8, 0.8, 0.8), transmission=0.5))
        assert np.abs(hazy - 0.5).max() < 1e-12

    def test_full_transmission_returns_clean(self):
        rng = np.random.default_rng(50)
        clean = rng.random((5, 6, 3))
        hazy = compose_haze(clean, HazeSpec(airlight=(0.9, 0.9, 0.9), transmission=1.0))
        assert np.abs(hazy - clean).max() < 1e-12

    def test_opaque_haze_returns_airlight(self):
        # t is constrained to (0, 1]; a tiny t approaches pure airlight.
        clean = np.random.default_rng(51).random((4, 4, 3))
        a = np.array([0.7, 0.75, 0.8])
        hazy = compose_haze(clean, HazeSpec(airlight=a, transmission=1e-9))
        assert np.abs(hazy - a).max() < 1e-6

    def test_map_transmission_per_pixel(self):
        clean = np.zeros((2, 2, 3))
        t = np.array([[1.0, 0.5], [0.25, 1.0]])
        hazy = compose_haze(clean, HazeSpec(airlight=(0.8, 0.8, 0.8), transmission=t))
        want = 0.8 * (1.0 - t)
        for c in range(3):
            assert np.abs(hazy[:, :, c] - want).max() < 1e-12

    def test_output_in_unit_range(self):
        rng = np.random.default_rng(52)
        for _ in range(20):
            clean = rng.random((6, 7, 3))
            a = rng.uniform(0.01, 1.0, size=3)
            t = rng.uniform(0.05, 1.0, size=(6, 7))
            hazy = compose_haze(clean, HazeSpec(airlight=a, transmission=t))
            assert hazy.min() >= 0.0 and hazy.max() <= 1.0

    def test_monotone_in_transmission(self):
        # With J < A, more transmission means less airlight, darker pixel.
        clean = np.full((3, 3, 3), 0.1)
        a = (0.9, 0.9, 0.9)
        low = compose_haze(clean, HazeSpec(airlight=a, transmission=0.3))
        high = compose_haze(clean, HazeSpec(airlight=a, transmission=0.8))
        assert (high < low).all()

    def test_rejects_bad_transmission(self):
        clean = np.full((3, 3, 3), 0.5)
        with pytest.raises(ValueError, match="transmission"):
            compose_haze(clean, HazeSpec(airlight=(0.8, 0.8, 0.8), transmission=0.0))
        with pytest.raises(ValueError, match="transmission"):
            compose_haze(clean, HazeSpec(airlight=(0.8, 0.8, 0.8), transmission=1.5))
        bad_map = np.full((3, 3), 0.5)
        bad_map[0, 0] = 0.0
        with pytest.raises(ValueError, match="transmission"):
            compose_haze(clean, HazeSpec(airlight=(0.8, 0.8, 0.8), transmission=bad_map))

    def test_rejects_mismatched_map(self):
        clean = np.full((3, 3, 3), 0.5)
        with pytest.raises(ValueError, match="match"):
            compose_haze(clean, HazeSpec(airlight=(0.8, 0.8, 0.8), transmission=np.full((4, 4), 0.5)))

    def test_rejects_bad_airlight(self):
        clean = np.full((3, 3, 3), 0.5)
        with pytest.raises(ValueError, match="airlight"):
            compose_haze(clean, HazeSpec(airlight=(0.0, 0.5, 0.5), transmission=0.5))


class TestTransmissionGenerators:
    def test_ramp_endpoints_and_shape(self):
        t = ramp_transmission(4, 8, lo=0.3, hi=1.0, axis="x")
        assert t.shape == (4, 8)
        assert abs(t[0, 0] - 0.3) < 1e-12
        assert abs(t[0, -1] - 1.0) < 1e-12
        assert np.array_equal(t[0], t[3])

    def test_ramp_vertical(self):
        t = ramp_transmission(6, 3, lo=0.5, hi=0.9, axis="y")
        assert abs(t[0, 0] - 0.5) < 1e-12
        assert abs(t[-1, 0] - 0.9) < 1e-12
        assert np.array_equal(t[:, 0], t[:, 2])

    def test_ramp_rejects_bad_endpoints(self):
        with pytest.raises(ValueError, match="endpoints"):
            ramp_transmission(4, 4, lo=0.0, hi=1.0)
        with pytest.raises(ValueError, match="axis"):
            ramp_transmission(4, 4, axis="z")

    def test_depth_formula(self):
        depth = np.array([[0.0, 1.0], [2.0, 0.5]])
        t = depth_transmission(depth, beta=0.7)
        assert np.abs(t - np.exp(-0.7 * depth)).max() < 1e-12
        assert t[0, 0] == 1.0

    def test_depth_rejects_bad_inputs(self):
        with pytest.raises(ValueError, match="non-negative"):
            depth_transmission(np.array([[-0.1]]), beta=1.0)
        with pytest.raises(ValueError, match="beta"):
            depth_transmission(np.array([[1.0]]), beta=0.0)


class TestPsnr:
    def test_identical_images_infinite(self):
        img = np.random.default_rng(53).random((5, 5, 3))
        assert psnr(img, img.copy()) == float("inf")

    def test_uniform_tenth_is_twenty_db(self):
        a = np.full((8, 8, 3), 0.45)
        b = np.full((8, 8, 3), 0.55)
        assert abs(psnr(a, b) - 20.0) < 1e-9

    def test_symmetric(self):
        rng = np.random.default_rng(54)
        a, b = rng.random((6, 6, 3)), rng.random((6, 6, 3))
        assert psnr(a, b) == psnr(b, a)

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ValueError, match="disagree"):
            psnr(np.zeros((4, 4, 3)), np.zeros((4, 5, 3)))


class TestTransmissionRmse:
    def test_equal_maps_zero(self):
        t = np.random.default_rng(55).random((6, 6)) * 0.9 + 0.05
        assert transmission_rmse(t, t.copy()) == 0.0

    def test_constant_offset(self):
        truth = np.full((10, 10), 0.5)
        assert abs(transmission_rmse(truth + 0.05, truth) - 0.05) < 1e-12

    def test_matches_double_loop_oracle(self):
        est = ramp_transmission(7, 9, 0.3, 0.9)
        truth = np.full((7, 9), 0.6)
        border = 1
        total = 0.0
        count = 0
        for i in range(border, 7 - border):
            for j in range(border, 9 - border):
                total += (est[i, j] - truth[i, j]) ** 2
                count += 1
        want = (total / count) ** 0.5
        assert abs(transmission_rmse(est, truth, border=border) - want) < 1e-12

    def test_border_excludes_edge_errors(self):
        truth = np.full((8, 8), 0.5)
        est = truth.copy()
        est[0, :] = 0.9
        est[:, -1] = 0.9
        assert transmission_rmse(est, truth, border=1) == 0.0
        assert transmission_rmse(est, truth, border=0) > 0.0

    def test_rejects_degenerate_interior(self):
        t = np.full((4, 4), 0.5)
        with pytest.raises(ValueError, match="interior"):
            transmission_rmse(t, t, border=2)
        with pytest.raises(ValueError, match="border"):
            transmission_rmse(t, t, border=-1)

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ValueError, match="disagree"):
            transmission_rmse(np.zeros((4, 4)), np.zeros((4, 5)))
