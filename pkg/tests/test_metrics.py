import math

import numpy as np
import pytest

from flarekit import (
    LinearImage,
    blend_convex,
    blend_direct_add,
    illuminance,
    psnr,
    shift_report,
    ssim,
    weight_map,
)


def checkerboard(size=64, period=8):
    yy, xx = np.mgrid[0:size, 0:size]
    pattern = (((yy // period) + (xx // period)) % 2).astype(np.float64)
    return LinearImage(np.repeat(pattern[:, :, None], 3, axis=2))


def ssim_brute_force(a: LinearImage, b: LinearImage) -> float:
    """Sliding-window reference: per-window weighted stats, no convolution."""
    x = illuminance(a).data
    y = illuminance(b).data
    half = (11 - 1) / 2.0
    coords = np.arange(11) - half
    g = np.exp(-(coords**2) / (2.0 * 1.5**2))
    win = np.outer(g, g)
    win /= win.sum()
    c1, c2 = 0.01**2, 0.03**2
    h, w = x.shape
    values = []
    for i in range(h - 10):
        for j in range(w - 10):
            px = x[i : i + 11, j : j + 11]
            py = y[i : i + 11, j : j + 11]
            mx = (win * px).sum()
            my = (win * py).sum()
            vx = (win * (px - mx) ** 2).sum()
            vy = (win * (py - my) ** 2).sum()
            cxy = (win * (px - mx) * (py - my)).sum()
            values.append(
                ((2 * mx * my + c1) * (2 * cxy + c2))
                / ((mx**2 + my**2 + c1) * (vx + vy + c2))
            )
    return float(np.mean(values))


class TestPsnr:
    def test_identical_hits_cap(self, random_image):
        assert psnr(random_image, random_image) == 99.0

    def test_half_offset(self):
        a = LinearImage(np.full((8, 8, 3), 0.25))
        b = LinearImage(np.full((8, 8, 3), 0.75))
        expected = 10.0 * math.log10(1.0 / 0.25)
        assert psnr(a, b) == pytest.approx(expected, abs=1e-12)
        assert psnr(a, b) == pytest.approx(6.0206, abs=1e-3)

    def test_full_scale_error(self):
        a = LinearImage(np.zeros((4, 4, 3)))
        b = LinearImage(np.ones((4, 4, 3)))
        assert psnr(a, b) == pytest.approx(0.0, abs=1e-12)

    def test_symmetry(self, rng):
        a = LinearImage(rng.random((8, 8, 3)))
        b = LinearImage(rng.random((8, 8, 3)))
        assert psnr(a, b) == psnr(b, a)

    def test_shape_mismatch(self, rng):
        with pytest.raises(ValueError):
            psnr(LinearImage(rng.random((4, 4, 3))), LinearImage(rng.random((4, 5, 3))))


class TestSsim:
    def test_self_similarity_is_exactly_one(self, rng):
        img = LinearImage(rng.random((32, 32, 3)))
        assert ssim(img, img) == 1.0

    def test_inverted_checkerboard_dissimilar(self):
        board = checkerboard()
        inverted = LinearImage(1.0 - board.data)
        assert ssim(board, inverted) < 0.5

    def test_tiny_noise_stays_close(self, rng):
        board = checkerboard()
        noisy = LinearImage(np.clip(board.data + rng.normal(0, 1e-4, board.data.shape), 0, 1))
        assert ssim(board, noisy) >= 0.999

    def test_against_brute_force_oracle(self, rng):
        board = checkerboard()
        other = LinearImage(
            np.clip(board.data * 0.8 + rng.normal(0, 0.05, board.data.shape), 0, 1)
        )
        assert ssim(board, other) == pytest.approx(ssim_brute_force(board, other), abs=1e-6)

    def test_symmetry(self, rng):
        a = LinearImage(rng.random((24, 24, 3)))
        b = LinearImage(rng.random((24, 24, 3)))
        assert ssim(a, b) == pytest.approx(ssim(b, a), abs=1e-12)

    def test_too_small_rejected(self, rng):
        small = LinearImage(rng.random((8, 8, 3)))
        with pytest.raises(ValueError):
            ssim(small, small)


class TestShiftReport:
    def test_identical_images_zero_deltas(self, random_image):
        rep = shift_report(random_image, random_image, bins=16)
        assert rep.mean_delta == 0.0
        assert rep.p10_delta == rep.p50_delta == rep.p90_delta == 0.0

    def test_darkened_image_mean_delta(self, rng):
        a = LinearImage(rng.random((16, 16, 3)))
        b = LinearImage(a.data * 0.5)
        rep = shift_report(a, b, bins=8)
        assert rep.mean_delta == pytest.approx(-rep.mean_a / 2.0, rel=1e-12)

    def test_antisymmetric_under_swap(self, rng):
        a = LinearImage(rng.random((16, 16, 3)))
        b = LinearImage(rng.random((16, 16, 3)))
        fwd = shift_report(a, b, bins=8)
        rev = shift_report(b, a, bins=8)
        assert fwd.mean_delta == -rev.mean_delta
        assert fwd.p50_delta == -rev.p50_delta

    def test_convex_composite_is_not_brighter_than_direct(self, rng):
        scene = LinearImage(rng.random((24, 24, 3)))
        flare = LinearImage(rng.random((24, 24, 3)))
        w = weight_map(illuminance(flare), 5.0, 0.5)
        convex = blend_convex(scene, flare, w)
        direct = blend_direct_add(scene, flare)
        rep = shift_report(direct, convex, bins=16)
        assert rep.mean_delta <= 1e-12
