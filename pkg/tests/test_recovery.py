from fractions import Fraction

import numpy as np
import pytest

from flarekit import (
    GaussianBlurOperator,
    IdentityOperator,
    LinearImage,
    RecoveryParams,
    UniformDarken,
    ExternalImageOperator,
    alpha_sweep,
    gamma_encode,
    recover,
    recovery_weights,
    write_png,
)


def image_with_extremes(rng, h=16, w=16):
    """Random mid-range image with one exact-white and one exact-black pixel."""
    arr = rng.uniform(0.1, 0.85, (h, w, 3))
    arr[2, 3] = 1.0
    arr[9, 11] = 0.0
    return LinearImage(arr)


class TestRecoveryWeights:
    def test_extremes_hit_exact_endpoints(self, rng):
        img = image_with_extremes(rng)
        w = recovery_weights(img, 15.0).data
        assert w[2, 3] == 1.0
        assert w[9, 11] == 0.0

    def test_midpoint_power_matches_rational_oracle(self):
        # channel sums 0 / 1.5 / 3 normalize to 0 / 0.5 / 1
        arr = np.stack(
            [np.zeros((1, 3)), np.full((1, 3), 0.5), np.ones((1, 3))], axis=0
        ).reshape(3, 1, 3)
        w = recovery_weights(LinearImage(arr), 15.0).data
        oracle = Fraction(1, 2) ** 15
        assert w[1, 0] == float(oracle)
        assert w[1, 0] == 3.0517578125e-5

    def test_multiple_maxima_all_weight_one(self, rng):
        arr = rng.uniform(0.0, 0.5, (8, 8, 3))
        for yx in ((0, 0), (3, 5), (7, 7)):
            arr[yx] = 1.0
        w = recovery_weights(LinearImage(arr), 15.0).data
        assert w[0, 0] == w[3, 5] == w[7, 7] == 1.0

    def test_constant_image_warns_and_zeroes(self):
        img = LinearImage(np.full((4, 4, 3), 0.25))
        with pytest.warns(UserWarning):
            w = recovery_weights(img, 15.0)
        assert w.data.max() == 0.0

    def test_monotone_localization(self, rng):
        img = image_with_extremes(rng)
        w_low = recovery_weights(img, 5.0).data
        w_high = recovery_weights(img, 15.0).data
        assert np.all(w_high <= w_low + 1e-15)

    def test_continuity_no_hidden_threshold(self, rng):
        arr = rng.uniform(0.2, 0.7, (12, 12, 3))
        arr[0, 0] = 1.0  # pin the max
        arr[11, 11] = 0.0  # pin the min
        base = recovery_weights(LinearImage(arr), 15.0).data
        bumped = arr.copy()
        bumped[5, 5, 0] += 1e-6  # interior pixel, extremes unchanged
        delta = np.abs(recovery_weights(LinearImage(bumped), 15.0).data - base)
        assert delta.max() <= 1e-4

    def test_alpha_validation(self):
        img = LinearImage(np.linspace(0, 1, 12).reshape(2, 2, 3))
        with pytest.raises(ValueError):
            recovery_weights(img, 0.0)
        with pytest.raises(ValueError):
            recovery_weights(img, -3.0)
        with pytest.raises(ValueError):
            recovery_weights(img, float("inf"))

    def test_params_warn_on_nonpositive(self):
        with pytest.warns(UserWarning):
            RecoveryParams(alpha=-1.0)
        assert RecoveryParams().alpha == 15.0


class TestRecover:
    def test_identity_absorption(self, rng):
        img = image_with_extremes(rng)
        for alpha in (1.0, 5.0, 15.0, 25.0):
            out = recover(img, img, alpha)
            np.testing.assert_array_max_ulp(out.data, img.data, maxulp=1)

    def test_extreme_pixels_exact(self, rng):
        img = image_with_extremes(rng)
        deflared = LinearImage(rng.random((16, 16, 3)))
        out = recover(img, deflared, 15.0).data
        np.testing.assert_array_equal(out[2, 3], img.data[2, 3])
        np.testing.assert_array_equal(out[9, 11], deflared.data[9, 11])

    def test_bright_blob_on_black_deflared(self, rng):
        # bright blob at normalized illuminance 1, dim background <= 0.5
        arr = rng.uniform(0.0, 0.5 / 3, (16, 16, 3))  # channel sums <= 0.5
        arr[4:6, 4:6] = 1.0
        arr[0, 0] = 0.0  # pin the min at zero so background normalization stays <= 0.5
        img = LinearImage(arr)
        deflared = LinearImage(np.zeros((16, 16, 3)))
        out = recover(img, deflared, 15.0).data
        blob = np.zeros((16, 16), dtype=bool)
        blob[4:6, 4:6] = True
        assert np.all(out[~blob] <= 0.5**15 + 1e-12)
        np.testing.assert_array_equal(out[blob], arr[blob])

    def test_output_within_pixel_bounds(self, rng):
        img = image_with_extremes(rng)
        deflared = LinearImage(rng.random((16, 16, 3)))
        out = recover(img, deflared, 7.0).data
        lo = np.minimum(img.data, deflared.data)
        hi = np.maximum(img.data, deflared.data)
        assert np.all(out >= lo - 1e-12)
        assert np.all(out <= hi + 1e-12)

    def test_shape_mismatch(self, rng):
        img = image_with_extremes(rng)
        with pytest.raises(ValueError):
            recover(img, LinearImage(rng.random((8, 8, 3))), 15.0)


class TestAlphaSweep:
    def test_stabilizes_with_growing_alpha(self, rng):
        img = image_with_extremes(rng)
        deflared = LinearImage((img.data * 0.3))
        result = alpha_sweep(img, deflared, [15.0, 20.0, 25.0])
        d_15_20, d_20_25 = result.consecutive_linf
        assert d_20_25 <= d_15_20

    def test_single_alpha_no_diffs(self, rng):
        img = image_with_extremes(rng)
        result = alpha_sweep(img, img, [15.0])
        assert result.consecutive_linf == ()
        assert len(result.outputs) == 1

    def test_small_alpha_retains_flare(self, rng):
        # flare-heavy input: big bright veil over a dim scene
        arr = rng.uniform(0.0, 0.3, (24, 24, 3))
        arr[4:20, 4:20] += 0.6  # the "flare" region
        arr = np.clip(arr, 0.0, 1.0)
        arr[0, 0] = 0.0
        arr[12, 12] = 1.0
        img = LinearImage(arr)
        deflared = LinearImage(arr * 0.25)  # stand-in for a deflared result
        out_1 = recover(img, deflared, 1.0).data
        out_15 = recover(img, deflared, 15.0).data
        l1_1 = np.abs(out_1 - deflared.data).sum()
        l1_15 = np.abs(out_15 - deflared.data).sum()
        assert l1_1 > l1_15

    def test_empty_alphas(self, rng):
        img = image_with_extremes(rng)
        with pytest.raises(ValueError):
            alpha_sweep(img, img, [])


class TestOperators:
    def test_identity(self, rng):
        img = image_with_extremes(rng)
        assert IdentityOperator()(img) is img

    def test_uniform_darken(self, rng):
        img = image_with_extremes(rng)
        out = UniformDarken(0.5)(img)
        np.testing.assert_allclose(out.data, img.data * 0.5, atol=1e-15)
        with pytest.raises(ValueError):
            UniformDarken(1.5)

    def test_gaussian_blur(self, rng):
        img = image_with_extremes(rng)
        out = GaussianBlurOperator(2.0)(img)
        assert out.data.shape == img.data.shape
        assert 0.0 <= out.data.min() and out.data.max() <= 1.0
        with pytest.raises(ValueError):
            GaussianBlurOperator(0.0)

    def test_external_image(self, tmp_path, rng):
        img = image_with_extremes(rng)
        deflared = LinearImage(rng.random((16, 16, 3)))
        path = tmp_path / "deflared.png"
        write_png(path, gamma_encode(deflared, 2.2, 16))
        op = ExternalImageOperator(path, gamma=2.2)
        loaded = op(img)
        np.testing.assert_allclose(loaded.data, deflared.data, atol=1e-4)

    def test_external_image_dim_mismatch(self, tmp_path, rng):
        small = LinearImage(rng.random((4, 4, 3)))
        path = tmp_path / "deflared.png"
        write_png(path, gamma_encode(small, 2.2, 16))
        with pytest.raises(ValueError):
            ExternalImageOperator(path)(image_with_extremes(rng))
