"""Light source recovery by illuminance-weighted blending.

A deflaring operator tends to erase light sources along with the flare.
Recovery blends the operator's output back toward its input using a weight
that is a min-max normalized power of the input illuminance:

    W_r = ((I - min I) / (max I - min I)) ^ alpha
    out = (1 - W_r) * deflared + W_r * input

The brightest pixel(s) always get weight exactly 1 and the darkest exactly
0, so every light source tied at the maximum survives unchanged, with no
brightness threshold or connectivity analysis anywhere.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import ndimage

from .color import DEFAULT_GAMMA, LinearImage, WeightMap, illuminance
from . import fileio

DEFAULT_ALPHA = 15.0


@dataclass(frozen=True)
class RecoveryParams:
    """Exponent controlling how tightly recovery localizes to highlights."""

    alpha: float = DEFAULT_ALPHA

    def __post_init__(self):
        if not np.isfinite(self.alpha):
            raise ValueError("alpha must be finite")
        if self.alpha <= 0:
            warnings.warn(
                "alpha <= 0 degenerates the recovery weight (sub-maximal pixels "
                "would outweigh the maximum); only alpha > 0 is supported",
                stacklevel=2,
            )


def recovery_weights(input_img: LinearImage, alpha: float = DEFAULT_ALPHA) -> WeightMap:
    """Min-max normalized illuminance raised to ``alpha``.

    A constant-illuminance image has no identifiable light source; it gets
    all-zero weights (recovery then defers entirely to the operator) and a
    warning rather than an error.
    """
    if not np.isfinite(alpha):
        raise ValueError("alpha must be finite")
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    total = illuminance(input_img).data
    lo, hi = float(total.min()), float(total.max())
    if hi == lo:
        warnings.warn(
            "constant-illuminance input: no light source to recover, weights are all zero",
            stacklevel=2,
        )
        return WeightMap(np.zeros_like(total))
    norm = (total - lo) / (hi - lo)
    return WeightMap(np.power(norm, alpha))


def recover(
    input_img: LinearImage, deflared: LinearImage, alpha: float = DEFAULT_ALPHA
) -> LinearImage:
    """Blend the deflared result back toward the input at bright pixels."""
    if input_img.data.shape != deflared.data.shape:
        raise ValueError(
            f"input {input_img.data.shape} and deflared {deflared.data.shape} shapes differ"
        )
    w = recovery_weights(input_img, alpha).data[:, :, None]
    out = (1.0 - w) * deflared.data + w * input_img.data
    return LinearImage(np.clip(out, 0.0, 1.0))


@dataclass(frozen=True)
class AlphaSweepResult:
    alphas: tuple[float, ...]
    outputs: tuple[LinearImage, ...]
    #: L-infinity distance between consecutive outputs (len(alphas) - 1 entries)
    consecutive_linf: tuple[float, ...]


def alpha_sweep(
    input_img: LinearImage, deflared: LinearImage, alphas: list[float]
) -> AlphaSweepResult:
    """Recover at several exponents and measure how fast outputs stabilize."""
    if not alphas:
        raise ValueError("alpha list must not be empty")
    outputs = [recover(input_img, deflared, a) for a in alphas]
    diffs = [
        float(np.max(np.abs(outputs[i + 1].data - outputs[i].data)))
        for i in range(len(outputs) - 1)
    ]
    return AlphaSweepResult(
        alphas=tuple(float(a) for a in alphas),
        outputs=tuple(outputs),
        consecutive_linf=tuple(diffs),
    )


class DeflareOperator:
    """Any image-to-image transform standing in for a flare removal model."""

    def __call__(self, img: LinearImage) -> LinearImage:
        raise NotImplementedError


class IdentityOperator(DeflareOperator):
    def __call__(self, img: LinearImage) -> LinearImage:
        return img


@dataclass(frozen=True)
class UniformDarken(DeflareOperator):
    factor: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.factor <= 1.0:
            raise ValueError(f"darken factor must lie in [0, 1], got {self.factor}")

    def __call__(self, img: LinearImage) -> LinearImage:
        return LinearImage(img.data * self.factor)


@dataclass(frozen=True)
class GaussianBlurOperator(DeflareOperator):
    radius: float = 2.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"blur radius must be positive, got {self.radius}")

    def __call__(self, img: LinearImage) -> LinearImage:
        blurred = ndimage.gaussian_filter(img.data, sigma=(self.radius, self.radius, 0.0))
        return LinearImage(np.clip(blurred, 0.0, 1.0))


@dataclass(frozen=True)
class ExternalImageOperator(DeflareOperator):
    """Reads a precomputed deflared image from disk (read-only I/O)."""

    path: str | Path
    gamma: float = DEFAULT_GAMMA

    def __call__(self, img: LinearImage) -> LinearImage:
        from .color import gamma_decode

        loaded = gamma_decode(fileio.read_png(self.path), self.gamma)
        if loaded.data.shape != img.data.shape:
            raise ValueError(
                f"deflared image {loaded.data.shape} does not match input {img.data.shape}"
            )
        return loaded
