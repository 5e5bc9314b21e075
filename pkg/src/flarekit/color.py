"""Core image containers, gamma transfer, illuminance, and intensity histograms.

Everything downstream operates on one of two pixel domains:

* encoded domain: integer samples as stored in PNG files, gamma-encoded;
* linear domain: floats in [0, 1] after inverse gamma, where compositing
  arithmetic is physically meaningful.

Images are immutable after construction; the constructors take ownership of
the array they are given and mark it read-only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_GAMMA = 2.2

_DEPTH_DTYPES = {8: np.uint8, 16: np.uint16}


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class LinearImage:
    """H x W x 3 float image in [0, 1], inverse-gamma (linear-proxy) space."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.data, dtype=np.float64)
        if arr.ndim != 3 or arr.shape[2] != 3 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"linear image must be HxWx3, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValueError("linear image contains non-finite values")
        if arr.min() < 0.0 or arr.max() > 1.0:
            raise ValueError("linear image values must lie in [0, 1]")
        object.__setattr__(self, "data", _freeze(arr))

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class EncodedImage:
    """H x W x 3 integer image, gamma-encoded, 8- or 16-bit."""

    data: np.ndarray
    depth: int = 8

    def __post_init__(self):
        if self.depth not in _DEPTH_DTYPES:
            raise ValueError(f"bit depth must be 8 or 16, got {self.depth}")
        dtype = _DEPTH_DTYPES[self.depth]
        arr = np.ascontiguousarray(self.data)
        if arr.dtype != dtype:
            raise ValueError(
                f"{self.depth}-bit image requires dtype {np.dtype(dtype).name}, got {arr.dtype}"
            )
        if arr.ndim != 3 or arr.shape[2] != 3 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"encoded image must be HxWx3, got shape {arr.shape}")
        object.__setattr__(self, "data", _freeze(arr))

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def max_sample(self) -> int:
        return (1 << self.depth) - 1


@dataclass(frozen=True)
class IlluminanceMap:
    """H x W per-pixel brightness proxy in [0, 1] (normalized channel sum)."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.data, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"illuminance map must be HxW, got shape {arr.shape}")
        if not np.isfinite(arr).all() or arr.min() < 0.0 or arr.max() > 1.0:
            raise ValueError("illuminance values must be finite and in [0, 1]")
        object.__setattr__(self, "data", _freeze(arr))

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class WeightMap:
    """H x W per-pixel blend weight in [0, 1]."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.data, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"weight map must be HxW, got shape {arr.shape}")
        if not np.isfinite(arr).all() or arr.min() < 0.0 or arr.max() > 1.0:
            raise ValueError("weights must be finite and in [0, 1]")
        object.__setattr__(self, "data", _freeze(arr))

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]


def gamma_decode(img: EncodedImage, gamma: float = DEFAULT_GAMMA) -> LinearImage:
    """Map encoded samples to linear space via v -> (v / max)^gamma.

    Args:
        img: encoded image.
        gamma: display gamma, must be positive.

    Returns:
        Linear image with values in [0, 1].
    """
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    v = img.data.astype(np.float64) / img.max_sample
    return LinearImage(np.power(v, gamma))


def gamma_encode(img: LinearImage, gamma: float = DEFAULT_GAMMA, depth: int = 8) -> EncodedImage:
    """Map linear values to encoded samples via v -> round(v^(1/gamma) * max).

    Rounding is round-half-to-even; encode(decode(x)) is the identity for
    exactly representable samples.
    """
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if depth not in _DEPTH_DTYPES:
        raise ValueError(f"bit depth must be 8 or 16, got {depth}")
    peak = (1 << depth) - 1
    q = np.rint(np.power(img.data, 1.0 / gamma) * peak)
    return EncodedImage(q.astype(_DEPTH_DTYPES[depth]), depth=depth)


def illuminance(img: LinearImage | EncodedImage) -> IlluminanceMap:
    """Per-pixel channel sum normalized by the maximum possible sum.

    Invariant under any permutation of the R, G, B values of a pixel; float
    channels are summed in sorted order so the invariance is exact.
    """
    if isinstance(img, LinearImage):
        total = np.sort(img.data, axis=2).sum(axis=2) / 3.0
    elif isinstance(img, EncodedImage):
        total = img.data.sum(axis=2, dtype=np.float64) / (3.0 * img.max_sample)
    else:
        raise TypeError(f"expected LinearImage or EncodedImage, got {type(img).__name__}")
    # guard against 1-ulp overshoot from the division
    return IlluminanceMap(np.clip(total, 0.0, 1.0))


@dataclass(frozen=True)
class Histogram:
    """Uniform-bin intensity histogram over [0, 1] with summary statistics.

    Bins are half-open [e_i, e_{i+1}) except the last, which is closed, so
    boundary values land deterministically.
    """

    bins: int
    edges: np.ndarray
    counts: np.ndarray
    mean: float
    p10: float
    p50: float
    p90: float

    total: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "total", int(self.counts.sum()))


def histogram_of_values(values: np.ndarray, bins: int) -> Histogram:
    """Histogram of raw intensity values in [0, 1]."""
    if bins < 2:
        raise ValueError(f"bin count must be >= 2, got {bins}")
    flat = np.asarray(values, dtype=np.float64).ravel()
    counts, edges = np.histogram(flat, bins=bins, range=(0.0, 1.0))
    p10, p50, p90 = np.quantile(flat, [0.1, 0.5, 0.9])
    return Histogram(
        bins=bins,
        edges=_freeze(edges),
        counts=_freeze(counts),
        mean=float(flat.mean()),
        p10=float(p10),
        p50=float(p50),
        p90=float(p90),
    )


def histogram(img: LinearImage, bins: int) -> Histogram:
    """Histogram of the per-pixel illuminance of a linear image."""
    return histogram_of_values(illuminance(img).data, bins)
