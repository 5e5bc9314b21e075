"""In-memory array bindings for the flarekit pipeline.

Exposes the two operations ML data loaders need, on plain numpy buffers, so
training pairs can be composited without any file round-trip:

* :func:`synth`   - flare compositing (convex or direct-add mode)
* :func:`recover` - light source recovery after a deflaring operator

Buffers are H x W x 3, C-contiguous, float32 or float64, values in [0, 1].
They are validated and copied at the boundary: no call mutates its inputs,
and outputs are freshly owned writable arrays. For the same seed the results
are bitwise identical to the core pipeline operating on the same values.

Versioned in lockstep with the core package.
"""

from __future__ import annotations

import numpy as np

from flarekit import (
    LinearImage,
    blend_convex,
    blend_direct_add,
    illuminance,
    weight_map,
)
from flarekit import recover as _core_recover
from flarekit.synthesis import MODE_CONVEX, MODE_DIRECT_ADD, MODES

__version__ = "0.1.0"

__all__ = ["synth", "recover", "MODE_CONVEX", "MODE_DIRECT_ADD", "__version__"]

_FLOAT_DTYPES = (np.dtype(np.float32), np.dtype(np.float64))


def _checked_view(buf: np.ndarray, name: str) -> np.ndarray:
    """Validate a boundary buffer and return a float64 copy the core may own."""
    if not isinstance(buf, np.ndarray):
        raise TypeError(f"{name} must be a numpy array, got {type(buf).__name__}")
    if buf.ndim != 3 or buf.shape[2] != 3 or buf.shape[0] < 1 or buf.shape[1] < 1:
        raise ValueError(f"{name} must have shape (H, W, 3), got {buf.shape}")
    if buf.dtype not in _FLOAT_DTYPES:
        raise ValueError(f"{name} must be float32 or float64, got {buf.dtype}")
    if not buf.flags.c_contiguous:
        raise ValueError(f"{name} must be C-contiguous (row-major)")
    if not np.isfinite(buf).all():
        raise ValueError(f"{name} contains non-finite values")
    if float(buf.min()) < 0.0 or float(buf.max()) > 1.0:
        raise ValueError(f"{name} values must lie in [0, 1]")
    return buf.astype(np.float64, copy=True)


def _copy_out(img: LinearImage) -> np.ndarray:
    return np.array(img.data, dtype=np.float64, copy=True)


def synth(
    scene: np.ndarray,
    flare: np.ndarray,
    p: float,
    q: float,
    sigma2: float,
    seed: int,
    mode: str = MODE_CONVEX,
) -> np.ndarray:
    """Composite a flare onto a scene, both given in linear space.

    In convex mode the blend weight is the sigmoid (steepness ``p``,
    midpoint ``q``) of the flare illuminance; in direct-add mode the layers
    are summed. ``sigma2`` is the Gaussian noise variance and ``seed`` feeds
    its generator.

    Returns a new H x W x 3 float64 array; inputs are never modified.
    """
    scene_arr = _checked_view(scene, "scene")
    flare_arr = _checked_view(flare, "flare")
    if scene_arr.shape != flare_arr.shape:
        raise ValueError(f"scene {scene_arr.shape} and flare {flare_arr.shape} shapes differ")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    scene_img = LinearImage(scene_arr)
    flare_img = LinearImage(flare_arr)
    if mode == MODE_CONVEX:
        w = weight_map(illuminance(flare_img), p, q)
        out = blend_convex(scene_img, flare_img, w, sigma2, seed)
    else:
        out = blend_direct_add(scene_img, flare_img, sigma2, seed)
    return _copy_out(out)


def recover(input_img: np.ndarray, deflared: np.ndarray, alpha: float = 15.0) -> np.ndarray:
    """Blend a deflared result back toward its input at light sources.

    Returns a new H x W x 3 float64 array; inputs are never modified.
    """
    input_arr = _checked_view(input_img, "input")
    deflared_arr = _checked_view(deflared, "deflared")
    if input_arr.shape != deflared_arr.shape:
        raise ValueError(
            f"input {input_arr.shape} and deflared {deflared_arr.shape} shapes differ"
        )
    out = _core_recover(LinearImage(input_arr), LinearImage(deflared_arr), alpha)
    return _copy_out(out)
