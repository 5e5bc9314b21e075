"""Flare-corrupted image synthesis.

Two compositing modes over linear-space scene S and flare F:

* convex:     I = (1 - W) * S + W * F + N(0, sigma^2), where W is a sigmoid
              of the flare illuminance, so bright flare pixels dominate and
              dark flare pixels leave the scene almost untouched;
* direct-add: I = S + F + N(0, sigma^2), the additive baseline.

Randomness is organized as a splittable seed tree so batch generation is
reproducible under any parallel schedule:

    pair_seed     = hash(master_seed, pair_index)      (SeedSequence spawn)
    param stream  = stream(pair_seed, 0)   p, sigma^2 draws
    noise stream  = stream(pair_seed, 1)   Gaussian noise
    select stream = stream(pair_seed, 2)   scene/flare file selection

Every operation here is a pure function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict

import cv2
import numpy as np

from .color import (
    EncodedImage,
    IlluminanceMap,
    LinearImage,
    WeightMap,
    gamma_decode,
    gamma_encode,
    illuminance,
    DEFAULT_GAMMA,
)

MODE_CONVEX = "convex"
MODE_DIRECT_ADD = "direct-add"
MODES = (MODE_CONVEX, MODE_DIRECT_ADD)

PARAM_STREAM = 0
NOISE_STREAM = 1
SELECT_STREAM = 2


def derive_pair_seed(master_seed: int, pair_index: int) -> int:
    """Splittable hash of (master seed, pair index) -> per-pair root seed."""
    seq = np.random.SeedSequence(master_seed, spawn_key=(pair_index,))
    return int(seq.generate_state(1, np.uint64)[0])


def stream_rng(seed: int, stream: int) -> np.random.Generator:
    """Independent generator for one sub-stream of a per-pair seed."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream,)))


@dataclass(frozen=True)
class SamplingPolicy:
    """Defaults governing how per-pair parameters are drawn."""

    p_min: float = 4.0
    p_max: float = 7.0
    q: float = 0.5
    noise_scale: float = 0.01
    chi_df: int = 1
    gamma: float = DEFAULT_GAMMA
    mode: str = MODE_CONVEX

    def __post_init__(self):
        if not self.p_min <= self.p_max:
            raise ValueError("p_min must not exceed p_max")
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"q must lie in (0, 1), got {self.q}")
        if self.noise_scale < 0:
            raise ValueError("noise scale must be >= 0")
        if self.chi_df < 1:
            raise ValueError("chi-square degrees of freedom must be >= 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")


DEFAULT_POLICY = SamplingPolicy()


@dataclass(frozen=True)
class SynthesisParams:
    """Resolved scalars for one synthesized pair.

    ``master_seed`` is the root seed of this image's noise stream; when the
    params come from :func:`sample_params` it is the per-pair seed derived
    from (dataset master seed, pair index).
    """

    mode: str = MODE_CONVEX
    p: float = 5.0
    q: float = 0.5
    noise_variance: float = 0.0
    gamma: float = DEFAULT_GAMMA
    master_seed: int = 0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.p > 0:
            raise ValueError(f"sigmoid steepness p must be positive, got {self.p}")
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"sigmoid midpoint q must lie in (0, 1), got {self.q}")
        if self.noise_variance < 0:
            raise ValueError("noise variance must be >= 0")
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")


@dataclass(frozen=True)
class PairRecord:
    """One manifest line of a batch run (JSON-lines serializable)."""

    scene: str
    flare: str
    composite: str
    scene_gt: str
    flare_gt: str
    mode: str
    p: float
    q: float
    sigma2: float
    gamma: float
    seed: int
    pair_index: int

    def to_dict(self) -> dict:
        return asdict(self)


def sample_params(
    master_seed: int, pair_index: int, policy: SamplingPolicy = DEFAULT_POLICY
) -> SynthesisParams:
    """Draw the per-pair parameters.

    p ~ U[p_min, p_max]; sigma^2 = noise_scale * chi-square(chi_df) draw;
    q is fixed by the policy. Deterministic in (master_seed, pair_index).
    """
    pair_seed = derive_pair_seed(master_seed, pair_index)
    rng = stream_rng(pair_seed, PARAM_STREAM)
    p = float(rng.uniform(policy.p_min, policy.p_max))
    sigma2 = float(policy.noise_scale * rng.chisquare(policy.chi_df))
    return SynthesisParams(
        mode=policy.mode,
        p=p,
        q=policy.q,
        noise_variance=sigma2,
        gamma=policy.gamma,
        master_seed=pair_seed,
    )


def weight_map(illum: IlluminanceMap, p: float, q: float = 0.5) -> WeightMap:
    """Sigmoid blend weight W(x) = 1 / (1 + exp(-p (x - q))).

    Increasing in illuminance: bright flare pixels get weight near 1, dark
    ones near 0. Output is strictly inside (0, 1).
    """
    if not p > 0:
        raise ValueError(f"sigmoid steepness p must be positive, got {p}")
    if not 0.0 < q < 1.0:
        raise ValueError(f"sigmoid midpoint q must lie in (0, 1), got {q}")
    return WeightMap(1.0 / (1.0 + np.exp(-p * (illum.data - q))))


def _noise_rng(noise_seed) -> np.random.Generator:
    if isinstance(noise_seed, np.random.Generator):
        return noise_seed
    return np.random.default_rng(noise_seed)


def blend_convex(
    scene: LinearImage,
    flare: LinearImage,
    w: WeightMap,
    noise_variance: float = 0.0,
    noise_seed=0,
) -> LinearImage:
    """Per-pixel convex combination (1 - w) * scene + w * flare, plus noise.

    Noise is i.i.d. Gaussian per element, added in linear space; the result
    is clipped to [0, 1] once, after noise.
    """
    if scene.data.shape != flare.data.shape:
        raise ValueError(f"scene {scene.data.shape} and flare {flare.data.shape} shapes differ")
    if w.data.shape != scene.data.shape[:2]:
        raise ValueError(f"weight map {w.data.shape} does not match image {scene.data.shape[:2]}")
    if noise_variance < 0:
        raise ValueError("noise variance must be >= 0")
    wc = w.data[:, :, None]
    out = (1.0 - wc) * scene.data + wc * flare.data
    if noise_variance > 0:
        rng = _noise_rng(noise_seed)
        out = out + rng.normal(0.0, np.sqrt(noise_variance), out.shape)
    return LinearImage(np.clip(out, 0.0, 1.0))


def blend_direct_add(
    scene: LinearImage,
    flare: LinearImage,
    noise_variance: float = 0.0,
    noise_seed=0,
) -> LinearImage:
    """Additive baseline scene + flare + noise, clipped to [0, 1]."""
    if scene.data.shape != flare.data.shape:
        raise ValueError(f"scene {scene.data.shape} and flare {flare.data.shape} shapes differ")
    if noise_variance < 0:
        raise ValueError("noise variance must be >= 0")
    out = scene.data + flare.data
    if noise_variance > 0:
        rng = _noise_rng(noise_seed)
        out = out + rng.normal(0.0, np.sqrt(noise_variance), out.shape)
    return LinearImage(np.clip(out, 0.0, 1.0))


def synthesize_pair(
    scene_encoded: EncodedImage,
    flare_encoded: EncodedImage,
    params: SynthesisParams,
    out_depth: int = 16,
) -> tuple[EncodedImage, EncodedImage, EncodedImage]:
    """Full pipeline: decode, weight, blend, re-encode.

    Returns (composite, scene ground truth, flare ground truth), all encoded
    at ``out_depth``. The ground truths are the decoded inputs re-encoded
    unmodified.
    """
    if (scene_encoded.height, scene_encoded.width) != (flare_encoded.height, flare_encoded.width):
        raise ValueError(
            f"scene {scene_encoded.height}x{scene_encoded.width} and flare "
            f"{flare_encoded.height}x{flare_encoded.width} sizes differ; place the flare first"
        )
    scene = gamma_decode(scene_encoded, params.gamma)
    flare = gamma_decode(flare_encoded, params.gamma)
    noise_rng = stream_rng(params.master_seed, NOISE_STREAM)
    if params.mode == MODE_CONVEX:
        w = weight_map(illuminance(flare), params.p, params.q)
        composite = blend_convex(scene, flare, w, params.noise_variance, noise_rng)
    else:
        composite = blend_direct_add(scene, flare, params.noise_variance, noise_rng)
    return (
        gamma_encode(composite, params.gamma, out_depth),
        gamma_encode(scene, params.gamma, out_depth),
        gamma_encode(flare, params.gamma, out_depth),
    )


def place_flare(
    flare: LinearImage,
    canvas_w: int,
    canvas_h: int,
    offset_x: int = 0,
    offset_y: int = 0,
    scale: float = 1.0,
    rotation_deg: float = 0.0,
) -> LinearImage:
    """Resample a flare onto a black canvas of the target size.

    Scaling and rotation are bilinear; regions outside the source (or the
    canvas) stay zero. Offsets are the top-left corner of the placed flare
    in canvas coordinates.
    """
    if canvas_w < 1 or canvas_h < 1:
        raise ValueError("canvas dimensions must be positive")
    if not scale > 0:
        raise ValueError(f"scale must be positive, got {scale}")
    arr = flare.data
    if scale != 1.0:
        new_w = max(1, int(round(arr.shape[1] * scale)))
        new_h = max(1, int(round(arr.shape[0] * scale)))
        arr = cv2.resize(arr, (new_w, new_h), interpolation=cv2.INTER_LINEAR)
    if rotation_deg % 360.0 != 0.0:
        h, w = arr.shape[:2]
        center = ((w - 1) / 2.0, (h - 1) / 2.0)
        mat = cv2.getRotationMatrix2D(center, rotation_deg, 1.0)
        # expand to the rotated bounding box so nothing is cut off
        cos, sin = abs(mat[0, 0]), abs(mat[0, 1])
        bw = int(np.ceil(h * sin + w * cos))
        bh = int(np.ceil(h * cos + w * sin))
        mat[0, 2] += (bw - 1) / 2.0 - center[0]
        mat[1, 2] += (bh - 1) / 2.0 - center[1]
        arr = cv2.warpAffine(
            arr, mat, (bw, bh), flags=cv2.INTER_LINEAR,
            borderMode=cv2.BORDER_CONSTANT, borderValue=0.0,
        )
    canvas = np.zeros((canvas_h, canvas_w, 3), dtype=np.float64)
    src_h, src_w = arr.shape[:2]
    x0, y0 = max(0, offset_x), max(0, offset_y)
    x1, y1 = min(canvas_w, offset_x + src_w), min(canvas_h, offset_y + src_h)
    if x0 < x1 and y0 < y1:
        canvas[y0:y1, x0:x1] = arr[y0 - offset_y : y1 - offset_y, x0 - offset_x : x1 - offset_x]
    return LinearImage(np.clip(canvas, 0.0, 1.0))
