"""Flarekit: flare-corrupted image synthesis, light source recovery, and evaluation."""

from .color import (
    DEFAULT_GAMMA,
    EncodedImage,
    Histogram,
    IlluminanceMap,
    LinearImage,
    WeightMap,
    gamma_decode,
    gamma_encode,
    histogram,
    histogram_of_values,
    illuminance,
)
from .tonemap import Logistic, SmoothStep, ToneMapOp
from .fileio import ImageReadError, read_pfm, read_png, write_pfm, write_png
from .synthesis import (
    DEFAULT_POLICY,
    MODE_CONVEX,
    MODE_DIRECT_ADD,
    PairRecord,
    SamplingPolicy,
    SynthesisParams,
    blend_convex,
    blend_direct_add,
    derive_pair_seed,
    place_flare,
    sample_params,
    synthesize_pair,
    weight_map,
)
from .blend_analysis import (
    BlendApproxReport,
    bright_regime_residual,
    composite_exact,
    dark_regime_residual,
    epsilon2_of,
    epsilon4_of,
    regime_weight_sweep,
)
from .recovery import (
    DEFAULT_ALPHA,
    AlphaSweepResult,
    DeflareOperator,
    ExternalImageOperator,
    GaussianBlurOperator,
    IdentityOperator,
    RecoveryParams,
    UniformDarken,
    alpha_sweep,
    recover,
    recovery_weights,
)
from .metrics import ShiftReport, psnr, shift_report, ssim

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_ALPHA",
    "DEFAULT_GAMMA",
    "DEFAULT_POLICY",
    "MODE_CONVEX",
    "MODE_DIRECT_ADD",
    "AlphaSweepResult",
    "BlendApproxReport",
    "DeflareOperator",
    "EncodedImage",
    "ExternalImageOperator",
    "GaussianBlurOperator",
    "Histogram",
    "IdentityOperator",
    "IlluminanceMap",
    "ImageReadError",
    "LinearImage",
    "Logistic",
    "PairRecord",
    "RecoveryParams",
    "SamplingPolicy",
    "ShiftReport",
    "SmoothStep",
    "SynthesisParams",
    "ToneMapOp",
    "WeightMap",
    "alpha_sweep",
    "blend_convex",
    "blend_direct_add",
    "bright_regime_residual",
    "composite_exact",
    "dark_regime_residual",
    "derive_pair_seed",
    "epsilon2_of",
    "epsilon4_of",
    "gamma_decode",
    "gamma_encode",
    "histogram",
    "histogram_of_values",
    "illuminance",
    "place_flare",
    "psnr",
    "read_pfm",
    "read_png",
    "recover",
    "recovery_weights",
    "regime_weight_sweep",
    "sample_params",
    "shift_report",
    "ssim",
    "synthesize_pair",
    "weight_map",
    "write_pfm",
    "write_png",
]
