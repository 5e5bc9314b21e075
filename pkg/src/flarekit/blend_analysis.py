"""Numerical comparison of exact tone-mapped addition vs convex blending.

When a known tone map T is available, the physically exact composite of two
layers given in display space is T(T^-1(a) + T^-1(b)) with the raw sum
clipped to the [0, 1] raw domain. Convex blending approximates this. The
functions here quantify that approximation:

* the bright regime, where one layer is near saturation and the other is a
  fraction eps1 of it in raw space, admits the closed-form convex weight

      eps2 = (eps1 / 3) / (1 + 3 eps1 + 3 eps1^2 + eps1 / 3)

  so exact ~ (1 - eps2) * bright + eps2 * dim; the dark regime is the same
  rational form in eps3 with the roles swapped;
* a sweep solves, per flare level, for the convex weight that would exactly
  reproduce the composite, exposing how the weight saturates toward the
  bright layer.

All computation is scalar double precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tonemap import ToneMapOp


@dataclass(frozen=True)
class BlendApproxReport:
    """Exact vs approximate composite at one operating point.

    ``approx``/``residual`` refer to the normalized convex form; the
    unnormalized counterparts keep the raw first-order expansion before
    division by its total weight. Bright-regime reports fill epsilon1/2,
    dark-regime reports fill epsilon3/4.
    """

    epsilon1: float | None
    epsilon2: float | None
    epsilon3: float | None
    epsilon4: float | None
    exact: float
    approx: float
    residual: float
    approx_unnormalized: float
    residual_unnormalized: float

    def __post_init__(self):
        for name in ("epsilon2", "epsilon4"):
            v = getattr(self, name)
            if v is not None and not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.residual < 0 or self.residual_unnormalized < 0:
            raise ValueError("residuals must be non-negative")


def composite_exact(raw_a: float, raw_b: float, tmo: ToneMapOp) -> float:
    """Tone-mapped sum of two raw-domain values, T(clip(a + b, 0, 1)).

    Clipping encodes saturation: overlapping highlights map to 1.
    """
    if not 0.0 <= raw_a <= 1.0 or not 0.0 <= raw_b <= 1.0:
        raise ValueError("raw values must lie in [0, 1]")
    return float(tmo.forward(min(raw_a + raw_b, 1.0)))


def epsilon2_of(eps1: float) -> float:
    """Convex weight of the dim layer in the bright regime.

    The first-order expansion assigns the bright layer weight
    1 + 3 eps1 + 3 eps1^2 and the dim layer eps1 / 3; dividing by their sum
    yields a proper convex combination whose dim-layer weight this returns.
    """
    if eps1 < 0:
        raise ValueError(f"eps1 must be >= 0, got {eps1}")
    third = eps1 / 3.0
    return third / (1.0 + 3.0 * eps1 + 3.0 * eps1 * eps1 + third)


def epsilon4_of(eps3: float) -> float:
    """Convex weight of the dim layer in the dark regime (same form)."""
    if eps3 < 0:
        raise ValueError(f"eps3 must be >= 0, got {eps3}")
    third = eps3 / 3.0
    return third / (1.0 + 3.0 * eps3 + 3.0 * eps3 * eps3 + third)


def bright_regime_residual(b_rgb: float, eps1: float, tmo: ToneMapOp) -> BlendApproxReport:
    """Residual of the convex approximation near a saturated layer.

    The bright layer has display value ``b_rgb``; the dim layer is eps1
    times the bright layer in raw space. The residual is the absolute gap
    between the exact tone-mapped sum and the convex-weighted combination,
    reported both before and after weight normalization.
    """
    if not 0.0 < b_rgb < 1.0:
        raise ValueError(f"b_rgb must lie in (0, 1), got {b_rgb}")
    if eps1 < 0:
        raise ValueError(f"eps1 must be >= 0, got {eps1}")
    raw_b = float(tmo.inverse(b_rgb))
    raw_s = eps1 * raw_b
    s_rgb = float(tmo.forward(min(raw_s, 1.0)))
    exact = composite_exact(raw_b, raw_s, tmo)
    eps2 = epsilon2_of(eps1)
    total = 1.0 + 3.0 * eps1 + 3.0 * eps1 * eps1 + eps1 / 3.0
    approx_unnorm = (1.0 + 3.0 * eps1 + 3.0 * eps1 * eps1) * b_rgb + (eps1 / 3.0) * s_rgb
    approx = approx_unnorm / total
    return BlendApproxReport(
        epsilon1=eps1,
        epsilon2=eps2,
        epsilon3=None,
        epsilon4=None,
        exact=exact,
        approx=approx,
        residual=abs(exact - approx),
        approx_unnormalized=approx_unnorm,
        residual_unnormalized=abs(exact - approx_unnorm),
    )


def dark_regime_residual(s_rgb: float, eps3: float, tmo: ToneMapOp) -> BlendApproxReport:
    """Residual of the convex approximation around a dim flare layer.

    Mirror of the bright regime: the scene has display value ``s_rgb`` and
    the dark flare layer is eps3 times the scene in raw space.
    """
    if not 0.0 < s_rgb < 1.0:
        raise ValueError(f"s_rgb must lie in (0, 1), got {s_rgb}")
    if eps3 < 0:
        raise ValueError(f"eps3 must be >= 0, got {eps3}")
    raw_s = float(tmo.inverse(s_rgb))
    raw_d = eps3 * raw_s
    d_rgb = float(tmo.forward(min(raw_d, 1.0)))
    exact = composite_exact(raw_s, raw_d, tmo)
    eps4 = epsilon4_of(eps3)
    total = 1.0 + 3.0 * eps3 + 3.0 * eps3 * eps3 + eps3 / 3.0
    approx_unnorm = (1.0 + 3.0 * eps3 + 3.0 * eps3 * eps3) * s_rgb + (eps3 / 3.0) * d_rgb
    approx = approx_unnorm / total
    return BlendApproxReport(
        epsilon1=None,
        epsilon2=None,
        epsilon3=eps3,
        epsilon4=eps4,
        exact=exact,
        approx=approx,
        residual=abs(exact - approx),
        approx_unnormalized=approx_unnorm,
        residual_unnormalized=abs(exact - approx_unnorm),
    )


@dataclass(frozen=True)
class SweepRow:
    flare_raw: float
    scene_weight: float
    flare_weight: float


def regime_weight_sweep(
    tmo: ToneMapOp, grid_step: float, scene_raw: float = 0.2
) -> list[SweepRow]:
    """Effective convex weights that reproduce the exact composite.

    For flare raw values from 1 down to 0 against a fixed dim scene, solve
    exact = (1 - w) * scene_rgb + w * flare_rgb for w and clamp to [0, 1].
    The additive composite is at least as bright as either layer, so the
    unclamped solution overshoots the hull; the clamped weight saturates at
    1 while the flare outshines the scene and at 0 once it falls below,
    which is precisely the hard switching a smooth sigmoid weight relaxes.
    """
    if not 0.0 < grid_step < 0.5:
        raise ValueError(f"grid step must lie in (0, 0.5), got {grid_step}")
    if not 0.0 < scene_raw < 1.0:
        raise ValueError(f"scene raw value must lie in (0, 1), got {scene_raw}")
    steps = int(round(1.0 / grid_step))
    grid = np.linspace(1.0, 0.0, steps + 1)
    s_rgb = float(tmo.forward(scene_raw))
    rows = []
    for flare_raw in grid:
        f_rgb = float(tmo.forward(float(flare_raw)))
        exact = composite_exact(float(flare_raw), scene_raw, tmo)
        denom = f_rgb - s_rgb
        if abs(denom) < 1e-15:
            w = 1.0 if exact >= s_rgb else 0.0
        else:
            w = (exact - s_rgb) / denom
        w = min(max(w, 0.0), 1.0)
        rows.append(SweepRow(flare_raw=float(flare_raw), scene_weight=1.0 - w, flare_weight=w))
    return rows
