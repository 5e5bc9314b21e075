"""Tone mapping operators: monotone bijections of [0, 1] with exact inverses.

Two curve families are provided:

* SmoothStep: T(x) = 3x^2 - 2x^3. Its inverse has a closed trigonometric
  form. Substituting u = 1 - 2x turns T(x) = y into the depressed cubic
  (3u - u^3) / 2 = 1 - 2y, solved by u = 2 sin(arcsin(1 - 2y) / 3), i.e.

      T^-1(y) = 1/2 - sin(arcsin(1 - 2y) / 3).

* Logistic(k, m): a sigmoid of steepness k and midpoint m, rescaled so the
  endpoints map to exactly 0 and 1 (a raw sigmoid does not reach them):

      T(x) = (s(k(x - m)) - s(-km)) / (s(k(1 - m)) - s(-km)),
      s(t) = 1 / (1 + exp(-t)).

Both operators accept scalars or numpy arrays and raise ValueError outside
the [0, 1] domain; callers are expected to clip first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _checked_unit(v, name: str) -> np.ndarray:
    arr = np.asarray(v, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError(f"{name} must lie in [0, 1]")
    return arr


def _like_input(result: np.ndarray, original) -> np.ndarray | float:
    if np.ndim(original) == 0:
        return float(result)
    return result


class ToneMapOp:
    """A strictly increasing map of [0, 1] onto [0, 1] with an inverse."""

    def forward(self, x):
        raise NotImplementedError

    def inverse(self, y):
        raise NotImplementedError


@dataclass(frozen=True)
class SmoothStep(ToneMapOp):
    """Cubic smooth-step curve T(x) = 3x^2 - 2x^3."""

    def forward(self, x):
        arr = _checked_unit(x, "x")
        return _like_input(arr * arr * (3.0 - 2.0 * arr), x)

    def inverse(self, y):
        arr = _checked_unit(y, "y")
        root = 0.5 - np.sin(np.arcsin(1.0 - 2.0 * arr) / 3.0)
        return _like_input(np.clip(root, 0.0, 1.0), y)


@dataclass(frozen=True)
class Logistic(ToneMapOp):
    """Endpoint-rescaled sigmoid with steepness k and midpoint m."""

    k: float = 8.0
    m: float = 0.5

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError(f"steepness must be positive, got {self.k}")
        if not 0.0 < self.m < 1.0:
            raise ValueError(f"midpoint must lie in (0, 1), got {self.m}")

    def _bounds(self) -> tuple[float, float]:
        lo = 1.0 / (1.0 + np.exp(self.k * self.m))
        hi = 1.0 / (1.0 + np.exp(-self.k * (1.0 - self.m)))
        return lo, hi

    def forward(self, x):
        arr = _checked_unit(x, "x")
        lo, hi = self._bounds()
        s = 1.0 / (1.0 + np.exp(-self.k * (arr - self.m)))
        return _like_input((s - lo) / (hi - lo), x)

    def inverse(self, y):
        arr = _checked_unit(y, "y")
        lo, hi = self._bounds()
        s = arr * (hi - lo) + lo
        x = self.m + np.log(s / (1.0 - s)) / self.k
        return _like_input(np.clip(x, 0.0, 1.0), y)
