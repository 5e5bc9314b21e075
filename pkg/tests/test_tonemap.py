import numpy as np
import pytest

from flarekit import Logistic, SmoothStep


def bisect_inverse(fn, y, iters=200):
    """Independent root finder for fn(x) = y on [0, 1] (fn increasing)."""
    lo, hi = 0.0, 1.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if fn(mid) < y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class TestSmoothStep:
    op = SmoothStep()

    def test_forward_examples(self):
        assert self.op.forward(0.5) == pytest.approx(0.5, abs=1e-15)
        # direct evaluation: 3 * 0.25^2 - 2 * 0.25^3
        assert self.op.forward(0.25) == pytest.approx(3 * 0.0625 - 2 * 0.015625, abs=1e-15)
        assert self.op.forward(0.25) == 0.15625
        assert self.op.forward(1.0) == 1.0
        assert self.op.forward(0.0) == 0.0

    def test_inverse_examples(self):
        assert self.op.inverse(0.5) == pytest.approx(0.5, abs=1e-12)
        oracle = bisect_inverse(self.op.forward, 0.15625)
        assert oracle == pytest.approx(0.25, abs=1e-12)
        assert self.op.inverse(0.15625) == pytest.approx(oracle, abs=1e-9)
        assert self.op.inverse(0.0) == pytest.approx(0.0, abs=1e-12)
        assert self.op.inverse(1.0) == pytest.approx(1.0, abs=1e-12)

    def test_inverse_matches_bisection(self, rng):
        for y in rng.uniform(0.0, 1.0, 50):
            assert self.op.inverse(float(y)) == pytest.approx(
                bisect_inverse(self.op.forward, float(y)), abs=1e-9
            )

    def test_roundtrip_grid(self):
        xs = np.arange(0.0, 1.0 + 1e-9, 1e-3)
        back = self.op.inverse(self.op.forward(xs))
        assert np.max(np.abs(back - xs)) <= 1e-9

    def test_vectorized(self):
        xs = np.linspace(0, 1, 17).reshape(17, 1)
        out = self.op.forward(xs)
        assert out.shape == xs.shape
        assert isinstance(self.op.forward(0.3), float)


class TestLogistic:
    op = Logistic(k=6.0, m=0.4)

    def test_endpoints_exact(self):
        assert self.op.forward(0.0) == 0.0
        assert self.op.forward(1.0) == 1.0

    def test_roundtrip_grid(self):
        xs = np.arange(0.0, 1.0 + 1e-9, 1e-3)
        back = self.op.inverse(self.op.forward(xs))
        assert np.max(np.abs(back - xs)) <= 1e-9

    def test_inverse_matches_bisection(self, rng):
        for y in rng.uniform(0.0, 1.0, 20):
            assert self.op.inverse(float(y)) == pytest.approx(
                bisect_inverse(self.op.forward, float(y)), abs=1e-9
            )

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            Logistic(k=0.0)
        with pytest.raises(ValueError):
            Logistic(k=5.0, m=0.0)
        with pytest.raises(ValueError):
            Logistic(k=5.0, m=1.0)


@pytest.mark.parametrize("op", [SmoothStep(), Logistic(k=8.0, m=0.5), Logistic(k=3.0, m=0.7)])
def test_monotone_on_random_pairs(op, rng):
    a = rng.uniform(0, 1, 500)
    b = rng.uniform(0, 1, 500)
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    keep = hi - lo > 1e-9
    assert np.all(op.forward(hi[keep]) > op.forward(lo[keep]))


@pytest.mark.parametrize("op", [SmoothStep(), Logistic()])
@pytest.mark.parametrize("bad", [-0.1, 1.1, np.nan])
def test_domain_errors(op, bad):
    with pytest.raises(ValueError):
        op.forward(bad)
    with pytest.raises(ValueError):
        op.inverse(bad)
