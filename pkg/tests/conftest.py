import numpy as np
import pytest

from flarekit import LinearImage


@pytest.fixture
def rng():
    return np.random.default_rng(20240913)


def random_linear(rng, h=32, w=32, lo=0.0, hi=1.0):
    return LinearImage(rng.uniform(lo, hi, (h, w, 3)))


@pytest.fixture
def random_image(rng):
    return random_linear(rng)
