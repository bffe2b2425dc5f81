import numpy as np
import pytest

from exwave import radiation as rad


def random_smooth_profile(rng, lo=-1.5, hi=1.5):
    """Random C^2 compactly supported profile on [lo, hi] (fast moment engine)."""
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    coefs = rng.uniform(-1.0, 1.0, size=3)

    def fn(s):
        s = np.asarray(s, dtype=float)
        x = (s - mid) / half
        poly = coefs[0] + coefs[1] * x + coefs[2] * x * x
        return np.where(np.abs(x) < 1.0, (1.0 - x * x) ** 3 * poly, 0.0)

    return rad.RadiationProfile.from_function(fn, support=(lo, hi), smooth=True)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
