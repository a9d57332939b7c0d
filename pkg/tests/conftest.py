import numpy as np
import pytest

from latticedyn import QuasiPeriodicForcing


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def make_random_forcing():
    """Finite forcing with distinct per-site amplitude/frequency/phase."""

    def _make(rng, support=5, scale=1.0):
        width = 2 * support + 1
        return QuasiPeriodicForcing.finite(
            scale * rng.uniform(-1.0, 1.0, width),
            rng.uniform(0.2, 3.0, width),
            rng.uniform(0.0, 2.0 * np.pi, width),
        )

    return _make
