"""Shared fixtures for the test suite."""
from __future__ import annotations

import numpy as np
import pytest

from bousslab import PhysicalField, make_grid


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def grid_1d():
    return make_grid(1, 2.0 * np.pi, 64)


def random_smooth_field(grid, rng, scale: float = 1.0) -> PhysicalField:
    """A random real field with a smooth (Gaussian-damped) spectrum."""
    noise = rng.standard_normal(grid.shape)
    coeffs = np.fft.fftn(noise) * np.exp(-grid.xi2 / 2.0)
    return PhysicalField(grid, scale * np.fft.ifftn(coeffs).real)
