import math

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from freemass.gaussian_states import GaussianState, normalize

settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")


@st.composite
def gaussian_states(draw, max_width=2.0):
    """Normalized Gaussians with moderate width, correlation and displacement."""
    var = draw(st.floats(0.05, max_width))
    twist = draw(st.floats(-3.0, 3.0))
    q0 = draw(st.floats(-1.0, 1.0))
    k0 = draw(st.floats(-1.0, 1.0))
    phase = draw(st.floats(-math.pi, math.pi))
    A = (1 + 1j * twist) / (4 * var)
    return normalize(GaussianState(A, q0, k0, 1j * phase))


def expm_oracle(M, terms=24):
    """Scaling and squaring with a truncated Taylor series."""
    M = np.asarray(M, dtype=complex)
    squarings = max(0, int(np.ceil(np.log2(max(np.abs(M).sum(axis=1).max(), 1e-300))))) + 2
    M = M / 2**squarings
    out = np.eye(len(M), dtype=complex)
    term = np.eye(len(M), dtype=complex)
    for n in range(1, terms):
        term = term @ M / n
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)
