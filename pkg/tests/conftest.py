import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


UNIT_SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
L_HEXAGON = np.array([[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]])


@st.composite
def star_polygons(draw, min_n=5, max_n=60):
    """Simple CCW polygons: sorted distinct angles with radii bounded away from 0."""
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    r = np.random.default_rng(seed)
    gaps = r.uniform(0.2, 1.0, n)
    t = np.cumsum(gaps) / gaps.sum() * 2 * math.pi
    radii = r.uniform(0.4, 1.0, n)
    scale = draw(st.floats(0.1, 10.0))
    shift = draw(st.tuples(st.floats(-5, 5), st.floats(-5, 5)))
    return np.column_stack([radii * np.cos(t), radii * np.sin(t)]) * scale + np.array(shift)
