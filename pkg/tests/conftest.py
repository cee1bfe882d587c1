import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from tautline import PiecewiseConstantSignal, generate

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def step_signals(draw, max_cells=40):
    """Random step functions on a random strictly increasing grid of [0, 1]."""
    n = draw(st.integers(1, max_cells))
    raw = draw(st.lists(st.floats(0.05, 1.0), min_size=n, max_size=n))
    w = np.asarray(raw) / np.sum(raw)
    edges = np.concatenate(([0.0], np.cumsum(w)))
    edges[-1] = 1.0
    if np.any(np.diff(edges) <= 0):
        edges = np.linspace(0.0, 1.0, n + 1)
    vals = draw(st.lists(st.floats(-2.0, 2.0, allow_nan=False), min_size=n, max_size=n))
    return PiecewiseConstantSignal(edges, vals)


@pytest.fixture(scope="session")
def step():
    return generate("step")


@pytest.fixture(scope="session")
def fig1():
    return generate("fig1_sine", n=1000)
