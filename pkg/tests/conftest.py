import sys
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from symmkit import polygon as pg
from symmkit.geom import LineSubspace

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)
angles = st.floats(min_value=0.0, max_value=math.pi, exclude_max=True, allow_nan=False)


@st.composite
def polygons(draw, min_n=3, max_n=24):
    rng = np.random.default_rng(draw(seeds))
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    return pg.random_polygon(rng, n=n, radius=draw(st.floats(0.1, 3.0)))


@st.composite
def lines(draw):
    return LineSubspace.from_angle(draw(angles))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def diamond():
    return pg.ConvexPolygon([[1, 0], [0, 1], [-1, 0], [0, -1]])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and getattr(mod, "RESULTS", None):
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
