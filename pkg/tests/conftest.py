import math

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from qcloning import machine as mach

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

BELL = np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2.0)


@st.composite
def feasible_points(draw, s_min=0.0, gamma_one=False):
    """(b, gamma, s, branch) with gamma >= (1-s)/2 and |B| inside the feasible range."""
    s = draw(st.floats(s_min, 1.0))
    # gamma bounded away from 0, where the clone is undefined
    gamma = 1.0 if gamma_one else draw(st.floats(max((1.0 - s) / 2.0, 1e-3), 1.0))
    b_max = mach.feasible_b_range(gamma, s).b_max
    u = draw(st.floats(-1.0, 1.0))
    branch = draw(st.sampled_from(mach.BRANCHES))
    return u * b_max, gamma, s, branch


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_points(rng, n, s_min=0.0):
    out = []
    for i in range(n):
        s = float(rng.uniform(s_min, 1.0))
        gamma = float(rng.uniform((1.0 - s) / 2.0, 1.0))
        b_max = mach.feasible_b_range(gamma, s).b_max
        out.append((float(rng.uniform(-b_max, b_max)), gamma, s, mach.BRANCHES[i % 4]))
    return out


ACCEPTANCE: dict[int, tuple[str, bool]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        desc, ok = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {desc}")
