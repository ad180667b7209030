import os
import sys

import numpy as np
import pytest
from hypothesis import settings, strategies as st

settings.register_profile("default", max_examples=200, deadline=None)
settings.register_profile("thorough", max_examples=2000, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

real = st.floats(-10, 10, allow_nan=False)
small = st.floats(-3, 3, allow_nan=False)
cpx = st.builds(complex, real, real)
small_cpx = st.builds(complex, small, small)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    RESULTS = getattr(mod, "RESULTS", None)
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, title, detail = RESULTS[n]
        terminalreporter.write_line(f"ACCEPTANCE [{'PASS' if ok else 'FAIL'}] {n:>2}. {title}: {detail}")
