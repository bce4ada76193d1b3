import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from hopflap.su2 import GroupElement

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def group_elements(draw):
    """Points of S^3 from nonzero Gaussian-ish 4-vectors."""
    x = draw(st.lists(st.floats(-1, 1, allow_nan=False), min_size=4, max_size=4)
             .filter(lambda v: sum(c * c for c in v) > 1e-3))
    return GroupElement.from_coords(np.array(x))


@st.composite
def rep_indices(draw, max_l2=8):
    from hopflap.wigner import RepIndex
    l2 = draw(st.integers(0, max_l2))
    m2 = draw(st.sampled_from(range(-l2, l2 + 1, 2)))
    n2 = draw(st.sampled_from(range(-l2, l2 + 1, 2)))
    return RepIndex(l2, m2, n2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_report():
    """Record one pass/fail line per acceptance criterion; echoed in the terminal summary."""
    def report(number: int, passed: bool, detail: str, seconds: float):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:2d}: {detail} ({seconds:.2f} s)"
        print(line)
        _ACCEPTANCE_LINES.append(line)
        return passed
    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
