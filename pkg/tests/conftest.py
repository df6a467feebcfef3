import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

from dirac_tube.geometry import build_frame, make_circle, make_ellipse  # noqa: E402

settings.register_profile("default", max_examples=25, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def circle1():
    return build_frame(make_circle(1.0), 512)


@pytest.fixture(scope="session")
def circle2():
    return build_frame(make_circle(2.0), 512)


@pytest.fixture(scope="session")
def ellipse21():
    return build_frame(make_ellipse(2.0, 1.0), 512)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
