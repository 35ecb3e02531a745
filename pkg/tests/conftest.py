import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from bdtree.geom import Point, pt
from bdtree.polygon import Polygon

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

L_VERTS = [pt(0, 0), pt(2, 0), pt(2, 1), pt(1, 1), pt(1, 2), pt(0, 2)]
SQUARE_VERTS = [pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]


@pytest.fixture
def L():
    return Polygon(tuple(L_VERTS))


@pytest.fixture
def square():
    return Polygon(tuple(SQUARE_VERTS))


def frac_point(p: Point) -> tuple[Fraction, Fraction]:
    """Independent representation used by the oracles."""
    return Fraction(str(p[0])), Fraction(str(p[1]))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "LINES", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.LINES:
        terminalreporter.write_line(line)
