import math
from itertools import combinations

import pytest
from hypothesis import HealthCheck, assume, settings
from hypothesis import strategies as st

from mcpp.generate import generate_instance, rng_for
from mcpp.geometry import DuplicatePoint, PointSet, cross, validate_general_position

settings.register_profile("ci", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
settings.load_profile("ci")

TRIANGLE = [(0, 0), (4, 0), (1, 3)]
SQUARE = [(0, 0), (10, 0), (10, 10), (0, 10)]
TRI_INTERIOR = [(0, 0), (10, 0), (5, 9), (5, 3)]


@pytest.fixture
def triangle():
    return PointSet.from_coords(TRIANGLE)


@pytest.fixture
def square():
    return PointSet.from_coords(SQUARE)


@pytest.fixture
def tri_interior():
    return PointSet.from_coords(TRI_INTERIOR)


def random_instances(count, n_lo, n_hi, seed=0, bound=1000):
    """Deterministic batch; n drawn from the seed stream itself."""
    sizes = rng_for(seed).integers(n_lo, n_hi, size=count, endpoint=True)
    return [generate_instance(seed * 100_003 + k, int(n), bound) for k, n in enumerate(sizes)]


@st.composite
def point_sets(draw, min_n=3, max_n=9, bound=60):
    pts = draw(st.lists(st.tuples(st.integers(0, bound), st.integers(0, bound)),
                        min_size=min_n, max_size=max_n, unique=True))
    try:
        ok = validate_general_position(pts) is None
    except DuplicatePoint:
        ok = False
    assume(ok)
    return PointSet.from_coords(pts)


def brute_polygons(ps):
    """Every empty convex polygon by subset scan (independent of the sweep)."""
    out = set()
    for r in range(3, ps.n + 1):
        for sub in combinations(range(ps.n), r):
            cx = sum(ps.points[i][0] for i in sub) / r
            cy = sum(ps.points[i][1] for i in sub) / r
            v = sorted(sub, key=lambda i: math.atan2(ps.points[i][1] - cy, ps.points[i][0] - cx))
            if not all(ps.orient(v[a - 1], v[a], v[(a + 1) % r]) > 0 for a in range(r)):
                continue
            inside = any(all(cross(ps.points[v[a]], ps.points[v[(a + 1) % r]], ps.points[q]) > 0
                             for a in range(r)) for q in range(ps.n) if q not in sub)
            if not inside:
                k = v.index(min(v))
                out.add(tuple(v[k:] + v[:k]))
    return out


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
