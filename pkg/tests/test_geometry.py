import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mcpp.geometry import (
    DuplicatePoint,
    GeneralPositionViolation,
    Orientation,
    PointSet,
    ccw_order,
    convex_hull,
    crossing_matrix,
    crossing_pairs,
    orientation,
    segments_cross,
    twice_area,
    validate_general_position,
)

from .conftest import point_sets

coord = st.integers(-(1 << 40), 1 << 40)
pt = st.tuples(coord, coord)


@pytest.mark.parametrize("pts, want", [
    (((0, 0), (1, 0), (1, 1)), Orientation.POSITIVE),
    (((0, 0), (1, 0), (2, 0)), Orientation.ZERO),
    (((0, 0), (1, 1), (2, 0)), Orientation.NEGATIVE),
])
def test_orientation_examples(pts, want):
    assert orientation(*pts) is want


@given(pt, pt, pt)
def test_orientation_antisymmetric(a, b, c):
    assert orientation(a, b, c) == -orientation(b, a, c)
    assert orientation(a, b, c) == orientation(b, c, a) == orientation(c, a, b)


@given(pt, pt, pt)
def test_orientation_matches_rational_determinant(a, b, c):
    det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    assert int(orientation(a, b, c)) == (det > 0) - (det < 0)


def test_general_position_examples():
    assert validate_general_position([(0, 0), (2, 0), (1, 3)]) is None
    assert validate_general_position([(0, 0), (1, 0), (2, 0), (0, 5)]) == (0, 1, 2)
    with pytest.raises(DuplicatePoint):
        validate_general_position([(0, 0), (0, 0), (1, 3)])
    with pytest.raises(GeneralPositionViolation) as exc:
        PointSet.from_coords([(0, 0), (1, 0), (2, 0), (0, 5)])
    assert exc.value.triple == (0, 1, 2)


@given(st.lists(st.tuples(st.integers(0, 12), st.integers(0, 12)), min_size=3, max_size=9, unique=True))
def test_general_position_matches_cubic_scan(pts):
    slow = next((t for t in itertools.combinations(range(len(pts)), 3)
                 if orientation(*(pts[i] for i in t)) == 0), None)
    assert validate_general_position(pts) == slow


def test_hull_examples(square, tri_interior, triangle):
    assert convex_hull(square) == [0, 1, 2, 3]
    assert list(tri_interior.hull) == [0, 1, 2]
    assert sorted(triangle.hull) == [0, 1, 2]


@given(point_sets())
def test_hull_is_ccw_and_contains_everything(ps):
    h = ps.hull
    assert h[0] == min(range(ps.n), key=lambda i: ps.points[i])
    for a in range(len(h)):
        u, v = h[a], h[(a + 1) % len(h)]
        assert all(ps.orient(u, v, w) > 0 for w in range(ps.n) if w not in (u, v))


def test_ccw_order_example():
    ps = PointSet(((0, 0), (-1, 1), (-1, -1), (1, -1), (1, 1)), _checked=False)
    plus, minus = ccw_order(0, (0, 100), ps)
    assert [ps.points[j] for j in plus] == [(-1, 1), (-1, -1)]
    assert [ps.points[j] for j in minus] == [(1, -1), (1, 1)]


def test_ccw_order_triangle(triangle):
    for i in range(3):
        plus, minus = ccw_order(i, (triangle.points[i][0], 100), triangle)
        assert len(plus) + len(minus) == 2


@given(point_sets(max_n=8))
def test_ccw_order_is_sorted_by_angle(ps):
    import math
    for i in range(ps.n):
        p = ps.points[i]
        plus, minus = ccw_order(i, (p[0], ps.y_max + 1), ps)
        seq = plus + minus
        ang = [(math.atan2(ps.points[j][1] - p[1], ps.points[j][0] - p[0]) - math.pi / 2) % (2 * math.pi)
               for j in seq]
        assert ang == sorted(ang)


def test_segments_cross_examples(square):
    assert segments_cross((0, 2), (1, 3), square)
    assert not segments_cross((0, 1), (1, 2), square)
    assert not segments_cross((0, 1), (2, 3), square)


def test_crossing_pairs_examples(square, triangle, tri_interior):
    assert crossing_pairs(square) == {((0, 2), (1, 3))}
    assert crossing_pairs(triangle) == set()
    assert crossing_pairs(tri_interior) == set()


@given(point_sets())
def test_crossing_matrix_symmetric_and_matches_predicate(ps):
    X = crossing_matrix(ps)
    assert (X == X.T).all() and not X.diagonal().any()
    for s, t in itertools.combinations(range(len(ps.edges)), 2):
        assert X[s, t] == segments_cross(ps.edges[s], ps.edges[t], ps)


def test_large_coordinates_stay_exact():
    big = 1 << 40
    ps = PointSet.from_coords([(0, 0), (big, 1), (2 * big, 3), (big, big)])
    assert ps.orient(0, 1, 2) == 1
    assert ps.orientation_tensor.dtype == np.int8
    assert int(ps.orientation_tensor[0, 1, 2]) == 1


@given(point_sets())
def test_hull_area_positive(ps):
    assert twice_area(ps.hull, ps) > 0
