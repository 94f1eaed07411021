import pytest
from hypothesis import given

from mcpp.geometry import PointSet, edge
from mcpp.heuristics import (
    delaunay,
    flip_edges,
    greedy_triangulation,
    heuristic_partition,
    incircle,
    restricted_mcpp,
)
from mcpp.oracle import brute_force_optimum
from mcpp.validity import is_valid_partition

from .conftest import point_sets, random_instances


def _tri_count(ps):
    return 2 * len(ps.interior) + len(ps.hull) - 2


def test_delaunay_small(triangle, tri_interior, square):
    assert [t.vertices for t in delaunay(triangle).triangles] == [(0, 1, 2)]
    assert len(delaunay(tri_interior).triangles) == 3
    # four cocircular corners: the diagonal through the lowest index is kept
    assert (0, 2) in delaunay(square).edges and (1, 3) not in delaunay(square).edges


@given(point_sets(max_n=12, bound=200))
def test_delaunay_empty_circles(ps):
    t = delaunay(ps)
    assert len(t.triangles) == _tri_count(ps)
    for tri in t.triangles:
        a, b, c = tri.vertices
        assert all(incircle(ps, a, b, c, d) <= 0 for d in range(ps.n) if d not in tri.vertices)
    assert is_valid_partition(ps, [p.vertices for p in t.triangles])


def test_greedy_examples(square):
    even = greedy_triangulation(square, [1.0] * 6)
    assert (0, 2) in even.edges  # EdgeId order breaks the tie
    vals = {e: 0.0 for e in square.edges}
    vals[(0, 2)], vals[(1, 3)] = 0.1, 0.9
    assert (1, 3) in greedy_triangulation(square, vals).edges


@given(point_sets(max_n=10))
def test_greedy_keeps_integral_solution(ps):
    t = delaunay(ps)
    x = [1.0 if e in set(t.edges) else 0.0 for e in ps.edges]
    assert greedy_triangulation(ps, x).edges == t.edges


def test_flip_edges(square, triangle):
    assert flip_edges(delaunay(square)) == {(1, 3)}
    assert flip_edges(delaunay(triangle)) == set()


def test_flip_skips_reflex_quad():
    # quad 0,1,2,3 with point 3 tucked in so that (1, 3) is the only diagonal
    ps = PointSet.from_coords([(0, 0), (10, 0), (20, 10), (9, 2)])
    t = greedy_triangulation(ps, [1.0] * 6)
    assert flip_edges(t) == set()


def test_restricted_examples(square, tri_interior):
    assert restricted_mcpp(square, list(square.hull_edges) + [(0, 2), (1, 3)]).value == 1
    assert restricted_mcpp(tri_interior, delaunay(tri_interior).edges).value == 3


def test_restricted_full_edge_set_matches_oracle():
    for ps in random_instances(8, 5, 10, seed=5):
        inc = restricted_mcpp(ps, ps.edges)
        assert inc.value == brute_force_optimum(ps)[0]
        assert is_valid_partition(ps, [p.vertices for p in inc.partition])


def test_heuristic_partition_no_worse_than_delaunay():
    for ps in random_instances(6, 8, 20, seed=9):
        t = delaunay(ps)
        inc = heuristic_partition(ps, t)
        assert inc.value <= len(t.triangles)
        assert is_valid_partition(ps, [p.vertices for p in inc.partition])


def test_heuristic_timeout_falls_back(tri_interior):
    t = delaunay(tri_interior)
    inc = restricted_mcpp(tri_interior, t.edges, time_cap=0.0, fallback=t)
    assert inc.value == 3
