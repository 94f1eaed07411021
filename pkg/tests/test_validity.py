from hypothesis import given

from mcpp.heuristics import delaunay
from mcpp.validity import partition_edges, partition_problems, upper_bound

from .conftest import point_sets


def test_accepts_known_partitions(square, tri_interior):
    assert partition_problems(square, [(0, 1, 2, 3)]) == []
    assert partition_problems(square, [(0, 1, 2), (0, 2, 3)]) == []
    assert partition_problems(tri_interior, [(0, 1, 3), (1, 2, 3), (0, 3, 2)]) == []


def test_rejects_bad_partitions(square, tri_interior):
    assert partition_problems(square, [(0, 1, 2)])  # area short
    assert partition_problems(square, [(0, 1, 2), (0, 1, 3), (0, 2, 3)])  # overlap
    assert partition_problems(tri_interior, [(0, 1, 2)])  # not empty
    assert partition_problems(square, [(0, 1, 3, 2)])  # self-crossing order


@given(point_sets(max_n=12, bound=200))
def test_triangulations_are_partitions(ps):
    t = delaunay(ps)
    polys = [p.vertices for p in t.triangles]
    assert partition_problems(ps, polys) == []
    assert partition_edges(ps, polys) == t.edges


def test_upper_bound_is_ceiling():
    for n in range(3, 200):
        assert upper_bound(n) * 7 >= 10 * n - 18 > (upper_bound(n) - 1) * 7
