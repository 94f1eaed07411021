import numpy as np
import pytest

from mcpp.master import MissingTriangles, RmpState, add_polygon_column, new_rmp, separate_degree_cuts, solve_relaxation
from mcpp.polygons import ConvexPolygon, empty_triangles, enumerate_polyset
from mcpp.pricing import reduced_cost
from mcpp.wedges import build_wedge_index


@pytest.mark.parametrize("backend", ["highs", "simplex"])
def test_square_full_lp(square, backend):
    wi = build_wedge_index(square)
    rmp = new_rmp(square, wi, enumerate_polyset(square), backend=backend)
    assert len(rmp.polygons) == 5 and rmp.E == 6
    assert rmp.model.nrows == 8 + 6
    rel = solve_relaxation(rmp)
    assert rel.z == pytest.approx(1.0)
    assert np.isfinite(rel.duals.alpha).all() and np.isfinite(rel.duals.beta).all()
    assert rmp.integral_partition(rel) == [ConvexPolygon((0, 1, 2, 3))]


def test_triangle_lp(triangle):
    rmp = new_rmp(triangle, build_wedge_index(triangle), enumerate_polyset(triangle))
    assert (len(rmp.polygons), rmp.E, rmp.W) == (1, 3, 3)
    assert solve_relaxation(rmp).z == pytest.approx(1.0)


def test_tri_interior_lp(tri_interior):
    rmp = new_rmp(tri_interior, build_wedge_index(tri_interior), enumerate_polyset(tri_interior))
    assert solve_relaxation(rmp).z == pytest.approx(3.0)


def test_adding_quadrilateral(square):
    wi = build_wedge_index(square)
    rmp = new_rmp(square, wi, empty_triangles(square))
    rel = solve_relaxation(rmp)
    assert rel.z == pytest.approx(2.0)
    quad = ConvexPolygon((0, 1, 2, 3))
    assert reduced_cost(quad, rel.duals, wi) == pytest.approx(-1.0)
    assert add_polygon_column(rmp, quad)
    assert solve_relaxation(rmp).z == pytest.approx(1.0)
    assert not add_polygon_column(rmp, quad)


def test_basic_columns_have_zero_reduced_cost(square):
    wi = build_wedge_index(square)
    rmp = new_rmp(square, wi, empty_triangles(square))
    rel = solve_relaxation(rmp)
    for p, u in zip(rmp.polygons, rel.u):
        if u > 1e-6:
            assert reduced_cost(p, rel.duals, wi) == pytest.approx(0.0, abs=1e-6)


def test_missing_triangles(square):
    with pytest.raises(MissingTriangles):
        new_rmp(square, build_wedge_index(square), [ConvexPolygon((0, 1, 2, 3))])


def test_crossing_diagonals_infeasible(square):
    rmp = new_rmp(square, build_wedge_index(square), enumerate_polyset(square))
    assert rmp.apply_fixings({(0, 2): 1, (1, 3): 1})
    assert not solve_relaxation(rmp).optimal


def test_hull_edge_fixed_to_zero(square):
    rmp = new_rmp(square, build_wedge_index(square), enumerate_polyset(square))
    assert not rmp.apply_fixings({(0, 1): 0})


def test_degree_cuts(tri_interior, square):
    rmp = new_rmp(tri_interior, build_wedge_index(tri_interior), enumerate_polyset(tri_interior))
    x = np.zeros(rmp.E)
    idx = tri_interior.edge_index
    x[idx[(0, 3)]] = x[idx[(1, 3)]] = 1.0  # degree of point 3 is 2.0
    assert separate_degree_cuts(rmp, x) == 1
    assert separate_degree_cuts(rmp, x) == 0  # already present

    rmp = new_rmp(tri_interior, build_wedge_index(tri_interior), enumerate_polyset(tri_interior))
    x[idx[(2, 3)]] = 0.95
    assert separate_degree_cuts(rmp, x) == 0  # 2.95 misses 3 by less than 0.1

    rmp = new_rmp(square, build_wedge_index(square), enumerate_polyset(square))
    assert separate_degree_cuts(rmp, np.zeros(rmp.E)) == 0


def test_phase_one_recovers(square):
    wi = build_wedge_index(square)
    rmp = new_rmp(square, wi, empty_triangles(square))
    rmp.apply_fixings({(0, 2): 0, (1, 3): 0})  # no triangle survives
    assert not rmp.solve().optimal
    rmp.set_phase(1)
    rel = rmp.solve()
    assert rel.optimal and rel.z > 1e-6
    rmp.add_polygon_column(ConvexPolygon((0, 1, 2, 3)))
    assert rmp.solve().z == pytest.approx(0.0, abs=1e-9)
    rmp.set_phase(2)
    assert rmp.solve().z == pytest.approx(1.0)
