import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mcpp.geometry import PointSet
from mcpp.master import new_rmp
from mcpp.polygons import ConvexPolygon, empty_triangles, enumerate_polyset
from mcpp.pricing import DualVector, Pricer, reduced_cost, set_forbidden_edges, zero_duals
from mcpp.wedges import build_wedge_index

from .conftest import point_sets, random_instances


def _random_duals(wi, rng, scale=1.0):
    return DualVector(rng.normal(0, scale, wi.W), rng.normal(0, scale, len(wi.ps.edges)), np.zeros(0))


def test_zero_duals(square):
    wi = build_wedge_index(square)
    pr = Pricer(square, wi)
    d = zero_duals(wi)
    for t in empty_triangles(square):
        assert pr.triangle_delta(*t.vertices, d) == 0.0
    res = pr.price(d)
    assert res.columns == [] and res.min_reduced_cost == pytest.approx(1.0)
    for p in enumerate_polyset(square):
        assert reduced_cost(p, d, wi) == 1.0


def test_uniform_alpha_triangle_delta(square):
    wi = build_wedge_index(square)
    d = DualVector(np.full(8, 1 / 8), np.zeros(6), np.zeros(0))
    # triangle (0, 1, 2) covers 1 + 2 + 1 wedges
    assert Pricer(square, wi).triangle_delta(0, 1, 2, d) == pytest.approx(-0.5)


def test_forbidden_triangle_delta_positive(square):
    wi = build_wedge_index(square)
    d = _random_duals(wi, np.random.default_rng(3))
    assert Pricer(square, wi).triangle_delta(0, 1, 2, d, forbidden=[(0, 1)]) > 0


def test_square_prices_quadrilateral(square):
    wi = build_wedge_index(square)
    rmp = new_rmp(square, wi, empty_triangles(square))
    rel = rmp.solve()
    assert rel.duals.alpha.sum() == pytest.approx(2.0)
    res = Pricer(square, wi).price(rel.duals, exclude=set(rmp.registry))
    assert [p for p, _ in res.columns] == [ConvexPolygon((0, 1, 2, 3))]
    assert res.columns[0][1] == pytest.approx(-1.0)


class _UnitTriangles(Pricer):
    def delta_tensor(self, duals):
        D = np.full((self.n,) * 3, np.inf)
        D[self.table.table] = -1.0
        return D


@pytest.mark.parametrize("n", [3, 4, 5, 7, 9])
def test_unit_surrogate_finds_hull(n):
    # regular-ish convex n-gon with integer coordinates
    import math
    pts = [(round(1000 * math.cos(2 * math.pi * k / n)), round(1000 * math.sin(2 * math.pi * k / n)))
           for k in range(n)]
    ps = PointSet.from_coords(pts)
    wi = build_wedge_index(ps)
    best, rc = _UnitTriangles(ps, wi).best_polygon(zero_duals(wi), cost=0.0)
    assert rc == pytest.approx(-(n - 2))
    assert sorted(best.vertices) == list(range(n))


def _check_against_polyset(ps, rng, draws):
    wi = build_wedge_index(ps)
    pr = Pricer(ps, wi)
    polys = enumerate_polyset(ps)
    for _ in range(draws):
        d = _random_duals(wi, rng)
        brute = min(reduced_cost(p, d, wi) for p in polys)
        res = pr.price(d)
        assert res.min_reduced_cost == pytest.approx(brute, abs=1e-9)
        for p, rc in res.columns:
            assert rc == pytest.approx(reduced_cost(p, d, wi), abs=1e-9)
            assert rc < -1e-6


@given(point_sets(max_n=8), st.integers(0, 2**32 - 1))
def test_dp_minimum_matches_enumeration(ps, seed):
    _check_against_polyset(ps, np.random.default_rng(seed), 3)


def test_dp_minimum_on_generated_sets():
    for k, ps in enumerate(random_instances(5, 6, 10, seed=17)):
        _check_against_polyset(ps, np.random.default_rng(k), 5)


def test_forbidden_edges(square):
    wi = build_wedge_index(square)
    pr = Pricer(square, wi)
    rng = np.random.default_rng(0)
    d = _random_duals(wi, rng)
    quad = ConvexPolygon((0, 1, 2, 3))
    assert reduced_cost(quad, set_forbidden_edges(d, [(0, 2)], square), wi) == pytest.approx(
        reduced_cost(quad, d, wi))
    res = pr.price(d, forbidden=[(0, 1)])
    assert all((0, 1) not in p.edges for p, _ in res.columns)
    plain, empty = pr.price(d), pr.price(d, forbidden=[])
    assert plain.columns == empty.columns and plain.min_reduced_cost == empty.min_reduced_cost


@given(point_sets(max_n=8), st.integers(0, 2**32 - 1))
def test_forbidden_edges_never_used(ps, seed):
    wi = build_wedge_index(ps)
    rng = np.random.default_rng(seed)
    d = _random_duals(wi, rng)
    forb = [e for e in ps.edges if rng.random() < 0.3]
    for p, _ in Pricer(ps, wi).price(d, forbidden=forb, cap=10_000).columns:
        assert not set(p.edges) & set(forb)


def test_cap_and_exclusion(square):
    wi = build_wedge_index(square)
    d = DualVector(np.ones(8), np.zeros(6), np.zeros(0))
    pr = Pricer(square, wi)
    full = pr.price(d)
    # at most one column per (first, second-to-last) vertex pair, best first
    assert full.columns[0] == (ConvexPolygon((0, 1, 2, 3)), -7.0)
    assert len(full.columns) == len({p for p, _ in full.columns}) >= 3
    assert len(pr.price(d, cap=2).columns) == 2
    assert pr.price(d, cap=2).min_reduced_cost == full.min_reduced_cost
    kept = pr.price(d, exclude={ConvexPolygon((0, 1, 2, 3))})
    assert ConvexPolygon((0, 1, 2, 3)) not in [p for p, _ in kept.columns]
