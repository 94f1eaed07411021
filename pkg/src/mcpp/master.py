"""Restricted master problem over polygon and edge columns.

Rows, in creation order:

* one ``= 1`` row per wedge (polygon columns covering it carry +1),
* one ``= 0`` linking row per edge: polygons bounded by the edge carry +1,
  the edge's own column carries -2 (-1 for hull edges, which border a
  single polygon),
* lazily separated ``>= 3`` degree rows over the edge columns of an
  interior point.

Columns: the E edge columns first (cost 0, bounds [0, 1], hull edges fixed
at 1), then polygon columns (cost 1).  Phase-1 artificials (+1 in one row
each) are created on demand when a node's restricted LP is infeasible.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from . import lp
from .geometry import Edge, PointSet, edge
from .polygons import ConvexPolygon, EmptyTriangleTable, canonical_key
from .pricing import DualVector
from .wedges import WedgeIndex, wedges_of_polygon

DEGREE_RHS = 3.0
DEGREE_VIOLATION = 0.1
INTEGRALITY_TOL = 1e-6


class MissingTriangles(ValueError):
    pass


@dataclass
class Relaxation:
    status: lp.Status
    z: float
    duals: DualVector | None
    x: np.ndarray  # edge values, ps.edges order
    u: np.ndarray  # polygon values, column registration order

    @property
    def optimal(self) -> bool:
        return self.status is lp.Status.OPTIMAL


class RmpState:
    def __init__(self, ps: PointSet, wi: WedgeIndex, initial_polygons: Iterable, *,
                 table: EmptyTriangleTable | None = None, backend: str = "highs",
                 check_triangles: bool = True):
        self.ps, self.wi, self.backend = ps, wi, backend
        self.model = lp.LpModel()
        self.W = wi.W
        self.E = len(ps.edges)
        for _ in range(self.W):
            self.model.add_row(lp.Sense.EQ, 1.0)
        for _ in range(self.E):
            self.model.add_row(lp.Sense.EQ, 0.0)
        hull = ps.hull_edges
        for t, e in enumerate(ps.edges):
            on_hull = e in hull
            self.model.add_column(0.0, {self.W + t: -1.0 if on_hull else -2.0},
                                  lo=1.0 if on_hull else 0.0, hi=1.0)
        self.polygons: list[ConvexPolygon] = []
        self.poly_col: list[int] = []
        self.registry: dict[ConvexPolygon, int] = {}
        self.cut_rows: dict[int, int] = {}
        self.artificial: dict[int, int] = {}
        self.phase = 2
        self.fixings: dict[Edge, int] = {}
        for p in initial_polygons:
            self.add_polygon_column(p)
        if check_triangles:
            table = table or EmptyTriangleTable(ps)
            have = sum(1 for p in self.polygons if len(p) == 3)
            if have != table.count():
                raise MissingTriangles(f"{have} of {table.count()} empty triangles seeded")

    # -- columns and rows -------------------------------------------------------

    def add_polygon_column(self, poly) -> bool:
        """Register a polygon; False when it is already present."""
        p = poly if isinstance(poly, ConvexPolygon) else canonical_key(poly, self.ps)
        if p in self.registry:
            return False
        entries = {w: 1.0 for w in wedges_of_polygon(p.vertices, self.wi)}
        for e in p.edges:
            entries[self.W + self.ps.edge_index[e]] = 1.0
        j = self.model.add_column(0.0 if self.phase == 1 else 1.0, entries)
        self.registry[p] = len(self.polygons)
        self.polygons.append(p)
        self.poly_col.append(j)
        return True

    def add_polygon_columns(self, polys: Iterable) -> int:
        return sum(self.add_polygon_column(p) for p in polys)

    def degree(self, x: np.ndarray) -> np.ndarray:
        deg = np.zeros(self.ps.n)
        E = np.array(self.ps.edges).reshape(-1, 2)
        np.add.at(deg, E[:, 0], x)
        np.add.at(deg, E[:, 1], x)
        return deg

    def separate_degree_cuts(self, x: np.ndarray) -> int:
        """Add a degree row for each interior point whose degree is below 2.9."""
        deg = self.degree(x)
        added = 0
        for i in self.ps.interior:
            if i in self.cut_rows or deg[i] >= DEGREE_RHS - DEGREE_VIOLATION:
                continue
            entries = {self.ps.edge_index[edge(i, j)]: 1.0 for j in range(self.ps.n) if j != i}
            r = self.model.add_row(lp.Sense.GE, DEGREE_RHS, entries)
            self.cut_rows[i] = r
            if self.artificial:
                self._add_artificial(r)
            added += 1
        return added

    # -- branching ----------------------------------------------------------------

    def apply_fixings(self, fixings: Mapping[Edge, int]) -> bool:
        """Set edge bounds for a node; False if a hull edge is fixed to 0."""
        hull = self.ps.hull_edges
        for t, e in enumerate(self.ps.edges):
            if e not in hull:
                self.model.set_bounds(t, 0.0, 1.0)
        self.fixings = dict(fixings)
        for e, v in fixings.items():
            if e in hull:
                if v == 0:
                    return False
                continue
            t = self.ps.edge_index[e]
            self.model.set_bounds(t, float(v), float(v))
        return True

    def forbidden_edges(self) -> list[Edge]:
        return [e for e, v in self.fixings.items() if v == 0]

    # -- phases -------------------------------------------------------------------

    def _add_artificial(self, row: int) -> None:
        on = self.phase == 1
        self.artificial[row] = self.model.add_column(1.0 if on else 0.0, {row: 1.0},
                                                     lo=0.0, hi=lp.INF if on else 0.0)

    def set_phase(self, phase: int) -> None:
        if phase == self.phase:
            return
        if phase == 1 and not self.artificial:
            for r in range(self.model.nrows):
                self._add_artificial(r)
        self.phase = phase
        pc = 0.0 if phase == 1 else 1.0
        for j in self.poly_col:
            self.model.set_cost(j, pc)
        for j in self.artificial.values():
            if phase == 1:
                self.model.set_cost(j, 1.0)
                self.model.set_bounds(j, 0.0, lp.INF)
            else:
                self.model.set_cost(j, 0.0)
                self.model.set_bounds(j, 0.0, 0.0)

    # -- solving ------------------------------------------------------------------

    def solve(self) -> Relaxation:
        sol = lp.solve(self.model, backend=self.backend)
        if not sol.optimal:
            return Relaxation(sol.status, np.inf, None, np.zeros(self.E), np.zeros(len(self.polygons)))
        y = sol.duals
        cut_order = sorted(self.cut_rows.items())
        duals = DualVector(
            alpha=y[: self.W].copy(),
            beta=y[self.W: self.W + self.E].copy(),
            gamma=np.array([y[r] for _, r in cut_order]),
        )
        x = sol.x[: self.E].copy()
        u = sol.x[self.poly_col] if self.poly_col else np.zeros(0)
        return Relaxation(sol.status, float(sol.objective), duals, x, np.asarray(u, dtype=float))

    def integral_partition(self, rel: Relaxation) -> list[ConvexPolygon] | None:
        u = rel.u
        if np.any(np.abs(u - np.round(u)) > INTEGRALITY_TOL):
            return None
        return [self.polygons[a] for a in np.nonzero(u > 0.5)[0]]

    def fractional_polygons(self, rel: Relaxation) -> bool:
        return bool(np.any(np.abs(rel.u - np.round(rel.u)) > INTEGRALITY_TOL))


def new_rmp(ps: PointSet, wi: WedgeIndex, initial_polygons: Iterable, **kw) -> RmpState:
    return RmpState(ps, wi, initial_polygons, **kw)


def solve_relaxation(rmp: RmpState) -> Relaxation:
    return rmp.solve()


def add_polygon_column(rmp: RmpState, poly) -> bool:
    return rmp.add_polygon_column(poly)


def separate_degree_cuts(rmp: RmpState, x: np.ndarray) -> int:
    return rmp.separate_degree_cuts(x)
