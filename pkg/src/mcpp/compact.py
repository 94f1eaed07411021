"""Edge-based compact ILP and its branch-and-bound.

One binary per allowed edge; minimise the number of edges.  A plane graph
on all n points with every face convex has ``edges - n + 1`` bounded
faces, so the edge optimum is also the face optimum.

Rows:
  crossing   x_e + x_f <= 1 for crossing allowed pairs (added lazily),
  angular    for each allowed arc i->j out of an interior point i, some
             allowed edge at i points strictly to the left of i->j,
  degree     every interior point has degree >= 3,
and hull edges are fixed at 1.
"""
from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import lp
from .geometry import Edge, PointSet, angular_sort, crossing_matrix, edge, point_in_convex
from .polygons import ConvexPolygon, canonical_key

TOL = 1e-6


class InvalidPartition(ValueError):
    pass


@dataclass
class CompactModel:
    ps: PointSet
    edges: list[Edge]
    model: lp.LpModel
    crosses: np.ndarray  # crossing matrix restricted to allowed edges
    cut_pairs: set[tuple[int, int]] = field(default_factory=set)

    @property
    def index(self) -> dict[Edge, int]:
        return {e: t for t, e in enumerate(self.edges)}


def build_compact(ps: PointSet, allowed: Iterable[Edge] | None = None) -> CompactModel:
    edges = sorted({edge(*e) for e in (allowed if allowed is not None else ps.edges)})
    missing = ps.hull_edges - set(edges)
    if missing:
        raise ValueError(f"hull edges missing from allowed set: {sorted(missing)}")
    idx = {e: t for t, e in enumerate(edges)}
    m = lp.LpModel()
    hull = ps.hull_edges
    for e in edges:
        lo = 1.0 if e in hull else 0.0
        m.add_column(1.0, lo=lo, hi=1.0)
    nbrs: dict[int, list[int]] = {i: [] for i in range(ps.n)}
    for i, j in edges:
        nbrs[i].append(j)
        nbrs[j].append(i)
    S = ps.orientation_tensor
    for i in ps.interior:
        for j in nbrs[i]:
            support = [idx[edge(i, k)] for k in nbrs[i] if k != j and S[i, j, k] > 0]
            if support:
                m.add_row(lp.Sense.GE, 1.0, {t: 1.0 for t in support})
        m.add_row(lp.Sense.GE, 3.0, {idx[edge(i, k)]: 1.0 for k in nbrs[i]})
    full = crossing_matrix(ps)
    pos = np.array([ps.edge_index[e] for e in edges], dtype=np.intp)
    return CompactModel(ps, edges, m, full[np.ix_(pos, pos)])


def _separate_crossings(cm: CompactModel, x: np.ndarray, limit: int = 400) -> int:
    hot = np.nonzero(x > TOL)[0]
    if len(hot) < 2:
        return 0
    sub = cm.crosses[np.ix_(hot, hot)]
    a, b = np.nonzero(np.triu(sub, 1))
    viol = x[hot[a]] + x[hot[b]] - 1.0
    keep = np.nonzero(viol > TOL)[0]
    order = keep[np.argsort(-viol[keep], kind="stable")][:limit]
    added = 0
    for q in order:
        e, f = int(hot[a[q]]), int(hot[b[q]])
        if (e, f) in cm.cut_pairs:
            continue
        cm.cut_pairs.add((e, f))
        cm.model.add_row(lp.Sense.LE, 1.0, {e: 1.0, f: 1.0})
        added += 1
    return added


def _relax(cm: CompactModel, fix: dict[int, int], backend: str) -> tuple[lp.LpSolution, int]:
    hull = cm.ps.hull_edges
    for t, e in enumerate(cm.edges):
        if e in hull:
            continue
        v = fix.get(t)
        cm.model.set_bounds(t, 0.0 if v is None else v, 1.0 if v is None else v)
    rounds = 0
    while True:
        sol = lp.solve(cm.model, backend=backend)
        if not sol.optimal:
            return sol, rounds
        if not _separate_crossings(cm, sol.x):
            return sol, rounds
        rounds += 1


@dataclass
class CompactResult:
    edges: list[Edge]
    status: str  # "Optimal" | "TimeLimit" | "Infeasible"
    value: int | None  # number of faces
    bound: float  # lower bound on faces
    nodes: int
    root_bound: float


def solve_compact(cm: CompactModel, time_cap: float | None = None, backend: str = "highs",
                  incumbent: Sequence[Edge] | None = None) -> CompactResult:
    """Best-first branch-and-bound on the most fractional edge."""
    start = time.monotonic()
    n = cm.ps.n
    best_val = math.inf
    best_x: np.ndarray | None = None
    if incumbent is not None:
        idx = cm.index
        best_x = np.zeros(len(cm.edges))
        best_x[[idx[edge(*e)] for e in incumbent]] = 1.0
        best_val = float(best_x.sum())
    heap: list[tuple[float, int, dict[int, int]]] = [(-math.inf, 0, {})]
    counter = 1
    nodes = 0
    root_bound = math.nan
    status = "Optimal"
    plunge: tuple[float, int, dict[int, int]] | None = None
    while heap or plunge is not None:
        if plunge is not None:
            lb, _, fix = plunge
            plunge = None
        else:
            lb, _, fix = heapq.heappop(heap)
        if lb > -math.inf and math.ceil(lb - TOL) >= best_val:
            continue
        if time_cap is not None and time.monotonic() - start > time_cap:
            heapq.heappush(heap, (lb, -1, fix))
            status = "TimeLimit"
            break
        nodes += 1
        sol, _ = _relax(cm, fix, backend)
        if not sol.optimal:
            if nodes == 1:
                root_bound = math.inf
            continue
        z = sol.objective
        if nodes == 1:
            root_bound = z
        if math.ceil(z - TOL) >= best_val:
            continue
        x = sol.x
        frac = np.abs(x - np.round(x))
        if frac.max() <= TOL:
            best_val = float(np.round(x).sum())
            best_x = np.round(x)
            continue
        t = int(np.argmin(np.where(frac > TOL, np.abs(0.5 - x), np.inf)))
        up = int(x[t] >= 0.5)
        for v in (up, 1 - up):
            child = dict(fix)
            child[t] = v
            if v == up:
                plunge = (z, counter, child)  # dive on the rounded side
            else:
                heapq.heappush(heap, (z, counter, child))
            counter += 1
    if best_x is None:
        return CompactResult([], "Infeasible" if status == "Optimal" else status, None,
                             math.inf, nodes, root_bound - n + 1)
    chosen = [cm.edges[t] for t in np.nonzero(best_x > 0.5)[0]]
    value = len(chosen) - n + 1
    if status == "Optimal":
        bound = float(value)
    else:
        open_lb = min((lb for lb, _, _ in heap), default=best_val)
        faces_lb = math.ceil(open_lb - TOL) - n + 1 if open_lb > -math.inf else 1  # one face at least
        bound = min(float(value), max(faces_lb, 1))
    return CompactResult(chosen, status, value, bound, nodes, root_bound - n + 1)


def extract_faces(ps: PointSet, edges: Iterable[Edge]) -> list[ConvexPolygon]:
    """Bounded faces of the plane graph, each checked convex and empty."""
    nbrs: dict[int, list[int]] = {i: [] for i in range(ps.n)}
    for i, j in edges:
        nbrs[i].append(j)
        nbrs[j].append(i)
    ring = {}
    for v, ns in nbrs.items():
        if ns:
            order = angular_sort(ps.points[v], (1, 0), [(u, ps.points[u]) for u in ns])
            ring[v] = {u: order[a - 1] for a, u in enumerate(order)}  # clockwise successor
    seen: set[tuple[int, int]] = set()
    faces: list[ConvexPolygon] = []
    for u in nbrs:
        for v in nbrs[u]:
            if (u, v) in seen:
                continue
            cyc = []
            a, b = u, v
            while (a, b) not in seen:
                seen.add((a, b))
                cyc.append(a)
                a, b = b, ring[b][a]
            area = sum(ps.points[cyc[t]][0] * ps.points[cyc[(t + 1) % len(cyc)]][1]
                       - ps.points[cyc[(t + 1) % len(cyc)]][0] * ps.points[cyc[t]][1]
                       for t in range(len(cyc)))
            if area <= 0:
                continue
            if len(set(cyc)) != len(cyc) or any(
                ps.orient(cyc[t - 1], cyc[t], cyc[(t + 1) % len(cyc)]) <= 0 for t in range(len(cyc))
            ):
                raise InvalidPartition(f"face {cyc} is not convex")
            if any(i not in cyc and point_in_convex(cyc, ps.points[i], ps) for i in range(ps.n)):
                raise InvalidPartition(f"face {cyc} is not empty")
            faces.append(canonical_key(cyc, ps))
    faces.sort()
    return faces
