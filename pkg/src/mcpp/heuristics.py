"""Primal solutions: triangulations and the edge-restricted exact solve."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .compact import build_compact, extract_faces, solve_compact
from .geometry import Edge, PointSet, crossing_matrix, edge
from .polygons import ConvexPolygon, canonical_key

RESTRICTED_TIME_CAP = 5.0
FLIP_LIMIT_FACTOR = 50


@dataclass
class Incumbent:
    partition: list[ConvexPolygon]
    source: str = "delaunay-heuristic"

    @property
    def value(self) -> int:
        return len(self.partition)


@dataclass
class Triangulation:
    ps: PointSet
    edges: list[Edge]
    triangles: list[ConvexPolygon]
    adjacency: dict[Edge, list[int]] = field(default_factory=dict)  # edge -> opposite vertices


def _from_edges(ps: PointSet, edges: Iterable[Edge]) -> Triangulation:
    edges = sorted({edge(*e) for e in edges})
    tris = extract_faces(ps, edges)
    adj: dict[Edge, list[int]] = {e: [] for e in edges}
    for t in tris:
        a, b, c = t.vertices
        for (u, v), w in (((a, b), c), ((b, c), a), ((c, a), b)):
            adj[edge(u, v)].append(w)
    return Triangulation(ps, edges, tris, adj)


def incircle(ps: PointSet, a: int, b: int, c: int, d: int) -> int:
    """Sign of d relative to the circle through CCW a, b, c (positive = inside)."""
    (ax, ay), (bx, by), (cx, cy), (dx, dy) = (ps.points[i] for i in (a, b, c, d))
    adx, ady = ax - dx, ay - dy
    bdx, bdy = bx - dx, by - dy
    cdx, cdy = cx - dx, cy - dy
    det = ((adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
           - (bdx * bdx + bdy * bdy) * (adx * cdy - cdx * ady)
           + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady))
    return (det > 0) - (det < 0)


def delaunay(ps: PointSet) -> Triangulation:
    """Incremental insertion in (x, y) order followed by Lawson flips.

    On four cocircular points the diagonal through the lowest index wins.
    """
    order = sorted(range(ps.n), key=lambda i: ps.points[i])
    opp: dict[Edge, set[int]] = {}

    def link(a, b, c):
        for u, v, w in ((a, b, c), (b, c, a), (c, a, b)):
            opp.setdefault(edge(u, v), set()).add(w)

    a, b, c = order[:3]
    if ps.orient(a, b, c) < 0:
        b, c = c, b
    link(a, b, c)
    hull = [a, b, c]  # CCW
    for p in order[3:]:
        h = len(hull)
        vis = [ps.orient(hull[t], hull[(t + 1) % h], p) < 0 for t in range(h)]
        for t in range(h):
            if vis[t]:
                link(hull[t], hull[(t + 1) % h], p)
        # visible edges form one contiguous run s..e-1; its inner vertices leave the hull
        s = next(t for t in range(h) if vis[t] and not vis[t - 1])
        e = s
        while vis[e % h]:
            e += 1
        hull = [hull[(e + q) % h] for q in range(h - (e - s) + 1)] + [p]
    stack = sorted(opp)
    budget = FLIP_LIMIT_FACTOR * ps.n * ps.n + 100
    while stack:
        e = stack.pop()
        sides = opp.get(e)
        if sides is None or len(sides) != 2:
            continue
        u, v = e
        c, d = sorted(sides)
        if ps.orient(u, v, c) < 0:
            u, v = v, u
        s = incircle(ps, u, v, c, d)
        if s < 0 or (s == 0 and min(u, v, c, d) in (u, v)):
            continue
        budget -= 1
        if budget < 0:
            raise RuntimeError("edge flipping did not terminate")
        del opp[e]
        for w in (u, v):
            opp[edge(w, c)].discard(v if w == u else u)
            opp[edge(w, d)].discard(v if w == u else u)
        link(c, d, u)
        link(c, d, v)
        stack.extend([edge(u, c), edge(c, v), edge(v, d), edge(d, u)])
    return _from_edges(ps, opp.keys())


def greedy_triangulation(ps: PointSet, values: Mapping[Edge, float] | Sequence[float]) -> Triangulation:
    """Insert edges by decreasing value (ties by edge id), skipping crossers."""
    if isinstance(values, Mapping):
        val = np.array([values.get(e, 0.0) for e in ps.edges])
    else:
        val = np.asarray(values, dtype=float)
    cross = crossing_matrix(ps)
    order = sorted(range(len(ps.edges)), key=lambda t: (-val[t], ps.edges[t]))
    blocked = np.zeros(len(ps.edges), dtype=bool)
    chosen = []
    for t in order:
        if blocked[t]:
            continue
        chosen.append(ps.edges[t])
        blocked |= cross[t]
    return _from_edges(ps, chosen)


def flip_edges(t: Triangulation) -> set[Edge]:
    ps = t.ps
    out = set()
    for e, sides in t.adjacency.items():
        if len(sides) != 2:
            continue
        c, d = sides
        u, v = e
        if ps.orient(c, d, u) * ps.orient(c, d, v) < 0:
            out.add(edge(c, d))
    return out


def restricted_mcpp(ps: PointSet, allowed: Iterable[Edge], time_cap: float = RESTRICTED_TIME_CAP,
                    fallback: Triangulation | None = None, backend: str = "highs") -> Incumbent:
    """Exact optimum over the allowed edges, or the fallback triangulation on time-out."""
    allowed = sorted({edge(*e) for e in allowed} | set(ps.hull_edges))
    cm = build_compact(ps, allowed)
    hint = fallback.edges if fallback is not None else None
    res = solve_compact(cm, time_cap=time_cap, backend=backend, incumbent=hint)
    if res.value is None:
        if fallback is None:
            raise RuntimeError("restricted problem has no solution")
        return Incumbent(list(fallback.triangles), "lp-heuristic")
    return Incumbent(extract_faces(ps, res.edges), "lp-heuristic")


def heuristic_partition(ps: PointSet, tri: Triangulation, time_cap: float = RESTRICTED_TIME_CAP,
                        backend: str = "highs") -> Incumbent:
    allowed = set(tri.edges) | flip_edges(tri)
    return restricted_mcpp(ps, allowed, time_cap, fallback=tri, backend=backend)
