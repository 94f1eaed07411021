"""Empty convex polygons over a point set.

Holds the O(1) empty-triangle table, the canonical polygon representation
used for column deduplication, the angular sweep orders shared with the
pricing dynamic program, and full enumeration of the empty convex polygons.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .geometry import Edge, PointSet, angular_sort, edge, twice_area

DEFAULT_POLYGON_CAP = 5_000_000


class CapExceeded(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class ConvexPolygon:
    """Canonical polygon: CCW vertex indices, smallest index first."""

    vertices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    @functools.cached_property
    def edges(self) -> tuple[Edge, ...]:
        v = self.vertices
        return tuple(edge(v[a], v[(a + 1) % len(v)]) for a in range(len(v)))


def canonical_key(vertices: Sequence[int], ps: PointSet) -> ConvexPolygon:
    v = list(vertices)
    if twice_area(v, ps) < 0:
        v.reverse()
    r = v.index(min(v))
    return ConvexPolygon(tuple(v[r:] + v[:r]))


class EmptyTriangleTable:
    """n^3 boolean table: is triangle (k, l, m) free of points of P?

    Built in O(n^3) from counts of points lying below each segment, where
    "below" and "between" are taken in lexicographic (x, y) order.  That
    order acts as an infinitesimal shear, so vertical segments need no
    special case.
    """

    def __init__(self, ps: PointSet):
        self.ps = ps
        self.table = _empty_triangles(ps)

    def is_empty(self, k: int, l: int, m: int) -> bool:
        return bool(self.table[k, l, m])

    def __getitem__(self, key) -> bool:
        return bool(self.table[key])

    def count(self) -> int:
        # each unordered triangle appears 6 times
        return int(self.table.sum()) // 6


def _empty_triangles(ps: PointSet) -> np.ndarray:
    n = ps.n
    rank_order = sorted(range(n), key=lambda i: ps.points[i])
    perm = np.array(rank_order)  # perm[r] = original index with rank r
    S = ps.orientation_tensor[np.ix_(perm, perm, perm)].astype(np.int32)
    r = np.arange(n)
    between = (r[:, None, None] < r[None, None, :]) & (r[None, None, :] < r[None, :, None])
    # below[a, b] = #{p : a < p < b, orient(a, b, p) < 0}; between[a, b, p]
    below = ((S < 0) & between).sum(axis=2)
    a = r[:, None, None]
    b = r[None, :, None]
    c = r[None, None, :]
    sorted_mask = (a < b) & (b < c)
    upper = S.transpose(0, 2, 1) > 0  # upper[a, b, c] = orient(a, c, b) > 0
    bab = below[:, :, None]
    bbc = below[None, :, :]
    bac = below[:, None, :]
    inside = np.where(upper, bab + bbc - bac, bac - bab - bbc - 1)
    empty_r = sorted_mask & (inside == 0)
    full = np.zeros((n, n, n), dtype=bool)
    for p in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
        full |= empty_r.transpose(p)
    out = np.zeros_like(full)
    out[np.ix_(perm, perm, perm)] = full
    return out


def empty_triangles(ps: PointSet, table: EmptyTriangleTable | None = None) -> list[ConvexPolygon]:
    table = table or EmptyTriangleTable(ps)
    k, l, m = np.nonzero(table.table)
    keep = (k < l) & (l < m)
    return sorted(canonical_key((a, b, c), ps)
                  for a, b, c in zip(k[keep].tolist(), l[keep].tolist(), m[keep].tolist()))


def is_empty_convex(vertices: Sequence[int], ps: PointSet, table: EmptyTriangleTable) -> bool:
    """CCW strictly convex and free of points in the interior."""
    v = list(vertices)
    t = len(v)
    if t < 3 or len(set(v)) != t:
        return False
    o = ps.orient
    for a in range(t):
        if o(v[a - 1], v[a], v[(a + 1) % t]) <= 0:
            return False
    for j in range(2, t):
        if o(v[0], v[1], v[j]) <= 0 or o(v[0], v[j - 1], v[j]) <= 0:
            return False
    return all(table.is_empty(v[0], v[j], v[j + 1]) for j in range(1, t - 1))


@dataclass
class FanStep:
    """Sweep lists for a (leftmost k, second-to-last l) pair.

    ``before`` holds candidate third-to-last vertices, ``after`` candidate
    last vertices, both in CCW order around l starting at the ray l -> k.
    ``reach[j]`` is how many leading entries of ``before`` make a convex
    turn with ``after[j]`` at l; it is non-decreasing in j.
    """

    l: int
    before: np.ndarray
    after: np.ndarray
    reach: np.ndarray


class FanOrder:
    """Dual-independent sweep structure for polygons by leftmost vertex.

    For every k, ``right_of[k]`` lists the points lexicographically larger
    than k in CCW order around k; a convex polygon whose leftmost vertex is
    k visits its other vertices in exactly this order.
    """

    def __init__(self, ps: PointSet):
        self.ps = ps
        n = ps.n
        pts = ps.points
        S = ps.orientation_tensor
        around = [angular_sort(pts[l], (0, 1), [(j, pts[j]) for j in range(n) if j != l]) for l in range(n)]
        self.right_of: list[np.ndarray] = []
        self.steps: list[list[FanStep]] = []
        for k in range(n):
            pk = angular_sort(pts[k], (0, -1), [(j, pts[j]) for j in range(n) if pts[j] > pts[k]])
            rank = np.full(n, -1)
            rank[pk] = np.arange(len(pk))
            self.right_of.append(np.array(pk, dtype=np.intp))
            steps = []
            for t, l in enumerate(pk):
                ring = around[l]
                s = ring.index(k)
                ring = np.array(ring[s + 1:] + ring[:s], dtype=np.intp)
                rk = rank[ring]
                before = ring[(rk >= 0) & (rk < t)]
                after = ring[rk > t]
                if len(before) and len(after):
                    conv = S[before[:, None], l, after[None, :]] > 0
                    reach = conv.sum(axis=0)
                else:
                    reach = np.zeros(len(after), dtype=np.int64)
                steps.append(FanStep(l, before, after, reach))
            self.steps.append(steps)


def enumerate_polyset(ps: PointSet, table: EmptyTriangleTable | None = None,
                      fan: FanOrder | None = None,
                      limit: int = DEFAULT_POLYGON_CAP) -> list[ConvexPolygon]:
    """Every empty convex polygon exactly once, in canonical form."""
    out = list(iter_polyset(ps, table, fan, limit))
    out.sort()
    return out


def iter_polyset(ps: PointSet, table: EmptyTriangleTable | None = None,
                 fan: FanOrder | None = None,
                 limit: int = DEFAULT_POLYGON_CAP) -> Iterator[ConvexPolygon]:
    table = table or EmptyTriangleTable(ps)
    fan = fan or FanOrder(ps)
    emp = table.table
    count = 0
    for k in range(ps.n):
        # sweep lists keyed by second-to-last vertex
        ext: dict[int, FanStep] = {st.l: st for st in fan.steps[k]}
        stack: list[list[int]] = []
        for st in fan.steps[k]:
            for m in st.after.tolist():
                if emp[k, st.l, m]:
                    stack.append([k, st.l, m])
        while stack:
            chain = stack.pop()
            count += 1
            if count > limit:
                raise CapExceeded(f"more than {limit} empty convex polygons")
            yield canonical_key(chain, ps)
            o, l = chain[-2], chain[-1]
            st = ext[l]
            r = int(np.nonzero(st.before == o)[0][0])
            for j, m in enumerate(st.after.tolist()):
                if st.reach[j] > r and emp[k, l, m]:
                    stack.append(chain + [m])
