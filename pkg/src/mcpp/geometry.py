"""Exact integer predicates and orderings over planar point sets.

Every predicate reduces to the sign of a 2x2 determinant over integer
coordinates, so Python integers give exact answers with no rounding.  The
vectorised helpers use int64 when coordinates stay below ``2**30`` (the
determinant then fits with room to spare) and fall back to object arrays
otherwise.
"""
from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

import numpy as np

Point = tuple[int, int]
Edge = tuple[int, int]

COORD_LIMIT = 1 << 30


class GeometryError(ValueError):
    pass


class DuplicatePoint(GeometryError):
    def __init__(self, i: int, j: int):
        super().__init__(f"points {i} and {j} coincide")
        self.pair = (i, j)


class GeneralPositionViolation(GeometryError):
    def __init__(self, triple: tuple[int, int, int]):
        super().__init__(f"points {triple} are collinear")
        self.triple = triple


class Orientation(enum.IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


def cross(k: Point, l: Point, m: Point) -> int:
    """(l - k) x (m - l); positive for a left turn at l."""
    return (l[0] - k[0]) * (m[1] - l[1]) - (l[1] - k[1]) * (m[0] - l[0])


def orientation(k: Point, l: Point, m: Point) -> Orientation:
    c = cross(k, l, m)
    return Orientation((c > 0) - (c < 0))


def is_convex_turn(k: Point, l: Point, m: Point) -> bool:
    return cross(k, l, m) > 0


def edge(i: int, j: int) -> Edge:
    return (i, j) if i < j else (j, i)


def validate_general_position(points: Sequence[Point]) -> tuple[int, int, int] | None:
    """Return the lexicographically first collinear index triple, or None.

    Raises DuplicatePoint when two points coincide.  Runs in O(n^2) by
    bucketing, for every anchor i, the reduced directions towards j > i.
    """
    seen: dict[Point, int] = {}
    for idx, p in enumerate(points):
        p = (int(p[0]), int(p[1]))
        if p in seen:
            raise DuplicatePoint(seen[p], idx)
        seen[p] = idx
    n = len(points)
    for i in range(n):
        xi, yi = points[i]
        first: dict[tuple[int, int], int] = {}
        best: tuple[int, int] | None = None
        for j in range(i + 1, n):
            dx, dy = points[j][0] - xi, points[j][1] - yi
            g = gcd(dx, dy)
            dx, dy = dx // g, dy // g
            if dx < 0 or (dx == 0 and dy < 0):
                dx, dy = -dx, -dy
            key = (dx, dy)
            if key in first:
                cand = (first[key], j)
                if best is None or cand < best:
                    best = cand
            else:
                first[key] = j
        if best is not None:
            return (i, best[0], best[1])
    return None


def _as_array(points: Sequence[Point]) -> np.ndarray:
    big = any(abs(x) >= COORD_LIMIT or abs(y) >= COORD_LIMIT for x, y in points)
    return np.array(points, dtype=object if big else np.int64).reshape(-1, 2)


@dataclass(frozen=True)
class PointSet:
    """Immutable, validated point set in general position."""

    points: tuple[Point, ...]
    _checked: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        pts = tuple((int(x), int(y)) for x, y in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 3:
            raise GeometryError("need at least 3 points")
        if self._checked:
            triple = validate_general_position(pts)
            if triple is not None:
                raise GeneralPositionViolation(triple)

    @classmethod
    def from_coords(cls, coords: Iterable[Sequence[int]]) -> "PointSet":
        return cls(tuple((int(c[0]), int(c[1])) for c in coords))

    @property
    def n(self) -> int:
        return len(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i: int) -> Point:
        return self.points[i]

    def orient(self, k: int, l: int, m: int) -> int:
        """Sign of the turn k -> l -> m as -1, 0 or 1."""
        c = cross(self.points[k], self.points[l], self.points[m])
        return (c > 0) - (c < 0)

    @functools.cached_property
    def coords(self) -> np.ndarray:
        return _as_array(self.points)

    @functools.cached_property
    def orientation_tensor(self) -> np.ndarray:
        """S[i, j, k] = sign of cross(p_i, p_j, p_k), int8, shape (n, n, n)."""
        c = self.coords
        x, y = c[:, 0], c[:, 1]
        dx = x[None, :] - x[:, None]  # dx[i, j] = x_j - x_i
        dy = y[None, :] - y[:, None]
        # (p_j - p_i) x (p_k - p_i) equals (p_j - p_i) x (p_k - p_j)
        det = dx[:, :, None] * dy[:, None, :] - dy[:, :, None] * dx[:, None, :]
        return np.sign(det).astype(np.int8)

    @functools.cached_property
    def hull(self) -> tuple[int, ...]:
        return tuple(convex_hull(self))

    @functools.cached_property
    def hull_set(self) -> frozenset[int]:
        return frozenset(self.hull)

    @functools.cached_property
    def interior(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n) if i not in self.hull_set)

    @functools.cached_property
    def hull_edges(self) -> frozenset[Edge]:
        h = self.hull
        return frozenset(edge(h[t], h[(t + 1) % len(h)]) for t in range(len(h)))

    @functools.cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(combinations(range(self.n), 2))

    @functools.cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: t for t, e in enumerate(self.edges)}

    @functools.cached_property
    def y_max(self) -> int:
        return max(y for _, y in self.points)


def convex_hull(ps: PointSet) -> list[int]:
    """CCW hull indices starting at the lexicographically least point."""
    order = sorted(range(ps.n), key=lambda i: ps.points[i])
    pts = ps.points

    def chain(seq):
        out: list[int] = []
        for i in seq:
            while len(out) >= 2 and cross(pts[out[-2]], pts[out[-1]], pts[i]) <= 0:
                out.pop()
            out.append(i)
        return out

    lower = chain(order)
    upper = chain(reversed(order))
    return lower[:-1] + upper[:-1]


def _half(d: Point, v: Point) -> int:
    # 0 for angles in [0, 180] measured CCW from d, 1 for (180, 360)
    c = d[0] * v[1] - d[1] * v[0]
    return 0 if c >= 0 else 1


def angular_sort(center: Point, direction: Point, others: Sequence[tuple[int, Point]]) -> list[int]:
    """Sort (index, point) pairs CCW around ``center`` starting at ``direction``.

    ``direction`` is a vector, not a point.  Comparisons are exact.
    """
    cx, cy = center

    def key_cmp(a, b):
        va = (a[1][0] - cx, a[1][1] - cy)
        vb = (b[1][0] - cx, b[1][1] - cy)
        ha, hb = _half(direction, va), _half(direction, vb)
        if ha != hb:
            return ha - hb
        c = va[0] * vb[1] - va[1] * vb[0]
        if c != 0:
            return -1 if c > 0 else 1
        # same or opposite ray: the one aligned with ``direction`` comes first
        da = va[0] * direction[0] + va[1] * direction[1]
        db = vb[0] * direction[0] + vb[1] * direction[1]
        return (da < db) - (da > db)

    return [idx for idx, _ in sorted(others, key=functools.cmp_to_key(key_cmp))]


def ccw_order(i: int, q: Point, ps: PointSet) -> tuple[list[int], list[int]]:
    """Points other than i sorted CCW around the ray i -> q, split by side.

    The first list holds points with non-negative orientation w.r.t. the
    oriented line i -> q, the second the rest.
    """
    p = ps.points[i]
    d = (q[0] - p[0], q[1] - p[1])
    order = angular_sort(p, d, [(j, ps.points[j]) for j in range(ps.n) if j != i])
    plus = [j for j in order if cross(p, q, ps.points[j]) >= 0]
    minus = [j for j in order if cross(p, q, ps.points[j]) < 0]
    return plus, minus


def upward(i: int, ps: PointSet) -> Point:
    """The reference point (x_i, y_max + 1) used for every vertex ordering."""
    return (ps.points[i][0], ps.y_max + 1)


def segments_cross(e1: Edge, e2: Edge, ps: PointSet) -> bool:
    """True iff the open segments properly cross."""
    a, b = e1
    c, d = e2
    if len({a, b, c, d}) < 4:
        return False
    return ps.orient(a, b, c) * ps.orient(a, b, d) < 0 and ps.orient(c, d, a) * ps.orient(c, d, b) < 0


def crossing_matrix(ps: PointSet) -> np.ndarray:
    """Boolean matrix over ``ps.edges`` marking properly crossing pairs."""
    S = ps.orientation_tensor.astype(np.int16)
    E = np.array(ps.edges, dtype=np.intp).reshape(-1, 2)
    a, b = E[:, 0], E[:, 1]
    # side[e, v] = orientation of vertex v relative to edge e
    side = S[a, b, :]
    s1 = side[:, a] * side[:, b]  # s1[e, f]: endpoints of f against e
    X = (s1 < 0) & (s1.T < 0)
    return X


def crossing_pairs(ps: PointSet) -> set[tuple[Edge, Edge]]:
    X = crossing_matrix(ps)
    E = ps.edges
    rows, cols = np.nonzero(np.triu(X, 1))
    return {(E[r], E[c]) for r, c in zip(rows.tolist(), cols.tolist())}


def twice_area(poly: Sequence[int], ps: PointSet) -> int:
    """Twice the signed area of the polygon with the given vertex indices."""
    pts = ps.points
    s = 0
    t = len(poly)
    for a in range(t):
        x1, y1 = pts[poly[a]]
        x2, y2 = pts[poly[(a + 1) % t]]
        s += x1 * y2 - x2 * y1
    return s


def point_in_convex(poly: Sequence[int], p: Point, ps: PointSet, strict: bool = True) -> bool:
    """Containment test for a CCW convex polygon given by indices."""
    pts = ps.points
    t = len(poly)
    for a in range(t):
        c = cross(pts[poly[a]], pts[poly[(a + 1) % t]], p)
        if c < 0 or (strict and c == 0):
            return False
    return True
