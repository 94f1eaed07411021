"""Geometric acceptance checks for convex partitions.

Nothing here trusts the wedge bookkeeping: areas, convexity, emptiness and
interior-disjointness are all decided with exact integer predicates.  The
optional wedge exact-cover test is an additional, separate check.
"""
from __future__ import annotations

from collections import Counter
from typing import Sequence

from .geometry import PointSet, cross, point_in_convex, twice_area


def _convex_ccw(poly: Sequence[int], ps: PointSet) -> bool:
    t = len(poly)
    if t < 3 or len(set(poly)) != t:
        return False
    pts = ps.points
    if any(cross(pts[poly[a - 1]], pts[poly[a]], pts[poly[(a + 1) % t]]) <= 0 for a in range(t)):
        return False
    v0, v1 = pts[poly[0]], pts[poly[1]]
    return all(cross(v0, v1, pts[poly[j]]) > 0 for j in range(2, t))


def _separated(a: Sequence[int], b: Sequence[int], ps: PointSet) -> bool:
    pts = ps.points
    for poly, other in ((a, b), (b, a)):
        t = len(poly)
        for s in range(t):
            p, q = pts[poly[s]], pts[poly[(s + 1) % t]]
            if all(cross(p, q, pts[v]) <= 0 for v in other):
                return True
    return False


def partition_problems(ps: PointSet, polygons: Sequence[Sequence[int]], wi=None) -> list[str]:
    """Everything wrong with ``polygons`` as a convex partition of ``ps``."""
    problems: list[str] = []
    polys = [tuple(p) for p in polygons]
    for p in polys:
        if not _convex_ccw(p, ps):
            problems.append(f"{p} is not a strictly convex CCW polygon")
            continue
        inside = [i for i in range(ps.n) if i not in p and point_in_convex(p, ps.points[i], ps)]
        if inside:
            problems.append(f"{p} contains points {inside}")
    area = sum(twice_area(p, ps) for p in polys)
    hull_area = twice_area(ps.hull, ps)
    if area != hull_area:
        problems.append(f"twice-area {area} differs from hull twice-area {hull_area}")
    for x in range(len(polys)):
        for y in range(x + 1, len(polys)):
            if not _separated(polys[x], polys[y], ps):
                problems.append(f"{polys[x]} and {polys[y]} overlap")
    if wi is not None and not problems:
        from .wedges import wedges_of_polygon

        cover = Counter(w for p in polys for w in wedges_of_polygon(p, wi))
        bad = [w for w in range(wi.W) if cover[w] != 1]
        if bad:
            problems.append(f"wedges not covered exactly once: {bad[:10]}")
    return problems


def is_valid_partition(ps: PointSet, polygons: Sequence[Sequence[int]], wi=None) -> bool:
    return not partition_problems(ps, polygons, wi)


def partition_edges(ps: PointSet, polygons: Sequence[Sequence[int]]) -> list[tuple[int, int]]:
    out = set()
    for p in polygons:
        t = len(p)
        for a in range(t):
            i, j = p[a], p[(a + 1) % t]
            out.add((min(i, j), max(i, j)))
    return sorted(out)


def upper_bound(n: int) -> int:
    """Ceiling of (10n - 18) / 7, the best known worst-case partition size."""
    return -((18 - 10 * n) // 7)
