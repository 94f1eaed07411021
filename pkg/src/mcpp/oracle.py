"""Brute-force ground truth for small instances.

``brute_force_optimum`` solves the exact cover of the wedge set by empty
convex polygons with a memoised search; ``brute_force_arrangement_faces``
builds the full segment arrangement in rational arithmetic.
"""
from __future__ import annotations

import sys
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .geometry import PointSet, angular_sort, cross, segments_cross
from .polygons import CapExceeded, ConvexPolygon, enumerate_polyset
from .validity import partition_problems
from .wedges import build_wedge_index, wedges_of_polygon

OPTIMUM_CAP = 14
ARRANGEMENT_CAP = 8


class InvalidOracleResult(AssertionError):
    pass


def brute_force_optimum(ps: PointSet, cap: int = OPTIMUM_CAP) -> tuple[int, list[ConvexPolygon]]:
    if ps.n > cap:
        raise CapExceeded(f"oracle limited to n <= {cap}")
    wi = build_wedge_index(ps)
    polys = enumerate_polyset(ps)
    masks = [sum(1 << w for w in wedges_of_polygon(p.vertices, wi)) for p in polys]
    by_low: dict[int, list[int]] = {}
    for a, m in enumerate(masks):
        for w in range(wi.W):
            if m >> w & 1:
                by_low.setdefault(w, []).append(a)
    full = (1 << wi.W) - 1
    # try big polygons first so that good covers are met early
    for w in by_low:
        by_low[w].sort(key=lambda a: -bin(masks[a]).count("1"))

    @lru_cache(maxsize=None)
    def best(covered: int) -> tuple[int, tuple[int, ...]]:
        if covered == full:
            return 0, ()
        free = ~covered & full
        w = (free & -free).bit_length() - 1
        out = (sys.maxsize, ())
        for a in by_low.get(w, ()):
            if masks[a] & covered:
                continue
            k, rest = best(covered | masks[a])
            if k + 1 < out[0]:
                out = (k + 1, (a,) + rest)
        return out

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 10 * wi.W + 100))
    try:
        value, chosen = best(0)
    finally:
        sys.setrecursionlimit(old)
        best.cache_clear()
    partition = sorted(polys[a] for a in chosen)
    problems = partition_problems(ps, [p.vertices for p in partition], wi)
    if problems:
        raise InvalidOracleResult("; ".join(problems))
    return value, partition


def validate_partition(ps: PointSet, polygons) -> list[str]:
    return partition_problems(ps, [tuple(p) for p in polygons], build_wedge_index(ps))


# ---------------------------------------------------------------- arrangement

Q = tuple[Fraction, Fraction]


def _intersection(p, q, r, s) -> Q:
    d = (q[0] - p[0]) * (s[1] - r[1]) - (q[1] - p[1]) * (s[0] - r[0])
    t = Fraction((r[0] - p[0]) * (s[1] - r[1]) - (r[1] - p[1]) * (s[0] - r[0]), d)
    return (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))


def brute_force_arrangement_faces(ps: PointSet, cap: int = ARRANGEMENT_CAP):
    """Bounded faces of the segment arrangement.

    Returns ``(faces, counts)`` where each face is ``(vertex_cycle, tags)``:
    the CCW cycle of rational vertices and the input point indices on its
    boundary.  ``counts`` is ``(V, E, F)`` including the outer face.
    """
    if ps.n > cap:
        raise CapExceeded(f"arrangement oracle limited to n <= {cap}")
    pts = [(Fraction(x), Fraction(y)) for x, y in ps.points]
    segs = list(ps.edges)
    on_seg: dict[int, list[Q]] = {s: [pts[segs[s][0]], pts[segs[s][1]]] for s in range(len(segs))}
    for s, t in combinations(range(len(segs)), 2):
        if segments_cross(segs[s], segs[t], ps):
            a, b = segs[s]
            c, d = segs[t]
            x = _intersection(ps.points[a], ps.points[b], ps.points[c], ps.points[d])
            on_seg[s].append(x)
            on_seg[t].append(x)
    adj: dict[Q, set[Q]] = {}
    for s, plist in on_seg.items():
        plist = sorted(set(plist))
        for u, v in zip(plist, plist[1:]):
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
    V = len(adj)
    E = sum(len(v) for v in adj.values()) // 2
    ring = {}
    for v, ns in adj.items():
        order = angular_sort(v, (1, 0), list(enumerate(ns_list := sorted(ns))))
        seq = [ns_list[i] for i in order]
        ring[v] = {u: seq[a - 1] for a, u in enumerate(seq)}
    seen = set()
    faces = []
    nfaces = 0
    index_of = {pts[i]: i for i in range(ps.n)}
    for u in adj:
        for v in adj[u]:
            if (u, v) in seen:
                continue
            cyc = []
            a, b = u, v
            while (a, b) not in seen:
                seen.add((a, b))
                cyc.append(a)
                a, b = b, ring[b][a]
            nfaces += 1
            area = sum(cyc[t][0] * cyc[(t + 1) % len(cyc)][1] - cyc[(t + 1) % len(cyc)][0] * cyc[t][1]
                       for t in range(len(cyc)))
            if area > 0:
                tags = sorted(index_of[p] for p in cyc if p in index_of)
                faces.append((cyc, tags))
    if V - E + nfaces != 2:
        raise InvalidOracleResult(f"Euler check failed: {V} - {E} + {nfaces} != 2")
    return faces, (V, E, nfaces)


def face_wedge_count(ps: PointSet, cap: int = ARRANGEMENT_CAP) -> int:
    """Number of (face, incident input point) pairs: equals the wedge count."""
    faces, _ = brute_force_arrangement_faces(ps, cap)
    return sum(len(tags) for _, tags in faces)


def face_in_polygon(cyc, poly, ps: PointSet) -> bool:
    """Is the face (rational cycle) inside the convex CCW polygon?"""
    cx = sum(p[0] for p in cyc) / len(cyc)
    cy = sum(p[1] for p in cyc) / len(cyc)
    c = (cx, cy)
    t = len(poly)
    return all(cross(ps.points[poly[a]], ps.points[poly[(a + 1) % t]], c) > 0 for a in range(t))
