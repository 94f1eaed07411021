"""Point wedges: the arrangement faces incident to each input point.

Around every point ``i`` the other points are sorted counterclockwise.  Two
consecutive rays bound exactly one face of the segment arrangement that has
``i`` as a corner; that face is a *wedge* of ``i``.  Interior points own
``n - 1`` wedges (the rays wrap around).  Hull points skip the reflex gap
outside the hull, so their ray list starts at the next hull vertex and ends
at the previous one, giving ``n - 2`` wedges.

Faces are never built.  A wedge is identified by ``(owner, slot)`` and by a
dense global id ordered lexicographically by that pair.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .geometry import PointSet, angular_sort, cross, upward


class NotEmptyTriangle(ValueError):
    pass


@dataclass(frozen=True)
class WedgeId:
    owner: int
    slot: int
    global_id: int


@dataclass(frozen=True, eq=False)
class WedgeIndex:
    ps: PointSet
    rays: tuple[tuple[int, ...], ...]
    nslots: tuple[int, ...]
    offset: tuple[int, ...]
    pos: np.ndarray  # pos[i, j] = position of ray i->j in rays[i]; -1 on the diagonal

    @property
    def W(self) -> int:
        return self.offset[-1] + self.nslots[-1]

    def wedge(self, owner: int, slot: int) -> WedgeId:
        if not 0 <= slot < self.nslots[owner]:
            raise IndexError(f"point {owner} has {self.nslots[owner]} wedges")
        return WedgeId(owner, slot, self.offset[owner] + slot)

    def wedges(self) -> list[WedgeId]:
        return [self.wedge(i, s) for i in range(self.ps.n) for s in range(self.nslots[i])]

    @functools.cached_property
    def owner_of(self) -> np.ndarray:
        return np.repeat(np.arange(self.ps.n), self.nslots)

    def slots_between(self, i: int, a: int, b: int) -> list[int]:
        """Slots of ``i`` swept when turning CCW from ray i->a to ray i->b."""
        pa, pb = int(self.pos[i, a]), int(self.pos[i, b])
        ns = self.nslots[i]
        if pb > pa:
            return list(range(pa, pb))
        if ns == len(self.rays[i]) - 1:
            raise ValueError(f"angle ({a}, {i}, {b}) leaves the hull")
        return list(range(pa, ns)) + list(range(0, pb))


def build_wedge_index(ps: PointSet) -> WedgeIndex:
    n = ps.n
    hull = ps.hull
    h = len(hull)
    hull_next = {hull[t]: hull[(t + 1) % h] for t in range(h)}
    rays: list[tuple[int, ...]] = []
    nslots: list[int] = []
    for i in range(n):
        p = ps.points[i]
        q = upward(i, ps)
        order = angular_sort(p, (q[0] - p[0], q[1] - p[1]), [(j, ps.points[j]) for j in range(n) if j != i])
        if i in hull_next:
            start = order.index(hull_next[i])
            order = order[start:] + order[:start]
            nslots.append(n - 2)
        else:
            nslots.append(n - 1)
        rays.append(tuple(order))
    offset = [0]
    for s in nslots[:-1]:
        offset.append(offset[-1] + s)
    pos = np.full((n, n), -1, dtype=np.int64)
    for i, r in enumerate(rays):
        pos[i, list(r)] = np.arange(len(r))
    return WedgeIndex(ps, tuple(rays), tuple(nslots), tuple(offset), pos)


def _ccw(ps: PointSet, k: int, l: int, m: int) -> tuple[int, int, int]:
    return (k, l, m) if cross(ps[k], ps[l], ps[m]) > 0 else (k, m, l)


def wedge_ranges_of_triangle(k: int, l: int, m: int, wi: WedgeIndex,
                             table=None) -> dict[int, list[int]]:
    """Slots covered by the triangle at each of its corners.

    With ``table`` given (an EmptyTriangleTable) the emptiness precondition
    is checked.
    """
    if table is not None and not table.is_empty(k, l, m):
        raise NotEmptyTriangle((k, l, m))
    a, b, c = _ccw(wi.ps, k, l, m)
    return {
        a: wi.slots_between(a, b, c),
        b: wi.slots_between(b, c, a),
        c: wi.slots_between(c, a, b),
    }


def wedges_of_polygon(vertices: Sequence[int], wi: WedgeIndex) -> list[int]:
    """Global ids of the wedges covered by an empty convex CCW polygon."""
    t = len(vertices)
    out: list[int] = []
    for a in range(t):
        v = vertices[a]
        nxt, prv = vertices[(a + 1) % t], vertices[a - 1]
        base = wi.offset[v]
        out.extend(base + s for s in wi.slots_between(v, nxt, prv))
    out.sort()
    return out


def wedges_via_fan(vertices: Sequence[int], wi: WedgeIndex) -> list[int]:
    """Same set as ``wedges_of_polygon``, assembled from fan triangles."""
    v0 = vertices[0]
    out: set[int] = set()
    for j in range(1, len(vertices) - 1):
        for owner, slots in wedge_ranges_of_triangle(v0, vertices[j], vertices[j + 1], wi).items():
            out.update(wi.offset[owner] + s for s in slots)
    return sorted(out)
