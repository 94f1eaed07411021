"""Column generation oracle: minimum reduced-cost empty convex polygons.

A polygon with leftmost vertex k is the fan of triangles (k, v_j, v_j+1).
Its reduced cost is ``cost - sum(alpha over covered wedges) - sum(beta over
boundary edges)``.  Writing

    delta(k, l, m) = -(alpha over the triangle's wedges) - (beta_kl + beta_lm + beta_km)

the fan sum double counts every diagonal's beta with a negative sign, so a
join across diagonal (k, l) adds ``2 * beta_kl`` back.  With that
convention the table

    B(k, l, m) = delta(k, l, m) + min(0, 2 beta_kl + min_o B(k, o, l))

over o before l with a left turn (o, l, m), is a true minimisation and
``cost + B`` is the reduced cost.  The candidate o's form a prefix that
grows as m sweeps counterclockwise around l, so each (k, l) is processed
with one running minimum (two pointers).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .geometry import Edge, PointSet, edge
from .polygons import ConvexPolygon, EmptyTriangleTable, FanOrder, canonical_key
from .wedges import WedgeIndex, wedges_of_polygon

NEGATIVE_THRESHOLD = -1e-6
DEFAULT_COLUMN_CAP = 200


@dataclass
class DualVector:
    alpha: np.ndarray  # one per wedge
    beta: np.ndarray  # one per edge, in ps.edges order
    gamma: np.ndarray  # one per degree cut

    def copy(self) -> "DualVector":
        return DualVector(self.alpha.copy(), self.beta.copy(), self.gamma.copy())


def zero_duals(wi: WedgeIndex) -> DualVector:
    return DualVector(np.zeros(wi.W), np.zeros(len(wi.ps.edges)), np.zeros(0))


def forbidden_penalty(duals: DualVector) -> float:
    return 10.0 * (1.0 + np.abs(duals.alpha).sum() + np.abs(duals.beta).sum())


def set_forbidden_edges(duals: DualVector, edges: Iterable[Edge], ps: PointSet) -> DualVector:
    """Copy of ``duals`` where every forbidden edge's beta is replaced by -M.

    In the reduced cost a boundary edge then contributes +M, while a fan
    diagonal still cancels, so only polygons that actually use a forbidden
    edge are penalised.
    """
    edges = list(edges)
    if not edges:
        return duals
    out = duals.copy()
    M = forbidden_penalty(duals)
    idx = [ps.edge_index[edge(*e)] for e in edges]
    out.beta[idx] = -M
    return out


def reduced_cost(poly: Sequence[int] | ConvexPolygon, duals: DualVector, wi: WedgeIndex,
                 cost: float = 1.0) -> float:
    """Direct evaluation, independent of the dynamic program."""
    v = tuple(poly)
    ps = wi.ps
    a = duals.alpha[wedges_of_polygon(v, wi)].sum()
    b = sum(duals.beta[ps.edge_index[edge(v[t], v[(t + 1) % len(v)])]] for t in range(len(v)))
    return float(cost - a - b)


@dataclass
class PricingResult:
    columns: list[tuple[ConvexPolygon, float]]
    min_reduced_cost: float
    best: ConvexPolygon | None = None


class Pricer:
    def __init__(self, ps: PointSet, wi: WedgeIndex, table: EmptyTriangleTable | None = None,
                 fan: FanOrder | None = None):
        self.ps = ps
        self.wi = wi
        self.table = table or EmptyTriangleTable(ps)
        self.fan = fan or FanOrder(ps)
        n = ps.n
        self.pos = wi.pos.copy()
        np.fill_diagonal(self.pos, 0)
        self.wrap = self.pos[:, None, :] < self.pos[:, :, None]  # wrap[i, a, b]: ray b precedes ray a
        E = np.array(ps.edges, dtype=np.intp).reshape(-1, 2)
        self._ei, self._ej = E[:, 0], E[:, 1]
        self._nonempty = ~self.table.table
        self.n = n

    # -- dual dependent tables ------------------------------------------------

    def beta_matrix(self, duals: DualVector) -> np.ndarray:
        Bm = np.zeros((self.n, self.n))
        Bm[self._ei, self._ej] = duals.beta
        Bm[self._ej, self._ei] = duals.beta
        return Bm

    def range_sums(self, alpha: np.ndarray) -> np.ndarray:
        """R[i, a, b]: alpha summed over i's wedges from ray i->a CCW to ray i->b."""
        n, wi = self.n, self.wi
        pre = np.zeros((n, n))
        tot = np.zeros(n)
        for i in range(n):
            s = alpha[wi.offset[i]: wi.offset[i] + wi.nslots[i]]
            c = np.cumsum(s)
            pre[i, 1: len(c) + 1] = c
            tot[i] = c[-1] if len(c) else 0.0
        G = np.take_along_axis(pre, self.pos, axis=1)  # G[i, j] = prefix at ray j
        return G[:, None, :] - G[:, :, None] + tot[:, None, None] * self.wrap

    def delta_tensor(self, duals: DualVector) -> np.ndarray:
        R = self.range_sums(duals.alpha)
        Bm = self.beta_matrix(duals)
        D = -(R + R.transpose(2, 0, 1) + R.transpose(1, 2, 0))
        D -= Bm[:, :, None] + Bm[None, :, :] + Bm[:, None, :]
        D[self._nonempty] = np.inf
        return D

    def triangle_delta(self, k: int, l: int, m: int, duals: DualVector,
                       forbidden: Iterable[Edge] = ()) -> float:
        duals = set_forbidden_edges(duals, forbidden, self.ps)
        if self.ps.orient(k, l, m) < 0:
            l, m = m, l
        return float(self.delta_tensor(duals)[k, l, m])

    # -- the sweep --------------------------------------------------------------

    def price(self, duals: DualVector, forbidden: Iterable[Edge] = (), cost: float = 1.0,
              cap: int = DEFAULT_COLUMN_CAP, exclude: set[ConvexPolygon] | None = None,
              threshold: float = NEGATIVE_THRESHOLD) -> PricingResult:
        duals = set_forbidden_edges(duals, forbidden, self.ps)
        D = self.delta_tensor(duals)
        Bm = self.beta_matrix(duals)
        n = self.n
        cands: list[tuple[float, int, int, int]] = []
        tables: list[tuple[np.ndarray, np.ndarray]] = []
        global_min = np.inf
        for k in range(n):
            B = np.full((n, n), np.inf)
            bp = np.full((n, n), -1, dtype=np.intp)
            for st in self.fan.steps[k]:
                l, before, after, reach = st.l, st.before, st.after, st.reach
                if not len(after):
                    continue
                vals = np.empty(len(before) + 1)
                vals[0] = 0.0
                vals[1:] = B[before, l] + 2.0 * Bm[k, l]
                run = np.minimum.accumulate(vals)
                prev = np.empty_like(run)
                prev[0] = np.inf
                prev[1:] = run[:-1]
                arg = np.maximum.accumulate(np.where(vals < prev, np.arange(len(vals)), 0))
                best = run[reach]
                barg = arg[reach]
                B[l, after] = best + D[k, l, after]
                bp[l, after] = np.where(barg > 0, before[np.maximum(barg - 1, 0)] if len(before) else -1, -1)
            tables.append((B, bp))
            mins = B.min(axis=1)
            argm = B.argmin(axis=1)
            for l in np.nonzero(np.isfinite(mins))[0].tolist():
                v = float(mins[l])
                global_min = min(global_min, v)
                if cost + v < threshold:
                    cands.append((cost + v, k, l, int(argm[l])))
        cands.sort()
        exclude = exclude or set()
        out: list[tuple[ConvexPolygon, float]] = []
        seen: set[ConvexPolygon] = set()
        best_poly = None
        for rc, k, l, m in cands:
            if len(out) >= cap:
                break
            B, bp = tables[k]
            poly = canonical_key(self._reconstruct(k, l, m, bp), self.ps)
            if best_poly is None:
                best_poly = poly
            if poly in seen or poly in exclude:
                continue
            seen.add(poly)
            out.append((poly, rc))
        out.sort(key=lambda t: (t[1], t[0]))
        min_rc = cost + global_min if np.isfinite(global_min) else cost
        return PricingResult(out, float(min_rc), best_poly)

    @staticmethod
    def _reconstruct(k: int, l: int, m: int, bp: np.ndarray) -> list[int]:
        chain = [m, l]
        o = int(bp[l, m])
        while o >= 0:
            chain.append(o)
            l, m = o, l
            o = int(bp[l, m])
        chain.append(k)
        chain.reverse()
        return chain

    def best_polygon(self, duals: DualVector, forbidden: Iterable[Edge] = (), cost: float = 1.0):
        """Global minimiser and its reduced cost, ignoring the output cap."""
        res = self.price(duals, forbidden, cost, cap=1, threshold=np.inf)
        return res.best, res.min_reduced_cost
