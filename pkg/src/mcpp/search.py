"""Branch-and-cut-and-price over polygon columns with edge branching."""
from __future__ import annotations

import heapq
import json
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .compact import build_compact, extract_faces, solve_compact
from .config import SolverConfig
from .geometry import Edge, PointSet, crossing_matrix
from .heuristics import Incumbent, delaunay, greedy_triangulation, heuristic_partition
from .master import INTEGRALITY_TOL, Relaxation, RmpState
from .polygons import EmptyTriangleTable, FanOrder, empty_triangles, enumerate_polyset
from .pricing import NEGATIVE_THRESHOLD, DualVector, Pricer, reduced_cost, set_forbidden_edges
from .validity import partition_problems
from .wedges import build_wedge_index

log = logging.getLogger("mcpp")

CEIL_TOL = 1e-6
PHASE1_TOL = 1e-7


class NoFractionalEdge(RuntimeError):
    pass


class ConflictingFixing(ValueError):
    pass


def ceil_tol(v: float) -> int:
    return math.ceil(v - CEIL_TOL)


def lagrangian_bounds(z: float, rc_min: float, kappa: float) -> tuple[float, float]:
    """(z + kappa * c, z / (1 - c)) for the most negative reduced cost c <= 0."""
    c = min(rc_min, 0)  # int literals keep Fraction inputs exact
    return z + kappa * c, z / (1 - c)


def early_stop(z: float, unit_bound: float) -> bool:
    return ceil_tol(z) == ceil_tol(unit_bound)


def smooth_duals(current: DualVector, center: DualVector | None, lam: float) -> DualVector:
    if center is None or lam == 0.0:
        return current
    return DualVector(
        current.alpha + lam * (center.alpha - current.alpha),
        current.beta + lam * (center.beta - current.beta),
        current.gamma.copy(),
    )


@dataclass(order=True)
class BnpNode:
    bound: float
    order: int
    fixings: dict = field(compare=False, default_factory=dict)
    depth: int = field(compare=False, default=0)
    parent: int | None = field(compare=False, default=None)
    fixing: tuple | None = field(compare=False, default=None)


def select_branch_edge(x: np.ndarray, ps: PointSet, fixings: Mapping[Edge, int],
                       crossings: np.ndarray) -> Edge:
    """Most crossed edge among those within 0.1 of the most fractional."""
    hull = ps.hull_edges
    frac_d = np.abs(x - np.round(x))
    cand = [t for t, e in enumerate(ps.edges)
            if e not in fixings and e not in hull and frac_d[t] > INTEGRALITY_TOL]
    if not cand:
        raise NoFractionalEdge("polygon values fractional while every edge value is integral")
    dist = {t: abs(0.5 - x[t]) for t in cand}
    lo = min(dist.values())
    window = [t for t in cand if dist[t] <= lo + 0.1 + 1e-12]
    best = min(window, key=lambda t: (-int(crossings[t]), ps.edges[t]))
    return ps.edges[best]


def apply_branch(node: BnpNode, e: Edge, value: int, ps: PointSet, cross: np.ndarray,
                 order: int) -> BnpNode:
    fix = dict(node.fixings)
    if e in fix:
        raise ConflictingFixing(f"{e} already fixed")
    if e in ps.hull_edges and value == 0:
        raise ConflictingFixing(f"hull edge {e} cannot be removed")
    fix[e] = value
    if value == 1:
        t = ps.edge_index[e]
        for s in np.nonzero(cross[t])[0]:
            f = ps.edges[s]
            if fix.get(f) == 1 or f in ps.hull_edges:
                raise ConflictingFixing(f"{e} crosses fixed edge {f}")
            fix[f] = 0
    return BnpNode(node.bound, order, fix, node.depth + 1, node.order, (e[0], e[1], value))


@dataclass
class Stats:
    nodes: int = 0
    pricing_rounds: int = 0
    columns: int = 0
    cuts: int = 0
    seconds: float = 0.0
    root_bound: float = math.nan
    root_lp: float = math.nan
    fractional_nodes: int = 0
    no_fractional_edge: int = 0


@dataclass
class SolveResult:
    incumbent: Incumbent
    status: str  # "Optimal" | "TimeLimit"
    bound: float
    stats: Stats
    audit: list[dict] = field(default_factory=list)

    @property
    def value(self) -> int:
        return self.incumbent.value


@dataclass
class NodeOutcome:
    kind: str  # Integral | Fractional | Pruned | Infeasible | TimeLimit
    bound: float
    branch_edge: Edge | None = None
    columns_added: int = 0
    cuts_added: int = 0
    relaxation: Relaxation | None = None


class BranchAndPrice:
    def __init__(self, ps: PointSet, config: SolverConfig):
        self.ps = ps
        self.cfg = config
        self.start = time.monotonic()
        self.table = EmptyTriangleTable(ps)
        self.wi = build_wedge_index(ps)
        self.fan = FanOrder(ps)
        self.pricer = Pricer(ps, self.wi, self.table, self.fan)
        self.cross = crossing_matrix(ps)
        self.crossings = self.cross.sum(axis=1)
        self.stats = Stats()
        self.audit: list[dict] = []
        self.pricing = config.mode == "cg"
        tri = delaunay(ps)
        self.incumbent = heuristic_partition(ps, tri, self._heuristic_cap(), config.lp_backend)
        self.incumbent.source = "delaunay-heuristic"
        self._check(self.incumbent)
        if config.mode == "full":
            if ps.n > config.full_max_n:
                raise ValueError(f"full mode is limited to n <= {config.full_max_n}")
            seed = enumerate_polyset(ps, self.table, self.fan, config.polygon_cap)
        else:
            seed = empty_triangles(ps, self.table)
        self.rmp = RmpState(ps, self.wi, seed, table=self.table, backend=config.lp_backend)
        self.rmp.add_polygon_columns(self.incumbent.partition)

    # -- helpers ------------------------------------------------------------------

    def _check(self, inc: Incumbent) -> None:
        problems = partition_problems(self.ps, [p.vertices for p in inc.partition], self.wi)
        if problems:
            raise AssertionError("invalid partition: " + "; ".join(problems))

    def _heuristic_cap(self) -> float:
        cap = self.cfg.heuristic_time_cap
        if self.cfg.time_limit is not None:
            cap = min(cap, max(0.0, self.cfg.time_limit - (time.monotonic() - self.start)))
        return cap

    def out_of_time(self) -> bool:
        tl = self.cfg.time_limit
        return tl is not None and time.monotonic() - self.start > tl

    def _offer(self, inc: Incumbent) -> bool:
        if inc.value < self.incumbent.value:
            self._check(inc)
            self.incumbent = inc
            log.info("incumbent %d (%s)", inc.value, inc.source)
            return True
        return False

    def _price(self, duals: DualVector, forbidden, cost: float):
        self.stats.pricing_rounds += 1
        return self.pricer.price(duals, forbidden, cost=cost, cap=self.cfg.column_cap,
                                 exclude=self.rmp.registry)

    # -- one node -----------------------------------------------------------------

    def process_node(self, node: BnpNode, prune: bool = True) -> NodeOutcome:
        """Price and cut one node.  ``prune=False`` runs the relaxation to
        convergence, ignoring the incumbent and the early-stop test."""
        rmp = self.rmp
        cutoff = self.incumbent.value if prune else math.inf
        if not rmp.apply_fixings(node.fixings):
            return NodeOutcome("Infeasible", math.inf)
        forbidden = rmp.forbidden_edges()
        lb = node.bound
        center: DualVector | None = None
        best_unit = -math.inf
        cols = cuts = 0
        first = True
        while True:
            if self.out_of_time():
                return NodeOutcome("TimeLimit", lb, columns_added=cols, cuts_added=cuts)
            rel = rmp.solve()
            if not rel.optimal:
                if rmp.phase == 1:
                    raise RuntimeError(f"phase-1 master returned {rel.status}")
                rmp.set_phase(1)
                continue
            if rmp.phase == 1:
                if rel.z <= PHASE1_TOL:
                    rmp.set_phase(2)
                    continue
                if not self.pricing:
                    rmp.set_phase(2)
                    return NodeOutcome("Infeasible", math.inf, columns_added=cols, cuts_added=cuts)
                res = self._price(rel.duals, forbidden, 0.0)
                added = rmp.add_polygon_columns(p for p, _ in res.columns)
                cols += added
                if not added:
                    rmp.set_phase(2)
                    return NodeOutcome("Infeasible", math.inf, columns_added=cols, cuts_added=cuts)
                continue
            z = rel.z
            if self.pricing:
                res = self._price(rel.duals, forbidden, 1.0)
                c = min(res.min_reduced_cost, 0.0)
            else:
                res, c = None, 0.0
            kb, ub = lagrangian_bounds(z, c, self.incumbent.value)  # valid for any kappa >= optimum
            lb = max(lb, kb, ub)
            if first and node.parent is None:
                self.stats.root_lp = z
            first = False
            if ub > best_unit:
                best_unit = ub
                center = rel.duals
            if ceil_tol(lb) >= cutoff:
                return NodeOutcome("Pruned", lb, columns_added=cols, cuts_added=cuts, relaxation=rel)
            converged = c >= NEGATIVE_THRESHOLD
            if not converged and not (prune and early_stop(z, ub)):
                new = self._columns(res, rel.duals, center, forbidden)
                added = rmp.add_polygon_columns(new)
                cols += added
                if added:
                    continue
                converged = True  # every negative column already present: numerical noise
            if converged:
                lb = max(lb, z)
                if ceil_tol(lb) >= cutoff:
                    return NodeOutcome("Pruned", lb, columns_added=cols, cuts_added=cuts, relaxation=rel)
            if self.cfg.degree_cuts:
                k = rmp.separate_degree_cuts(rel.x)
                if k:
                    cuts += k
                    self.stats.cuts += k
                    continue
            break
        part = rmp.integral_partition(rel)
        if part is not None:
            self._offer(Incumbent(part, "node-integral"))
            return NodeOutcome("Integral", lb, columns_added=cols, cuts_added=cuts, relaxation=rel)
        self.stats.fractional_nodes += 1
        if self.cfg.node_heuristic:
            tri = greedy_triangulation(self.ps, rel.x)
            inc = heuristic_partition(self.ps, tri, self._heuristic_cap(), self.cfg.lp_backend)
            inc.source = "lp-heuristic"
            self._offer(inc)
            rmp.add_polygon_columns(inc.partition)
            if ceil_tol(lb) >= cutoff:
                return NodeOutcome("Pruned", lb, columns_added=cols, cuts_added=cuts, relaxation=rel)
        try:
            e = select_branch_edge(rel.x, self.ps, node.fixings, self.crossings)
        except NoFractionalEdge:
            self.stats.no_fractional_edge += 1
            raise
        return NodeOutcome("Fractional", lb, e, cols, cuts, rel)

    def _columns(self, res, duals: DualVector, center: DualVector | None, forbidden) -> list:
        lam = self.cfg.smoothing
        if center is not None and lam > 0.0:
            sm = smooth_duals(duals, center, lam)
            alt = self._price(sm, forbidden, 1.0)
            true = set_forbidden_edges(duals, forbidden, self.ps)
            keep = [p for p, _ in alt.columns if reduced_cost(p, true, self.wi) < NEGATIVE_THRESHOLD]
            if keep:
                return keep
        return [p for p, _ in res.columns]  # mis-pricing guard: fall back to true duals

    def root_bound(self) -> float:
        """Converged root relaxation value (with cuts if enabled)."""
        out = self.process_node(BnpNode(-math.inf, 0), prune=False)
        return out.relaxation.z if out.relaxation is not None else out.bound

    # -- tree ---------------------------------------------------------------------

    def run(self) -> SolveResult:
        root = BnpNode(-math.inf, 0)
        heap: list[BnpNode] = []
        nxt: BnpNode | None = root
        order = 1
        status = "Optimal"
        open_bound = math.inf
        while nxt is not None or heap:
            node = nxt if nxt is not None else heapq.heappop(heap)
            nxt = None
            if node.bound > -math.inf and ceil_tol(node.bound) >= self.incumbent.value:
                self._log(node, "Pruned", node.bound, 0, 0)
                continue
            if self.out_of_time():
                heapq.heappush(heap, node)
                status = "TimeLimit"
                break
            self.stats.nodes += 1
            out = self.process_node(node)
            if node.parent is None:
                self.stats.root_bound = out.bound
            self._log(node, out.kind, out.bound, out.columns_added, out.cuts_added)
            if out.kind == "TimeLimit":
                node.bound = out.bound
                heapq.heappush(heap, node)
                status = "TimeLimit"
                break
            if out.kind != "Fractional":
                continue
            e = out.branch_edge
            node.bound = out.bound
            for v in (1, 0):
                try:
                    child = apply_branch(node, e, v, self.ps, self.cross, order)
                except ConflictingFixing:
                    self._log(BnpNode(out.bound, order, {}, node.depth + 1, node.order, (e[0], e[1], v)),
                              "Infeasible", math.inf, 0, 0)
                    order += 1
                    continue
                order += 1
                if v == 1 and nxt is None and ceil_tol(out.bound) < self.incumbent.value:
                    nxt = child  # plunge
                else:
                    heapq.heappush(heap, child)
        if status == "Optimal":
            bound = float(self.incumbent.value)
        else:
            pending = [n.bound for n in heap] + ([nxt.bound] if nxt is not None else [])
            open_bound = min(pending) if pending else self.incumbent.value
            lb = ceil_tol(open_bound) if open_bound > -math.inf else 1  # one polygon at least
            bound = float(min(self.incumbent.value, max(lb, 1)))
        self.stats.columns = len(self.rmp.polygons)
        self.stats.seconds = time.monotonic() - self.start
        self._flush_audit()
        return SolveResult(self.incumbent, status, bound, self.stats, self.audit)

    def _log(self, node: BnpNode, status: str, bound: float, cols: int, cuts: int) -> None:
        self.audit.append({
            "id": node.order,
            "parent": node.parent,
            "fixing": list(node.fixing) if node.fixing else None,
            "bound": None if not math.isfinite(bound) else round(bound, 9),
            "columns_added": cols,
            "cuts_added": cuts,
            "status": status,
        })

    def _flush_audit(self) -> None:
        if self.cfg.audit_log:
            with open(self.cfg.audit_log, "w") as fh:
                for rec in self.audit:
                    fh.write(json.dumps(rec) + "\n")


def solve(ps: PointSet, config: SolverConfig | None = None) -> SolveResult:
    cfg = config or SolverConfig()
    if cfg.mode in ("cg", "full"):
        return BranchAndPrice(ps, cfg).run()
    start = time.monotonic()
    if cfg.mode == "oracle":
        from .oracle import brute_force_optimum

        value, part = brute_force_optimum(ps)
        st = Stats(nodes=0, seconds=time.monotonic() - start)
        return SolveResult(Incumbent(part, "oracle"), "Optimal", float(value), st)
    cm = build_compact(ps)
    res = solve_compact(cm, time_cap=cfg.time_limit, backend=cfg.lp_backend,
                        incumbent=delaunay(ps).edges)
    faces = extract_faces(ps, res.edges)
    st = Stats(nodes=res.nodes, cuts=len(cm.cut_pairs), seconds=time.monotonic() - start,
               root_bound=res.root_bound)
    return SolveResult(Incumbent(faces, "compact"), res.status, float(res.bound), st)
