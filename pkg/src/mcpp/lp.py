"""Linear programming substrate.

``LpModel`` is a mutable, sparse column/row container.  Two backends solve
it behind the same ``solve`` call:

* ``"simplex"``: the bundled dense revised simplex (bounded variables,
  two phases with artificials, explicit basis inverse refreshed every 100
  pivots, Bland's rule once degenerate pivots pile up).
* ``"highs"``: a persistent HiGHS instance (``highspy``) kept in sync with
  the model, so added columns and rows re-solve from the previous basis.
* ``"linprog"``: a stateless adapter over ``scipy.optimize.linprog``.

Sign convention for duals (both backends): minimisation, ``y_i`` is the
derivative of the optimum with respect to ``rhs_i``; so ``>=`` rows carry
``y >= 0``, ``<=`` rows ``y <= 0`` and ``=`` rows are free.  The reduced
cost of column j is ``c_j - sum_i a_ij y_i``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp

INF = math.inf
FEAS_TOL = 1e-7
OPT_TOL = 1e-9
REFACTOR_EVERY = 100


class Sense(str, enum.Enum):
    EQ = "="
    GE = ">="
    LE = "<="


class Status(str, enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"
    ITERATION_LIMIT = "IterationLimit"


@dataclass
class LpSolution:
    status: Status
    objective: float = math.nan
    x: np.ndarray = field(default_factory=lambda: np.zeros(0))
    duals: np.ndarray = field(default_factory=lambda: np.zeros(0))
    iterations: int = 0
    basis: "Basis | None" = None

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


@dataclass
class Basis:
    """Warm-start hint: basic variable ids and nonbasic positions.

    Variable ids: structural columns first, then one logical per row.
    """

    ncols: int
    nrows: int
    basic: list[int]
    at_upper: set[int]


class LpModel:
    def __init__(self):
        self.cost: list[float] = []
        self.lo: list[float] = []
        self.hi: list[float] = []
        self.sense: list[Sense] = []
        self.rhs: list[float] = []
        self._r: list[int] = []
        self._c: list[int] = []
        self._v: list[float] = []
        self._csc: sp.csc_matrix | None = None
        self.basis: Basis | None = None
        self._dirty: set[int] = set()  # columns whose cost or bounds changed
        self._highs: "_HighsSync | None" = None

    @property
    def ncols(self) -> int:
        return len(self.cost)

    @property
    def nrows(self) -> int:
        return len(self.rhs)

    def add_row(self, sense: Sense | str, rhs: float, entries: Mapping[int, float] | None = None) -> int:
        i = len(self.rhs)
        self.sense.append(Sense(sense))
        self.rhs.append(float(rhs))
        for j, a in (entries or {}).items():
            if not 0 <= j < self.ncols:
                raise IndexError(f"column {j} out of range")
            if a:
                self._r.append(i)
                self._c.append(j)
                self._v.append(float(a))
        self._csc = None
        return i

    def add_rows(self, rows: Iterable[tuple[Sense | str, float, Mapping[int, float]]]) -> list[int]:
        return [self.add_row(s, b, e) for s, b, e in rows]

    def add_column(self, cost: float, entries: Mapping[int, float] | None = None,
                   lo: float = 0.0, hi: float = INF) -> int:
        if lo > hi:
            raise ValueError("lo > hi")
        j = len(self.cost)
        self.cost.append(float(cost))
        self.lo.append(float(lo))
        self.hi.append(float(hi))
        for i, a in (entries or {}).items():
            if not 0 <= i < self.nrows:
                raise IndexError(f"row {i} out of range")
            if a:
                self._r.append(i)
                self._c.append(j)
                self._v.append(float(a))
        self._csc = None
        return j

    def add_columns(self, cols: Iterable[tuple[float, Mapping[int, float]]]) -> list[int]:
        return [self.add_column(c, e) for c, e in cols]

    def set_bounds(self, j: int, lo: float, hi: float) -> None:
        if lo > hi:
            raise ValueError("lo > hi")
        self.lo[j] = float(lo)
        self.hi[j] = float(hi)
        self._dirty.add(j)

    fix_column_bounds = set_bounds

    def set_cost(self, j: int, c: float) -> None:
        self.cost[j] = float(c)
        self._dirty.add(j)

    def matrix(self) -> sp.csc_matrix:
        if self._csc is None or self._csc.shape != (self.nrows, self.ncols):
            A = sp.coo_matrix((self._v, (self._r, self._c)), shape=(self.nrows, self.ncols))
            self._csc = A.tocsc()
            self._csc.sum_duplicates()
        return self._csc

    def to_lp_text(self, names: Mapping[int, str] | None = None) -> str:
        """CPLEX-style LP text (objective, constraints, bounds sections)."""
        names = names or {}

        def var(j):
            return names.get(j, f"x{j}")

        def terms(pairs):
            out = []
            for j, a in pairs:
                sign = "-" if a < 0 else "+"
                out.append(f"{sign} {abs(a):.12g} {var(j)}")
            s = " ".join(out) if out else "0 x0"
            return s[2:] if s.startswith("+ ") else s

        A = self.matrix().tocsr()
        lines = ["Minimize", " obj: " + terms((j, c) for j, c in enumerate(self.cost) if c), "Subject To"]
        for i in range(self.nrows):
            row = A.getrow(i)
            pairs = sorted(zip(row.indices.tolist(), row.data.tolist()))
            lines.append(f" r{i}: {terms(pairs)} {self.sense[i].value} {self.rhs[i]:.12g}")
        lines.append("Bounds")
        for j in range(self.ncols):
            lo = "-inf" if self.lo[j] == -INF else f"{self.lo[j]:.12g}"
            hi = "+inf" if self.hi[j] == INF else f"{self.hi[j]:.12g}"
            lines.append(f" {lo} <= {var(j)} <= {hi}")
        lines.append("End")
        return "\n".join(lines) + "\n"


def solve(model: LpModel, warm_hint: Basis | None = None, backend: str = "simplex",
          max_iter: int | None = None) -> LpSolution:
    if backend == "simplex":
        return _Simplex(model, max_iter).run(warm_hint if warm_hint is not None else model.basis)
    if backend == "highs":
        if model._highs is None:
            model._highs = _HighsSync()
        return model._highs.solve(model)
    if backend == "linprog":
        return _solve_highs(model)
    raise ValueError(f"unknown LP backend {backend!r}")


# ---------------------------------------------------------------- HiGHS


def _solve_highs(model: LpModel) -> LpSolution:
    from scipy.optimize import linprog

    m, n = model.nrows, model.ncols
    A = model.matrix().tocsr()
    sense = np.array([s.value for s in model.sense]) if m else np.zeros(0, dtype="<U2")
    rhs = np.array(model.rhs, dtype=float)
    eq = np.nonzero(sense == "=")[0]
    ge = np.nonzero(sense == ">=")[0]
    le = np.nonzero(sense == "<=")[0]
    ub_rows = np.concatenate([le, ge])
    A_ub = sp.vstack([A[le], -A[ge]]).tocsc() if len(ub_rows) else None
    b_ub = np.concatenate([rhs[le], -rhs[ge]]) if len(ub_rows) else None
    A_eq = A[eq].tocsc() if len(eq) else None
    b_eq = rhs[eq] if len(eq) else None
    bounds = list(zip(model.lo, [None if h == INF else h for h in model.hi]))
    bounds = [(None if lo == -INF else lo, hi) for lo, hi in bounds]
    if n == 0:
        feasible = all(
            (s == Sense.EQ and abs(b) <= FEAS_TOL) or (s == Sense.GE and b <= FEAS_TOL) or (s == Sense.LE and b >= -FEAS_TOL)
            for s, b in zip(model.sense, model.rhs)
        )
        return LpSolution(Status.OPTIMAL if feasible else Status.INFEASIBLE, 0.0, np.zeros(0), np.zeros(m))
    res = linprog(np.array(model.cost), A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                  bounds=bounds, method="highs")
    status = {0: Status.OPTIMAL, 1: Status.ITERATION_LIMIT, 2: Status.INFEASIBLE, 3: Status.UNBOUNDED}.get(
        res.status, Status.INFEASIBLE)
    if status is not Status.OPTIMAL:
        return LpSolution(status, iterations=int(getattr(res, "nit", 0) or 0))
    y = np.zeros(m)
    if len(eq):
        y[eq] = res.eqlin.marginals
    if len(ub_rows):
        mu = res.ineqlin.marginals
        y[le] = mu[: len(le)]
        y[ge] = -mu[len(le):]
    return LpSolution(Status.OPTIMAL, float(res.fun), np.asarray(res.x, dtype=float), y, int(res.nit))


class _HighsSync:
    """Incremental mirror of an LpModel inside one ``highspy.Highs`` object.

    Triplets are append-only and always created together with a new row or
    column, so each sync pushes new rows (entries on known columns) and
    then new columns (entries on all rows).
    """

    def __init__(self):
        import highspy

        self.hp = highspy
        self.h = highspy.Highs()
        for k, v in (("output_flag", False), ("threads", 1), ("random_seed", 0),
                     ("primal_feasibility_tolerance", FEAS_TOL), ("dual_feasibility_tolerance", OPT_TOL)):
            self.h.setOptionValue(k, v)
        self.rows = self.cols = self.nnz = 0

    def _row_bounds(self, sense: Sense, b: float) -> tuple[float, float]:
        if sense is Sense.EQ:
            return b, b
        if sense is Sense.GE:
            return b, INF
        return -INF, b

    def sync(self, model: LpModel) -> None:
        h = self.h
        r0, c0, k0 = self.rows, self.cols, self.nnz
        r = np.asarray(model._r[k0:], dtype=np.int32)
        c = np.asarray(model._c[k0:], dtype=np.int32)
        v = np.asarray(model._v[k0:], dtype=float)
        for j in sorted(model._dirty):
            if j < c0:
                h.changeColBounds(j, model.lo[j], model.hi[j])
                h.changeColCost(j, model.cost[j])
        model._dirty.clear()
        m, n = model.nrows, model.ncols
        if m > r0:
            sel = c < c0
            rr, cc, vv = r[sel], c[sel], v[sel]
            order = np.lexsort((cc, rr))
            rr, cc, vv = rr[order], cc[order], vv[order]
            starts = np.searchsorted(rr, np.arange(r0, m)).astype(np.int32)
            lo, hi = zip(*(self._row_bounds(model.sense[i], model.rhs[i]) for i in range(r0, m)))
            h.addRows(m - r0, np.array(lo), np.array(hi), len(vv), starts, cc, vv)
        if n > c0:
            sel = c >= c0
            rr, cc, vv = r[sel], c[sel], v[sel]
            order = np.lexsort((rr, cc))
            rr, cc, vv = rr[order], cc[order], vv[order]
            starts = np.searchsorted(cc, np.arange(c0, n)).astype(np.int32)
            h.addCols(n - c0, np.array(model.cost[c0:]), np.array(model.lo[c0:]),
                      np.array(model.hi[c0:]), len(vv), starts, rr, vv)
        self.rows, self.cols, self.nnz = m, n, len(model._v)

    def solve(self, model: LpModel) -> LpSolution:
        self.sync(model)
        h = self.h
        m, n = model.nrows, model.ncols
        if n == 0 or m == 0:
            return _solve_highs(model)
        h.run()
        st = h.getModelStatus()
        MS = self.hp.HighsModelStatus
        it = int(h.getInfo().simplex_iteration_count)
        if st == MS.kInfeasible:
            return LpSolution(Status.INFEASIBLE, iterations=it)
        if st in (MS.kUnbounded, MS.kUnboundedOrInfeasible):
            # disambiguate with a cold stateless solve
            return _solve_highs(model)
        if st != MS.kOptimal:
            return LpSolution(Status.ITERATION_LIMIT, iterations=it)
        sol = h.getSolution()
        x = np.array(sol.col_value, dtype=float)
        y = np.array(sol.row_dual, dtype=float)
        return LpSolution(Status.OPTIMAL, float(h.getInfo().objective_function_value), x, y, it)


# -------------------------------------------------------------- simplex


class _Simplex:
    """Bounded-variable primal revised simplex on a dense basis inverse.

    Variables: n structurals, m logicals (row i reads a_i x + s_i = b_i),
    and, during phase 1, one artificial per row.
    """

    def __init__(self, model: LpModel, max_iter: int | None):
        self.model = model
        m, n = model.nrows, model.ncols
        self.m, self.n = m, n
        A = model.matrix()
        self.A = sp.hstack([A, sp.identity(m, format="csc")], format="csc") if m else A
        self.cost = np.concatenate([np.array(model.cost, dtype=float), np.zeros(m)])
        slo = np.array([0.0 if s != Sense.GE else -INF for s in model.sense])
        shi = np.array([0.0 if s != Sense.LE else INF for s in model.sense])
        self.lo = np.concatenate([np.array(model.lo, dtype=float), slo])
        self.hi = np.concatenate([np.array(model.hi, dtype=float), shi])
        self.b = np.array(model.rhs, dtype=float)
        self.max_iter = max_iter or 50 * (m + n) + 1000
        self.iterations = 0

    # columns of the current (possibly extended) variable set
    def _col(self, j: int) -> np.ndarray:
        if j < self.A.shape[1]:
            return self.A[:, j].toarray().ravel()
        r = j - self.A.shape[1]
        e = np.zeros(self.m)
        e[r] = self.art_sign[r]
        return e

    def _nonbasic_value(self, j: int, upper: bool) -> float:
        lo, hi = self.lo[j], self.hi[j]
        if upper and hi < INF:
            return hi
        if lo > -INF:
            return lo
        if hi < INF:
            return hi
        return 0.0

    def run(self, hint: Basis | None) -> LpSolution:
        m, n = self.m, self.n
        if m == 0:
            return self._trivial()
        if hint is not None and self._try_warm(hint):
            st = self._iterate(self.cost_full(phase=2))
            return self._finish(st)
        self._cold_start()
        st = self._iterate(self.cost_full(phase=1))
        if st is not Status.OPTIMAL:
            return LpSolution(st, iterations=self.iterations)
        if self.x[self.N:].sum() > FEAS_TOL * max(1.0, np.abs(self.b).max()):
            return LpSolution(Status.INFEASIBLE, iterations=self.iterations)
        # artificials are frozen at zero; basic ones stay as degenerate fixed columns
        self.lo[self.N:] = 0.0
        self.hi[self.N:] = 0.0
        self.x[self.N:] = 0.0
        st = self._iterate(self.cost_full(phase=2))
        return self._finish(st)

    def _trivial(self) -> LpSolution:
        n = self.n
        c = self.cost[:n]
        x = np.zeros(n)
        for j in range(n):
            if c[j] > 0:
                x[j] = self.lo[j]
            elif c[j] < 0:
                x[j] = self.hi[j]
            else:
                x[j] = self._nonbasic_value(j, False)
            if not math.isfinite(x[j]):
                return LpSolution(Status.UNBOUNDED)
        return LpSolution(Status.OPTIMAL, float(c @ x), x, np.zeros(0))

    def cost_full(self, phase: int) -> np.ndarray:
        if phase == 1:
            c = np.zeros(self.N + self.m_art)
            c[self.N:] = 1.0
            return c
        c = np.zeros(self.N + self.m_art)
        c[: self.N] = self.cost
        return c

    @property
    def N(self) -> int:
        return self.n + self.m

    def _cold_start(self):
        m = self.m
        N = self.N
        self.x = np.zeros(N + m)
        for j in range(N):
            self.x[j] = self._nonbasic_value(j, False)
        r = self.b - self.A @ self.x[:N]
        self.art_sign = np.where(r >= 0, 1.0, -1.0)
        self.m_art = m
        self.lo = np.concatenate([self.lo[:N], np.zeros(m)])
        self.hi = np.concatenate([self.hi[:N], np.full(m, INF)])
        self.x[N:] = np.abs(r)
        self.basic = list(range(N, N + m))
        self.is_basic = np.zeros(N + m, dtype=bool)
        self.is_basic[N:] = True
        self.Binv = np.diag(self.art_sign)
        self.since_refactor = 0

    def _try_warm(self, hint: Basis) -> bool:
        m, n = self.m, self.n
        if hint.nrows > m or hint.ncols > n or len(hint.basic) != hint.nrows:
            return False
        if any(j >= hint.ncols + hint.nrows for j in hint.basic):
            return False

        def remap(j):
            return j if j < hint.ncols else n + (j - hint.ncols)

        basic = [remap(j) for j in hint.basic] + [n + i for i in range(hint.nrows, m)]
        upper = {remap(j) for j in hint.at_upper}
        self.art_sign = np.ones(m)
        self.m_art = 0
        N = self.N
        self.x = np.zeros(N)
        self.is_basic = np.zeros(N, dtype=bool)
        self.is_basic[basic] = True
        for j in range(N):
            if not self.is_basic[j]:
                self.x[j] = self._nonbasic_value(j, j in upper)
        B = self.A[:, basic].toarray()
        try:
            self.Binv = np.linalg.inv(B)
        except np.linalg.LinAlgError:
            return False
        if not np.all(np.isfinite(self.Binv)):
            return False
        self.basic = basic
        self._recompute_xb()
        xb = self.x[basic]
        if np.any(xb < self.lo[basic] - FEAS_TOL) or np.any(xb > self.hi[basic] + FEAS_TOL):
            return False
        self.since_refactor = 0
        return True

    def _recompute_xb(self):
        N = self.N
        nb = ~self.is_basic[:N]
        rhs = self.b - self.A[:, nb] @ self.x[:N][nb]
        if self.m_art:
            art_nb = ~self.is_basic[N:]
            rhs = rhs - self.art_sign * np.where(art_nb, self.x[N:], 0.0)
        self.x[self.basic] = self.Binv @ rhs

    def _refactor(self):
        B = np.column_stack([self._col(j) for j in self.basic])
        self.Binv = np.linalg.inv(B)
        self._recompute_xb()
        self.since_refactor = 0

    def _reduced_costs(self, c: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        y = c[self.basic] @ self.Binv
        d = c.copy()
        d[: self.N] -= self.A.T @ y
        if self.m_art:
            d[self.N:] -= self.art_sign * y
        return y, d

    def _iterate(self, c: np.ndarray) -> Status:
        m = self.m
        lo, hi = self.lo, self.hi
        degenerate = 0
        bland = False
        bland_after = 10 * (m + self.n)
        while True:
            if self.iterations >= self.max_iter:
                return Status.ITERATION_LIMIT
            y, d = self._reduced_costs(c)
            x = self.x
            nb = ~self.is_basic
            can_up = nb & (x < hi - FEAS_TOL) & (d < -OPT_TOL)
            can_dn = nb & (x > lo + FEAS_TOL) & (d > OPT_TOL)
            free_nb = nb & (lo == -INF) & (hi == INF) & (np.abs(d) > OPT_TOL)
            elig = can_up | can_dn | free_nb
            if not elig.any():
                return Status.OPTIMAL
            cand = np.nonzero(elig)[0]
            if bland:
                q = int(cand[0])
            else:
                q = int(cand[np.argmax(np.abs(d[cand]))])
            direction = 1.0 if d[q] < 0 else -1.0
            alpha = self.Binv @ self._col(q)
            # x_B(t) = x_B - direction * t * alpha
            step = direction * alpha
            xb = x[self.basic]
            lb = lo[self.basic]
            ub = hi[self.basic]
            t_best = hi[q] - lo[q] if math.isfinite(hi[q] - lo[q]) else INF
            leave = -1
            leave_to_upper = False
            piv_tol = 1e-9
            ratios = np.full(m, INF)
            dec = step > piv_tol
            inc = step < -piv_tol
            with np.errstate(invalid="ignore", divide="ignore"):
                ratios[dec] = np.maximum(xb[dec] - lb[dec], 0.0) / step[dec]
                ratios[inc] = np.maximum(ub[inc] - xb[inc], 0.0) / -step[inc]
            ratios[~np.isfinite(ratios)] = INF
            rmin = ratios.min() if m else INF
            if rmin < t_best:
                ties = np.nonzero(ratios <= rmin + 1e-12)[0]
                if bland:
                    r = min(ties.tolist(), key=lambda i: self.basic[i])
                else:
                    r = int(ties[np.argmax(np.abs(step[ties]))])
                leave = r
                leave_to_upper = bool(inc[r])
                t_best = ratios[r]
            if not math.isfinite(t_best):
                return Status.UNBOUNDED
            self.iterations += 1
            if t_best <= 1e-12:
                degenerate += 1
                if degenerate > bland_after:
                    bland = True
            x[self.basic] = xb - t_best * step
            x[q] += direction * t_best
            if leave < 0:
                continue  # bound flip
            out = self.basic[leave]
            x[out] = hi[out] if leave_to_upper else lo[out]
            if not math.isfinite(x[out]):
                x[out] = 0.0
            piv = alpha[leave]
            row = self.Binv[leave] / piv
            self.Binv -= np.outer(alpha, row)
            self.Binv[leave] = row
            self.basic[leave] = q
            self.is_basic[q] = True
            self.is_basic[out] = False
            self.since_refactor += 1
            if self.since_refactor >= REFACTOR_EVERY:
                self._refactor()

    def _finish(self, st: Status) -> LpSolution:
        if st is not Status.OPTIMAL:
            return LpSolution(st, iterations=self.iterations)
        self._refactor()
        n, N = self.n, self.N
        c = self.cost_full(phase=2)
        y = c[self.basic] @ self.Binv
        x = self.x[:n].copy()
        obj = float(self.cost[:n] @ x)
        basis = None
        if all(j < N for j in self.basic):
            upper = {j for j in range(N) if not self.is_basic[j] and self.hi[j] < INF and self.x[j] == self.hi[j]
                     and self.hi[j] != self.lo[j]}
            basis = Basis(n, self.m, list(self.basic), upper)
        self.model.basis = basis
        return LpSolution(Status.OPTIMAL, obj, x, y, self.iterations, basis)
