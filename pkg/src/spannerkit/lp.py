"""Linear programming layer.

Two interchangeable backends solve the same LinearProgram:

* "reference": a bounded-variable revised simplex maintained here. Dense
  basis inverse, dynamic phase 1 (infeasible basics carry unit penalty
  costs), steepest-edge-flavoured pricing with a Bland fallback on stalls,
  periodic refactorization. It warm starts from the previous basis after
  columns or rows are appended and after bound changes, which is what
  column generation and branch-and-bound need.
* "highs": scipy.optimize.linprog(method="highs"); fast default.

Rows are stored with senses "<=", ">=", "=="; the reported dual of a row
is the derivative of the optimal objective with respect to its right-hand
side (so a binding ">=" row in a minimization has a nonnegative dual).

Tolerances: primal/dual feasibility 1e-7, complementary slackness 1e-6,
duality gap 1e-6 * (1 + |objective|).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

INF = math.inf

FEAS_TOL = 1e-7
DUAL_TOL = 1e-7
CS_TOL = 1e-6
GAP_TOL = 1e-6
PIVOT_TOL = 1e-9

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
FAILED = "failed"

BASIC, AT_LO, AT_UP, FREE_NB = 0, 1, 2, 3


class LpError(RuntimeError):
    pass


@dataclass
class LpSolution:
    status: str
    objective: float | None
    x: np.ndarray | None
    duals: np.ndarray | None
    reduced_costs: np.ndarray | None
    iterations: int
    backend: str


class LinearProgram:
    """Column-oriented LP container shared by both backends."""

    def __init__(self, name: str = "lp"):
        self.name = name
        self.obj: list[float] = []
        self.lo: list[float] = []
        self.hi: list[float] = []
        self.orig_bounds: list[tuple[float, float]] = []
        self.col_entries: list[list[tuple[int, float]]] = []
        self.col_names: list[str] = []
        self.row_sense: list[str] = []
        self.rhs: list[float] = []
        self.row_names: list[str] = []
        self._state: _SimplexState | None = None

    @property
    def num_cols(self) -> int:
        return len(self.obj)

    @property
    def num_rows(self) -> int:
        return len(self.rhs)

    def add_column(
        self,
        obj: float,
        entries: list[tuple[int, float]] | None = None,
        lo: float = 0.0,
        hi: float = INF,
        name: str | None = None,
    ) -> int:
        """Append a variable with sparse coefficients in existing rows."""
        if lo > hi:
            raise LpError(f"column bounds crossed: [{lo}, {hi}]")
        j = self.num_cols
        ents = []
        for i, coef in entries or []:
            if not (0 <= i < self.num_rows):
                raise LpError(f"column references unknown row {i}")
            if coef != 0.0:
                ents.append((i, float(coef)))
        self.obj.append(float(obj))
        self.lo.append(lo)
        self.hi.append(hi)
        self.orig_bounds.append((lo, hi))
        self.col_entries.append(ents)
        self.col_names.append(name or f"x{j}")
        return j

    def add_row(self, entries: list[tuple[int, float]], sense: str, rhs: float, name: str | None = None) -> int:
        """Append a constraint over existing variables."""
        if sense not in ("<=", ">=", "=="):
            raise LpError(f"unknown row sense {sense!r}")
        i = self.num_rows
        self.row_sense.append(sense)
        self.rhs.append(float(rhs))
        self.row_names.append(name or f"r{i}")
        for j, coef in entries:
            if not (0 <= j < self.num_cols):
                raise LpError(f"row references unknown column {j}")
            if coef != 0.0:
                self.col_entries[j].append((i, float(coef)))
        return i

    def set_bounds(self, j: int, lo: float, hi: float) -> None:
        if lo > hi:
            raise LpError(f"bounds crossed for column {j}: [{lo}, {hi}]")
        self.lo[j] = lo
        self.hi[j] = hi

    def fix_variable(self, j: int, value: float) -> None:
        olo, ohi = self.orig_bounds[j]
        if value < olo - FEAS_TOL or value > ohi + FEAS_TOL:
            raise LpError(f"cannot fix column {j} to {value}: outside original bounds [{olo}, {ohi}]")
        self.set_bounds(j, value, value)

    def unfix_variable(self, j: int) -> None:
        self.lo[j], self.hi[j] = self.orig_bounds[j]

    def matrix(self) -> sp.csc_matrix:
        """Constraint matrix over structural columns only."""
        data, indices, indptr = [], [], [0]
        for ents in self.col_entries:
            for i, coef in ents:
                indices.append(i)
                data.append(coef)
            indptr.append(len(data))
        return sp.csc_matrix((data, indices, indptr), shape=(self.num_rows, self.num_cols))

    # ------------------------------------------------------------------
    def solve(self, backend: str = "auto", warm: bool = True) -> LpSolution:
        if backend == "auto":
            backend = "highs"
        if backend == "highs":
            return _solve_highs(self)
        if backend == "reference":
            return _solve_reference(self, warm)
        raise LpError(f"unknown backend {backend!r}")

    # ------------------------------------------------------------------
    def check_solution(self, sol: LpSolution) -> list[str]:
        """Independent verification of an optimal solution: primal and dual
        feasibility, complementary slackness, strong duality. Returns a
        list of violation descriptions (empty = all good)."""
        if sol.status != OPTIMAL:
            return [f"status {sol.status}"]
        probs: list[str] = []
        x = np.asarray(sol.x, dtype=float)
        y = np.asarray(sol.duals, dtype=float)
        A = self.matrix()
        row_vals = A @ x
        scale = 1.0 + float(np.abs(x).max(initial=0.0))
        for i, (sense, b) in enumerate(zip(self.row_sense, self.rhs)):
            v = row_vals[i]
            if sense == "<=" and v > b + FEAS_TOL * scale:
                probs.append(f"row {i}: {v} > {b}")
            elif sense == ">=" and v < b - FEAS_TOL * scale:
                probs.append(f"row {i}: {v} < {b}")
            elif sense == "==" and abs(v - b) > FEAS_TOL * scale:
                probs.append(f"row {i}: {v} != {b}")
            if sense == "<=" and y[i] > DUAL_TOL:
                probs.append(f"row {i}: dual sign {y[i]} > 0 on <= row")
            if sense == ">=" and y[i] < -DUAL_TOL:
                probs.append(f"row {i}: dual sign {y[i]} < 0 on >= row")
            slack = b - v
            if abs(y[i]) > CS_TOL and abs(slack) > CS_TOL * (1 + abs(b)):
                probs.append(f"row {i}: complementary slackness: dual {y[i]}, slack {slack}")
        for j in range(self.num_cols):
            if x[j] < self.lo[j] - FEAS_TOL * scale or x[j] > self.hi[j] + FEAS_TOL * scale:
                probs.append(f"col {j}: value {x[j]} outside [{self.lo[j]}, {self.hi[j]}]")
        rc = np.array(self.obj) - A.T @ y
        dual_obj = float(y @ np.array(self.rhs))
        for j in range(self.num_cols):
            r = rc[j]
            if r > DUAL_TOL * (1 + abs(self.obj[j])):
                if self.lo[j] == -INF:
                    probs.append(f"col {j}: positive reduced cost with free lower bound")
                else:
                    dual_obj += r * self.lo[j]
                    if x[j] > self.lo[j] + CS_TOL:
                        probs.append(f"col {j}: rc {r} > 0 but x {x[j]} above lower bound {self.lo[j]}")
            elif r < -DUAL_TOL * (1 + abs(self.obj[j])):
                if self.hi[j] == INF:
                    probs.append(f"col {j}: negative reduced cost with free upper bound")
                else:
                    dual_obj += r * self.hi[j]
                    if x[j] < self.hi[j] - CS_TOL:
                        probs.append(f"col {j}: rc {r} < 0 but x {x[j]} below upper bound {self.hi[j]}")
        gap = abs(sol.objective - dual_obj)
        if gap > GAP_TOL * (1 + abs(sol.objective)):
            probs.append(f"duality gap {gap} (primal {sol.objective}, dual {dual_obj})")
        return probs


# ---------------------------------------------------------------------------
# HiGHS backend


def _solve_highs(lp: LinearProgram) -> LpSolution:
    from scipy.optimize import linprog

    c = np.array(lp.obj, dtype=float)
    A = lp.matrix().tocsr()
    ub_rows, eq_rows = [], []
    for i, sense in enumerate(lp.row_sense):
        (eq_rows if sense == "==" else ub_rows).append(i)
    A_ub = b_ub = A_eq = b_eq = None
    ub_signs = []
    if ub_rows:
        blocks = []
        for i in ub_rows:
            row = A.getrow(i)
            if lp.row_sense[i] == ">=":
                blocks.append(-row)
                ub_signs.append(-1.0)
            else:
                blocks.append(row)
                ub_signs.append(1.0)
        A_ub = sp.vstack(blocks, format="csr")
        b_ub = np.array([lp.rhs[i] * s for i, s in zip(ub_rows, ub_signs)])
    if eq_rows:
        A_eq = sp.vstack([A.getrow(i) for i in eq_rows], format="csr")
        b_eq = np.array([lp.rhs[i] for i in eq_rows])
    bounds = [
        (None if lo == -INF else lo, None if hi == INF else hi)
        for lo, hi in zip(lp.lo, lp.hi)
    ]
    if lp.num_cols == 0:
        return LpSolution(OPTIMAL, 0.0, np.zeros(0), np.zeros(lp.num_rows), np.zeros(0), 0, "highs")
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs")
    if res.status == 2:
        return LpSolution(INFEASIBLE, None, None, None, None, int(res.nit), "highs")
    if res.status == 3:
        return LpSolution(UNBOUNDED, None, None, None, None, int(res.nit), "highs")
    if res.status != 0:
        return LpSolution(FAILED, None, None, None, None, int(res.nit), "highs")
    duals = np.zeros(lp.num_rows)
    if ub_rows:
        for pos, (i, s) in enumerate(zip(ub_rows, ub_signs)):
            duals[i] = s * res.ineqlin.marginals[pos]
    if eq_rows:
        for pos, i in enumerate(eq_rows):
            duals[i] = res.eqlin.marginals[pos]
    x = np.asarray(res.x, dtype=float)
    rc = c - lp.matrix().T @ duals
    return LpSolution(OPTIMAL, float(res.fun), x, duals, rc, int(res.nit), "highs")


# ---------------------------------------------------------------------------
# reference backend


class _SimplexState:
    def __init__(self, basis: np.ndarray, vstatus: np.ndarray, ncols: int, nrows: int):
        self.basis = basis          # row position -> column index (incl. slacks)
        self.vstatus = vstatus      # per column (structurals then slacks)
        self.ncols = ncols
        self.nrows = nrows


def _slack_bounds(sense: str) -> tuple[float, float]:
    if sense == "<=":
        return 0.0, INF
    if sense == ">=":
        return -INF, 0.0
    return 0.0, 0.0


def _solve_reference(lp: LinearProgram, warm: bool) -> LpSolution:
    n, m = lp.num_cols, lp.num_rows
    N = n + m
    A = lp.matrix()
    # full matrix with slack identity: row equations A x + s = b
    Afull = sp.hstack([A, sp.identity(m, format="csc")], format="csc") if m else A
    b = np.array(lp.rhs, dtype=float)
    lo = np.empty(N)
    hi = np.empty(N)
    lo[:n] = lp.lo
    hi[:n] = lp.hi
    for i, sense in enumerate(lp.row_sense):
        lo[n + i], hi[n + i] = _slack_bounds(sense)
    cost = np.zeros(N)
    cost[:n] = lp.obj

    state = lp._state if warm else None
    if state is not None and (state.ncols > n or state.nrows > m):
        state = None
    if state is None:
        basis = np.arange(n, N, dtype=np.int64)
        vstatus = np.empty(N, dtype=np.int8)
        for j in range(n):
            vstatus[j] = AT_LO if lo[j] > -INF else (AT_UP if hi[j] < INF else FREE_NB)
        vstatus[n:] = BASIC
    else:
        # extend the stored basis with new columns at a bound and the new
        # rows' slacks marked basic
        vstatus = np.empty(N, dtype=np.int8)
        vstatus[: state.ncols] = state.vstatus[: state.ncols]
        for j in range(state.ncols, n):
            vstatus[j] = AT_LO if lo[j] > -INF else (AT_UP if hi[j] < INF else FREE_NB)
        old_slack = state.vstatus[state.ncols :]
        shift = n - state.ncols
        vstatus[n : n + state.nrows] = old_slack
        vstatus[n + state.nrows :] = BASIC
        basis = state.basis.copy()
        basis[basis >= state.ncols] += shift
        basis = np.concatenate([basis, np.arange(n + state.nrows, N, dtype=np.int64)])
        vstatus[basis] = BASIC
        # nonbasic statuses may point at bounds that no longer exist
        for j in np.flatnonzero(vstatus != BASIC):
            if vstatus[j] == AT_LO and lo[j] == -INF:
                vstatus[j] = AT_UP if hi[j] < INF else FREE_NB
            elif vstatus[j] == AT_UP and hi[j] == INF:
                vstatus[j] = AT_LO if lo[j] > -INF else FREE_NB

    sx = _Simplex(Afull, b, lo, hi, cost, basis, vstatus)
    status, iters = sx.run()
    lp._state = _SimplexState(sx.basis.copy(), sx.vstatus.copy(), n, m)
    if status != OPTIMAL:
        return LpSolution(status, None, None, None, None, iters, "reference")
    xfull = sx.full_solution()
    y = sx.duals()
    x = xfull[:n]
    rc = cost[:n] - A.T @ y
    objective = float(cost[:n] @ x)
    return LpSolution(OPTIMAL, objective, x, y, rc, iters, "reference")


class _Simplex:
    """Bounded-variable revised simplex with a dynamic phase 1.

    Basic variables outside their bounds get a unit penalty cost pointing
    back toward feasibility; once every basic variable is within bounds the
    true objective takes over. Short steps: the ratio test stops at the
    first bound or healing event so penalty costs stay consistent.
    """

    REFACTOR_EVERY = 150
    STALL_LIMIT = 300

    def __init__(self, Afull, b, lo, hi, cost, basis, vstatus):
        self.A = Afull.tocsc()
        self.b = b
        self.lo = lo
        self.hi = hi
        self.cost = cost
        self.basis = basis
        self.vstatus = vstatus
        self.m = len(b)
        self.N = len(lo)
        self.binv = None
        self.pivots_since_refactor = 0
        self.col_norm = np.sqrt(np.asarray(self.A.multiply(self.A).sum(axis=0)).ravel()) + 1.0
        self.max_iter = 20000 + 60 * self.m

    def refactor(self) -> bool:
        B = self.A[:, self.basis].toarray()
        try:
            self.binv = np.linalg.inv(B)
        except np.linalg.LinAlgError:
            return False
        self.pivots_since_refactor = 0
        return True

    def nonbasic_values(self) -> np.ndarray:
        vals = np.zeros(self.N)
        at_lo = self.vstatus == AT_LO
        at_up = self.vstatus == AT_UP
        vals[at_lo] = self.lo[at_lo]
        vals[at_up] = self.hi[at_up]
        return vals

    def basic_values(self, nb_vals: np.ndarray) -> np.ndarray:
        r = self.b - self.A @ nb_vals
        return self.binv @ r

    def full_solution(self) -> np.ndarray:
        vals = self.nonbasic_values()
        vals[self.basis] = self.basic_values(vals)
        return vals

    def duals(self) -> np.ndarray:
        return self.cost[self.basis] @ self.binv

    def run(self) -> tuple[str, int]:
        if not self.refactor():
            # singular warm basis: restart from the slack basis
            self.basis = np.arange(self.N - self.m, self.N, dtype=np.int64)
            self.vstatus[: self.N - self.m] = np.where(
                self.lo[: self.N - self.m] > -INF, AT_LO, np.where(self.hi[: self.N - self.m] < INF, AT_UP, FREE_NB)
            )
            self.vstatus[self.N - self.m :] = BASIC
            if not self.refactor():
                return FAILED, 0

        bland = False
        stall = 0
        last_obj = INF
        fixed = self.hi - self.lo <= 0
        for it in range(self.max_iter):
            if self.pivots_since_refactor >= self.REFACTOR_EVERY:
                if not self.refactor():
                    return FAILED, it
            nb_vals = self.nonbasic_values()
            xb = self.basic_values(nb_vals)
            lob = self.lo[self.basis]
            hib = self.hi[self.basis]
            below = xb < lob - FEAS_TOL
            above = xb > hib + FEAS_TOL
            phase1 = bool(below.any() or above.any())
            if phase1:
                csel = np.zeros(self.N)
                csel[self.basis[below]] = -1.0
                csel[self.basis[above]] = 1.0
                obj = float((lob[below] - xb[below]).sum() + (xb[above] - hib[above]).sum())
            else:
                csel = self.cost
                vals = nb_vals.copy()
                vals[self.basis] = xb
                obj = float(self.cost @ vals)

            # stall detection drives the Bland fallback
            if obj < last_obj - 1e-10:
                stall = 0
                bland = False
            else:
                stall += 1
                if stall > self.STALL_LIMIT:
                    bland = True
            last_obj = obj

            y = csel[self.basis] @ self.binv
            rd = csel - self.A.T @ y
            eligible_lo = (self.vstatus == AT_LO) & (rd < -DUAL_TOL) & ~fixed
            eligible_up = (self.vstatus == AT_UP) & (rd > DUAL_TOL) & ~fixed
            eligible_fr = (self.vstatus == FREE_NB) & (np.abs(rd) > DUAL_TOL)
            eligible = eligible_lo | eligible_up | eligible_fr
            cand = np.flatnonzero(eligible)
            if len(cand) == 0:
                if phase1:
                    return INFEASIBLE, it
                return OPTIMAL, it
            if bland:
                t = int(cand[0])
            else:
                score = np.abs(rd[cand]) / self.col_norm[cand]
                t = int(cand[int(np.argmax(score))])
            direction = 1.0 if (rd[t] < 0) else -1.0

            acol = np.asarray(self.A[:, [t]].todense()).ravel()
            alpha = self.binv @ acol
            delta = direction * alpha  # xb moves by -delta * step

            own_gap = self.hi[t] - self.lo[t]
            best_theta = own_gap if own_gap < INF else INF
            leave_pos = -1
            leave_to = AT_LO
            best_piv = 0.0
            for i in np.flatnonzero(np.abs(delta) > PIVOT_TOL):
                j = self.basis[i]
                xi = xb[i]
                di = delta[i]
                if phase1 and xi < self.lo[j] - FEAS_TOL:
                    if di < 0:
                        theta = (self.lo[j] - xi) / (-di)
                        to = AT_LO
                    else:
                        continue
                elif phase1 and xi > self.hi[j] + FEAS_TOL:
                    if di > 0:
                        theta = (xi - self.hi[j]) / di
                        to = AT_UP
                    else:
                        continue
                else:
                    if di > 0:
                        if self.lo[j] == -INF:
                            continue
                        theta = (xi - self.lo[j]) / di
                        to = AT_LO
                    else:
                        if self.hi[j] == INF:
                            continue
                        theta = (self.hi[j] - xi) / (-di)
                        to = AT_UP
                theta = max(theta, 0.0)
                better = theta < best_theta - 1e-12
                tie = abs(theta - best_theta) <= 1e-12
                if bland:
                    if better or (tie and leave_pos >= 0 and j < self.basis[leave_pos]):
                        best_theta, leave_pos, leave_to, best_piv = theta, i, to, abs(di)
                else:
                    if better or (tie and abs(di) > best_piv):
                        best_theta, leave_pos, leave_to, best_piv = theta, i, to, abs(di)

            if best_theta == INF:
                if phase1:
                    return FAILED, it
                return UNBOUNDED, it
            if leave_pos < 0:
                # entering variable swings to its opposite bound
                self.vstatus[t] = AT_UP if direction > 0 else AT_LO
                continue
            # pivot: t enters, basis[leave_pos] leaves at the bound it hit
            jl = self.basis[leave_pos]
            self.vstatus[jl] = leave_to
            self.vstatus[t] = BASIC
            self.basis[leave_pos] = t
            piv = alpha[leave_pos]
            if abs(piv) < PIVOT_TOL:
                if not self.refactor():
                    return FAILED, it
                continue
            row = self.binv[leave_pos, :] / piv
            self.binv -= np.outer(alpha, row)
            self.binv[leave_pos, :] = row
            self.pivots_since_refactor += 1
        return FAILED, self.max_iter


# ---------------------------------------------------------------------------
# LP file input/output
# ---------------------------------------------------------------------------

_LP_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op><=|>=|=|\+|-|:)"
    r")"
)


def _lp_format(value: float) -> str:
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(float(value))


def _lp_tokens(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _LP_TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise LpError(f"unparseable LP text at {text[pos:pos + 20]!r}")
            break
        pos = m.end()
        for kind in ("num", "name", "op"):
            val = m.group(kind)
            if val is not None:
                out.append((kind, val))
                break
    return out


def _parse_terms(tokens: list[tuple[str, str]]) -> list[tuple[float, str]]:
    terms = []
    sign = 1.0
    coef = None
    for kind, val in tokens:
        if kind == "op" and val in "+-":
            sign = 1.0 if val == "+" else -1.0
        elif kind == "num":
            coef = float(val)
        elif kind == "name":
            terms.append((sign * (1.0 if coef is None else coef), val))
            sign, coef = 1.0, None
        else:
            raise LpError(f"unexpected token {val!r} in expression")
    return terms


def write_lp_file(lp: LinearProgram, path: str) -> None:
    """Serialize in LP format: Minimize, Subject To, Bounds, End.

    Every variable appears in the Bounds section in column order so that a
    re-import reconstructs the exact column layout; rows keep their order and
    names from the model.  Rows without coefficients are written with a single
    zero term so the constraint count survives the round trip.
    """
    if lp.num_cols == 0:
        raise LpError("cannot export a program without columns")
    if len(set(lp.col_names)) != lp.num_cols or len(set(lp.row_names)) != lp.num_rows:
        raise LpError("LP export requires unique row and column names")
    rows: list[list[tuple[int, float]]] = [[] for _ in range(lp.num_rows)]
    for j, ents in enumerate(lp.col_entries):
        for i, coef in ents:
            rows[i].append((j, coef))
    lines = ["\\ exported linear program", "Minimize"]
    obj_terms = [
        f"{'-' if c < 0 else '+'} {_lp_format(abs(c))} {lp.col_names[j]}"
        for j, c in enumerate(lp.obj)
        if c != 0.0
    ]
    lines.append(" obj: " + " ".join(obj_terms))
    lines.append("Subject To")
    for i in range(lp.num_rows):
        if rows[i]:
            body = " ".join(
                f"{'-' if c < 0 else '+'} {_lp_format(abs(c))} {lp.col_names[j]}"
                for j, c in rows[i]
            )
        else:
            body = f"+ 0 {lp.col_names[0]}"
        sense = "=" if lp.row_sense[i] == "==" else lp.row_sense[i]
        lines.append(f" {lp.row_names[i]}: {body} {sense} {_lp_format(lp.rhs[i])}")
    lines.append("Bounds")
    for j in range(lp.num_cols):
        lo, hi = lp.lo[j], lp.hi[j]
        name = lp.col_names[j]
        if lo == hi:
            lines.append(f" {name} = {_lp_format(lo)}")
        elif lo == -INF and hi == INF:
            lines.append(f" {name} free")
        elif hi == INF:
            lines.append(f" {name} >= {_lp_format(lo)}")
        elif lo == -INF:
            lines.append(f" {name} <= {_lp_format(hi)}")
        else:
            lines.append(f" {_lp_format(lo)} <= {name} <= {_lp_format(hi)}")
    lines.append("End")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_signed(tokens: list[tuple[str, str]]) -> float:
    sign = 1.0
    for kind, val in tokens:
        if kind == "op" and val in "+-":
            sign = 1.0 if val == "+" else -1.0
        elif kind == "num":
            return sign * float(val)
        else:
            raise LpError(f"expected a number, got {val!r}")
    raise LpError("expected a number")


def read_lp_file(path: str) -> LinearProgram:
    """Parse a file produced by write_lp_file back into a LinearProgram."""
    sections: dict[str, list[str]] = {
        "minimize": [],
        "subject to": [],
        "bounds": [],
    }
    current = None
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("\\"):
                continue
            lowered = line.strip().lower()
            if lowered in ("minimize", "subject to", "bounds"):
                current = lowered
                continue
            if lowered == "end":
                break
            if current is None:
                raise LpError(f"content before a section header: {line!r}")
            sections[current].append(line)

    lp = LinearProgram()
    index: dict[str, int] = {}
    for line in sections["bounds"]:
        tokens = _lp_tokens(line)
        names = [v for k, v in tokens if k == "name"]
        if not names:
            raise LpError(f"bound line without a variable: {line!r}")
        if names[-1] == "free" and len(names) >= 2:
            name, lo, hi = names[0], -INF, INF
        else:
            name = names[0]
            ops = [v for k, v in tokens if k == "op" and v in ("<=", ">=", "=")]
            nums = []
            run: list[tuple[str, str]] = []
            for k, v in tokens:
                if k == "num":
                    run.append((k, v))
                    nums.append(_parse_signed(run))
                    run = []
                elif k == "op" and v in "+-":
                    run.append((k, v))
                else:
                    run = []
            if len(nums) == 2:
                lo, hi = nums
            elif ops and ops[0] == "=":
                lo = hi = nums[0]
            elif ops and ops[0] == ">=":
                lo, hi = nums[0], INF
            elif ops and ops[0] == "<=":
                lo, hi = -INF, nums[0]
            else:
                raise LpError(f"cannot parse bound line: {line!r}")
        if name in index:
            raise LpError(f"duplicate variable {name!r} in bounds")
        index[name] = lp.add_column(0.0, [], lo=lo, hi=hi, name=name)

    obj_text = " ".join(sections["minimize"])
    tokens = _lp_tokens(obj_text)
    if tokens and tokens[0][0] == "name" and tokens[1:2] and tokens[1] == ("op", ":"):
        tokens = tokens[2:]
    for coef, name in _parse_terms(tokens):
        if name not in index:
            raise LpError(f"objective references unknown variable {name!r}")
        lp.obj[index[name]] = coef

    for line in sections["subject to"]:
        tokens = _lp_tokens(line)
        row_name = None
        if len(tokens) >= 2 and tokens[0][0] == "name" and tokens[1] == ("op", ":"):
            row_name = tokens[0][1]
            tokens = tokens[2:]
        split = None
        for pos, (kind, val) in enumerate(tokens):
            if kind == "op" and val in ("<=", ">=", "="):
                split = pos
                break
        if split is None:
            raise LpError(f"constraint without a sense: {line!r}")
        sense = tokens[split][1]
        sense = "==" if sense == "=" else sense
        entries = []
        for coef, name in _parse_terms(tokens[:split]):
            if name not in index:
                raise LpError(f"constraint references unknown variable {name!r}")
            entries.append((index[name], coef))
        rhs = _parse_signed(tokens[split + 1:])
        lp.add_row(entries, sense, rhs, name=row_name)
    return lp
