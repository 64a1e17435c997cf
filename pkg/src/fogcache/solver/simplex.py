"""Bounded-variable revised simplex on dense arrays.

Solves ``min c.x  s.t.  A x (<=|=|>=) b,  lb <= x <= ub``.  Rows get a slack
column (``+1`` for ``<=``, ``-1`` for ``>=``) and an artificial column.  Cold
starts use a two-phase primal method: artificials enter the basis only where
the slack cannot absorb the starting residual and phase 1 drives them to
zero.  Warm starts take a basis from an earlier solve of the same matrix with
different bounds (the branch-and-bound case) and restore primal feasibility
with the bounded dual simplex before a primal clean-up pass.

Nonbasic variables sit at one of their bounds (free ones at zero), so bound
changes never need extra rows.  The basis inverse is kept explicitly,
updated with an elementary row operation per pivot and recomputed every
``REFACTOR_EVERY`` pivots; optimality is only declared once the primal and
dual residuals of the current inverse are small, refactoring otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration-limit"
NUMERICAL = "numerical"

SENSE_LE, SENSE_EQ, SENSE_GE = -1, 0, 1

REFACTOR_EVERY = 64
PIVOT_TOL = 1e-9
DUAL_TOL = 1e-9
RESIDUAL_TOL = 1e-10
DEGENERATE_STREAK = 50

_BASIC, _AT_LOWER, _AT_UPPER, _FREE = 0, 1, 2, 3


@dataclass
class Basis:
    """Warm-start token: basic column per row plus the state of every column.

    ``binv`` optionally carries the matching basis inverse so sibling solves
    can skip the factorization.
    """

    basis: np.ndarray
    state: np.ndarray
    binv: np.ndarray | None = None


@dataclass
class LpResult:
    status: str
    x: np.ndarray | None
    objective: float
    iterations: int
    basis: Basis | None = None
    tableau: "_Tableau | None" = None


class DenseLp:
    """One constraint matrix, solved repeatedly under different bounds."""

    def __init__(self, c, A, b, senses, feas_tol: float = 1e-7):
        c = np.asarray(c, dtype=float)
        b = np.asarray(b, dtype=float)
        A = np.asarray(A, dtype=float).reshape(len(b), len(c))
        senses = np.asarray(senses, dtype=int)
        m, n = A.shape
        self.m, self.n = m, n
        self.feas_tol = feas_tol
        self.c = c

        norms = np.abs(A).max(axis=1) if n else np.zeros(m)
        norms[norms == 0] = 1.0
        A = A / norms[:, None]
        self.b = b / norms

        slack_rows = np.flatnonzero(senses != SENSE_EQ)
        k = len(slack_rows)
        self.k = k
        self.slack_of_row = np.full(m, -1)
        self.slack_of_row[slack_rows] = n + np.arange(k)
        self.slack_sign = np.zeros(m)
        self.slack_sign[slack_rows] = np.where(senses[slack_rows] == SENSE_LE, 1.0, -1.0)

        self.art_start = n + k
        self.total = n + k + m
        full = np.zeros((m, self.total))
        full[:, :n] = A
        full[slack_rows, n + np.arange(k)] = self.slack_sign[slack_rows]
        full[np.arange(m), self.art_start + np.arange(m)] = 1.0
        self.A = full

        scale = float(np.abs(c).max(initial=0.0)) or 1.0
        self.cost = np.zeros(self.total)
        self.cost[:n] = c / scale

    def factor(self, basis: Basis) -> np.ndarray:
        """Inverse of the basis matrix named by ``basis``."""
        return np.linalg.inv(self.A[:, basis.basis]) if self.m else np.zeros((0, 0))

    def solve(self, lb, ub, warm: Basis | None = None, max_iter: int | None = None,
              keep_tableau: bool = False) -> LpResult:
        lb = np.asarray(lb, dtype=float)
        ub = np.asarray(ub, dtype=float)
        if np.any(lb > ub):
            return LpResult(INFEASIBLE, None, math.nan, 0)
        if max_iter is None:
            max_iter = 50 * (self.m + self.total) + 1000
        tab = _Tableau(self, lb, ub)
        status = None
        if warm is not None:
            try:
                status = tab.warm_start(warm, max_iter)
            except np.linalg.LinAlgError:
                status = None
            if status is None:
                tab = _Tableau(self, lb, ub)
        if status is None:
            try:
                status = tab.cold_start(max_iter)
                if status == OPTIMAL and keep_tableau:
                    tab.refactor()
                    tab._recompute_basics()
            except np.linalg.LinAlgError:
                status = NUMERICAL
        elif status == OPTIMAL and keep_tableau:
            try:
                tab.refactor()
                tab._recompute_basics()
            except np.linalg.LinAlgError:
                keep_tableau = False
        if status != OPTIMAL:
            return LpResult(status, None, math.nan, tab.iterations)

        x = tab.x[: self.n].copy()
        tol = self.feas_tol
        # snap values that drifted within tolerance of a bound
        x = np.where(np.abs(x - lb) <= tol, np.where(np.isfinite(lb), lb, x), x)
        x = np.where(np.abs(x - ub) <= tol, np.where(np.isfinite(ub), ub, x), x)
        token = Basis(tab.basis.copy(), tab.state.copy())
        return LpResult(OPTIMAL, x, float(self.c @ x), tab.iterations, token,
                        tab if keep_tableau else None)


class _Tableau:
    """Working state of one simplex solve."""

    def __init__(self, lp: DenseLp, lb, ub):
        self.lp = lp
        self.m, self.n, self.total = lp.m, lp.n, lp.total
        self.A = lp.A
        self.b = lp.b
        self.lb = np.concatenate([lb, np.zeros(lp.k), np.zeros(lp.m)])
        self.ub = np.concatenate([ub, np.full(lp.k, np.inf), np.zeros(lp.m)])
        self.x = np.zeros(self.total)
        self.state = np.full(self.total, _AT_LOWER)
        self.basis = np.empty(self.m, dtype=int)
        self.Binv = np.zeros((self.m, self.m))
        self.iterations = 0
        self.since_refactor = 0

    # -- starts ---------------------------------------------------------

    def _place_nonbasic(self, j, state=None):
        lo, hi = self.lb[j], self.ub[j]
        if state == _AT_UPPER and np.isfinite(hi):
            self.x[j], self.state[j] = hi, _AT_UPPER
        elif np.isfinite(lo):
            self.x[j], self.state[j] = lo, _AT_LOWER
        elif np.isfinite(hi):
            self.x[j], self.state[j] = hi, _AT_UPPER
        else:
            self.x[j], self.state[j] = 0.0, _FREE

    def cold_start(self, max_iter: int) -> str:
        lp, m, n = self.lp, self.m, self.n
        for j in range(n):
            self._place_nonbasic(j)
        residual = self.b - lp.A[:, :n] @ self.x[:n]
        arts = lp.art_start + np.arange(m)
        art_cols = lp.A[np.arange(m), arts]
        for i in range(m):
            s = lp.slack_of_row[i]
            if s >= 0:
                value = residual[i] / lp.slack_sign[i]
                if value >= 0:
                    self.basis[i] = s
                    self.x[s] = value
                    continue
            # artificial column sign follows the residual so it starts >= 0
            art_cols[i] = 1.0 if residual[i] >= 0 else -1.0
            self.basis[i] = arts[i]
            self.x[arts[i]] = abs(residual[i])
            self.ub[arts[i]] = np.inf
        lp.A[np.arange(m), arts] = art_cols
        self.state[self.basis] = _BASIC
        if m:
            self.Binv = np.diag(1.0 / self.A[np.arange(m), self.basis])

        if np.any(self.state[arts] == _BASIC):
            phase1 = np.zeros(self.total)
            phase1[arts] = 1.0
            status = self.primal(phase1, max_iter)
            if status != OPTIMAL:
                return status
            infeas = self.x[arts].sum()
            if infeas > lp.feas_tol * max(1.0, float(np.abs(self.b).max(initial=0.0))):
                return INFEASIBLE
            self.ub[arts] = 0.0
            for a in arts:
                if self.state[a] != _BASIC:
                    self.x[a], self.state[a] = 0.0, _AT_LOWER
        return self.primal(lp.cost, max_iter)

    def warm_start(self, warm: Basis, max_iter: int) -> str | None:
        """Dual simplex from ``warm``; ``None`` asks the caller for a cold start."""
        lp = self.lp
        self.basis = warm.basis.copy()
        self.state = warm.state.copy()
        arts = np.arange(lp.art_start, self.total)
        self.x[arts] = 0.0
        for j in np.flatnonzero(self.state != _BASIC):
            if j < lp.art_start:
                self._place_nonbasic(j, self.state[j])
        try:
            # a basic artificial may have had its column sign flipped by a
            # cold start since ``binv`` was computed
            reuse = warm.binv is not None and not np.any(warm.basis >= lp.art_start)
            self.Binv = warm.binv.copy() if reuse else lp.factor(warm)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(self.Binv)):
            return None
        self._recompute_basics()
        self.since_refactor = 0
        status = self.dual(lp.cost, max_iter)
        if status is None or status == ITERATION_LIMIT:
            return None
        if status != OPTIMAL:
            return status
        return self.primal(lp.cost, max_iter)

    # -- linear algebra -------------------------------------------------

    def _recompute_basics(self):
        nonbasic = self.state != _BASIC
        rhs = self.b - self.A[:, nonbasic] @ self.x[nonbasic]
        self.x[self.basis] = self.Binv @ rhs

    def refactor(self) -> None:
        if self.m == 0:
            return
        self.Binv = np.linalg.inv(self.A[:, self.basis])
        self._recompute_basics()
        self.since_refactor = 0

    def _accurate(self, y, cost) -> bool:
        """Primal and dual residuals of the running inverse are negligible."""
        if self.since_refactor == 0 or self.m == 0:
            return True
        primal = np.abs(self.A @ self.x - self.b).max()
        dual = np.abs(y @ self.A[:, self.basis] - cost[self.basis]).max()
        scale = 1.0 + float(np.abs(self.x[self.basis]).max())
        return primal <= RESIDUAL_TOL * scale and dual <= RESIDUAL_TOL

    def _pivot(self, r, q, alpha):
        pivot = alpha[r]
        row = self.Binv[r] / pivot
        self.Binv -= np.outer(alpha, row)
        self.Binv[r] = row
        self.basis[r] = q
        self.state[q] = _BASIC
        self.since_refactor += 1

    def _leave(self, leaving, to_upper):
        if to_upper:
            self.x[leaving], self.state[leaving] = self.ub[leaving], _AT_UPPER
        else:
            self.x[leaving], self.state[leaving] = self.lb[leaving], _AT_LOWER
        if self.lb[leaving] == -np.inf and self.ub[leaving] == np.inf:
            self.state[leaving] = _FREE

    # -- primal simplex -------------------------------------------------

    def primal(self, cost: np.ndarray, max_iter: int) -> str:
        """Iterate to optimality for ``cost`` from a primal feasible basis."""
        degenerate = 0
        bland = False
        movable = self.ub > self.lb
        while True:
            if self.iterations >= max_iter:
                return ITERATION_LIMIT
            if self.since_refactor >= REFACTOR_EVERY:
                self.refactor()

            y = cost[self.basis] @ self.Binv if self.m else np.zeros(0)
            d = cost - y @ self.A
            state = self.state
            can_inc = ((state == _AT_LOWER) | (state == _FREE)) & (d < -DUAL_TOL) & movable
            can_dec = ((state == _AT_UPPER) | (state == _FREE)) & (d > DUAL_TOL) & movable
            eligible = can_inc | can_dec
            if not eligible.any():
                if self._accurate(y, cost):
                    return OPTIMAL
                self.refactor()
                continue

            if bland:
                q = int(np.flatnonzero(eligible)[0])
            else:
                q = int(np.argmax(np.where(eligible, np.abs(d), -1.0)))
            direction = 1.0 if can_inc[q] else -1.0

            alpha = self.Binv @ self.A[:, q] if self.m else np.zeros(0)
            delta = -direction * alpha
            xb = self.x[self.basis]
            lbb = self.lb[self.basis]
            ubb = self.ub[self.basis]
            ratios = np.full(self.m, np.inf)
            down = delta < -PIVOT_TOL
            up = delta > PIVOT_TOL
            with np.errstate(invalid="ignore", divide="ignore"):
                ratios[down] = (xb[down] - lbb[down]) / -delta[down]
                ratios[up] = (ubb[up] - xb[up]) / delta[up]
            ratios = np.maximum(ratios, 0.0)
            ratios[np.isnan(ratios)] = np.inf

            theta_rows = ratios.min() if self.m else np.inf
            theta_flip = self.ub[q] - self.lb[q]
            if not np.isfinite(theta_rows) and not np.isfinite(theta_flip):
                return UNBOUNDED

            self.iterations += 1
            if theta_flip <= theta_rows:
                self.x[self.basis] = xb + theta_flip * delta
                if direction > 0:
                    self.x[q], self.state[q] = self.ub[q], _AT_UPPER
                else:
                    self.x[q], self.state[q] = self.lb[q], _AT_LOWER
                self.since_refactor += 1
                degenerate = 0
                bland = False
                continue

            ties = np.flatnonzero(ratios <= theta_rows + 1e-12)
            if bland:
                r = int(ties[np.argmin(self.basis[ties])])
            else:
                r = int(ties[np.argmax(np.abs(alpha[ties]))])
            theta = ratios[r]

            leaving = self.basis[r]
            self.x[self.basis] = xb + theta * delta
            self.x[q] += direction * theta
            self._leave(leaving, delta[r] > 0)
            self._pivot(r, q, alpha)

            if theta <= 1e-12:
                degenerate += 1
                if degenerate > DEGENERATE_STREAK:
                    bland = True
            else:
                degenerate = 0
                bland = False

    # -- dual simplex ---------------------------------------------------

    def dual(self, cost: np.ndarray, max_iter: int) -> str | None:
        """Restore primal feasibility keeping reduced costs dual feasible.

        Returns ``OPTIMAL`` once primal feasible, ``INFEASIBLE`` on a proven
        dual ray, and ``None`` when the starting basis is not dual feasible.
        """
        movable = self.ub > self.lb
        tol = self.lp.feas_tol * 1e-2
        checked = False
        while True:
            if self.iterations >= max_iter:
                return ITERATION_LIMIT
            if self.since_refactor >= REFACTOR_EVERY:
                self.refactor()

            y = cost[self.basis] @ self.Binv if self.m else np.zeros(0)
            d = cost - y @ self.A
            state = self.state
            nonbasic = (state != _BASIC) & movable
            bad = nonbasic & (((state == _AT_LOWER) & (d < -1e3 * DUAL_TOL))
                              | ((state == _AT_UPPER) & (d > 1e3 * DUAL_TOL))
                              | ((state == _FREE) & (np.abs(d) > 1e3 * DUAL_TOL)))
            if bad.any():
                return None

            xb = self.x[self.basis]
            lbb = self.lb[self.basis]
            ubb = self.ub[self.basis]
            below = lbb - xb
            above = xb - ubb
            with np.errstate(invalid="ignore"):
                viol = np.maximum(below, above)
                bound_scale = 1.0 + np.abs(np.where(below > above, lbb, ubb))
                viol = np.where(np.isfinite(viol), viol / bound_scale, 0.0)
            r = int(np.argmax(viol)) if self.m else 0
            if not self.m or viol[r] <= tol:
                return OPTIMAL
            to_lower = below[r] > above[r]

            row = self.Binv[r] @ self.A
            # x_B[r] moves by -row[j] * dx_j; pick directions that push it
            # back toward the violated bound
            want = 1.0 if to_lower else -1.0
            inc_ok = ((state == _AT_LOWER) | (state == _FREE)) & (-row * want > PIVOT_TOL)
            dec_ok = ((state == _AT_UPPER) | (state == _FREE)) & (row * want > PIVOT_TOL)
            cand = nonbasic & (inc_ok | dec_ok)
            if not cand.any():
                if not checked and self.since_refactor:
                    self.refactor()
                    checked = True
                    continue
                return INFEASIBLE
            checked = False
            with np.errstate(divide="ignore", invalid="ignore"):
                ratios = np.where(cand, np.abs(d) / np.abs(row), np.inf)
            best = ratios.min()
            ties = np.flatnonzero(ratios <= best + 1e-12)
            q = int(ties[np.argmax(np.abs(row[ties]))])

            alpha = self.Binv @ self.A[:, q]
            target = lbb[r] if to_lower else ubb[r]
            step = (xb[r] - target) / alpha[r]
            leaving = self.basis[r]
            self.x[self.basis] = xb - alpha * step
            self.x[q] += step
            self.x[leaving] = target
            self.state[leaving] = _AT_LOWER if to_lower else _AT_UPPER
            self._pivot(r, q, alpha)
            self.iterations += 1


def solve_dense_lp(
    c: np.ndarray,
    A: np.ndarray,
    b: np.ndarray,
    senses: np.ndarray,
    lb: np.ndarray,
    ub: np.ndarray,
    feas_tol: float = 1e-7,
    max_iter: int | None = None,
    warm: Basis | None = None,
) -> LpResult:
    """Solve one LP; ``senses`` holds ``SENSE_LE``/``SENSE_EQ``/``SENSE_GE`` per row."""
    return DenseLp(c, A, b, senses, feas_tol).solve(lb, ub, warm=warm, max_iter=max_iter)
