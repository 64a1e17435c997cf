"""LP and MILP solving for :class:`~fogcache.milp.problem.MilpProblem`.

Pipeline: convert to row-sparse arrays, presolve (fixed-variable removal,
singleton rows turned into bounds, integer bound rounding), split into
independent blocks of the constraint matrix, then solve every block either
as a plain LP or by best-first branch and bound over its LP relaxations.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field

import numpy as np

from ..milp.problem import EQ, GE, LE, MilpProblem
from .cuts import gmi_cuts
from .simplex import (
    INFEASIBLE,
    ITERATION_LIMIT,
    NUMERICAL,
    OPTIMAL,
    SENSE_EQ,
    SENSE_GE,
    SENSE_LE,
    UNBOUNDED,
    Basis,
    DenseLp,
)

MOST_FRACTIONAL = "most-fractional"
PSEUDO_COST = "pseudo-cost"

_SENSE_CODE = {LE: SENSE_LE, EQ: SENSE_EQ, GE: SENSE_GE}


@dataclass(frozen=True)
class SolverOptions:
    feas_tol: float = 1e-7
    int_tol: float = 1e-6
    gap_limit: float = 1e-6
    node_limit: int | None = None
    time_limit: float | None = None
    branching: str = MOST_FRACTIONAL
    deterministic_order: bool = True
    dual_reductions: bool = True
    cut_rounds: int = 10

    def __post_init__(self):
        for name in ("feas_tol", "int_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not self.gap_limit >= 0:
            raise ValueError("gap_limit must be >= 0")
        if self.node_limit is not None and not self.node_limit > 0:
            raise ValueError("node_limit must be positive or None")
        if self.time_limit is not None and not self.time_limit > 0:
            raise ValueError("time_limit must be positive or None")
        if self.cut_rounds < 0:
            raise ValueError("cut_rounds must be >= 0")
        if self.branching not in (MOST_FRACTIONAL, PSEUDO_COST):
            raise ValueError(f"unknown branching rule {self.branching!r}")


@dataclass
class SolveStats:
    nodes: int = 0
    lp_iterations: int = 0
    lp_solves: int = 0
    components: int = 0
    wall_time: float = 0.0


@dataclass
class Solution:
    status: str
    objective: float
    assignment: dict[str, float]
    gap: float
    stats: SolveStats = field(default_factory=SolveStats)

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL

    def summary(self) -> str:
        return (f"status={self.status} objective={self.objective!r} gap={self.gap!r} "
                f"nodes={self.stats.nodes}")


class _Budget:
    def __init__(self, options: SolverOptions):
        self.deadline = (time.perf_counter() + options.time_limit
                         if options.time_limit is not None else math.inf)
        self.node_limit = options.node_limit if options.node_limit is not None else math.inf
        self.nodes = 0

    def exhausted(self) -> bool:
        return self.nodes >= self.node_limit or time.perf_counter() > self.deadline


@dataclass
class _Rows:
    """Row-sparse problem data; ``rows[i] = (column indices, coefficients)``."""

    names: list[str]
    c: np.ndarray
    lb: np.ndarray
    ub: np.ndarray
    is_int: np.ndarray
    rows: list[tuple[np.ndarray, np.ndarray]]
    senses: list[int]
    rhs: list[float]


def _to_rows(problem: MilpProblem, relax: bool) -> _Rows:
    names = [v.name for v in problem.variables]
    index = {name: i for i, name in enumerate(names)}
    c = np.zeros(len(names))
    for var, coef in problem.objective:
        c[index[var]] += coef
    rows = []
    for con in problem.constraints:
        cols = np.fromiter((index[v] for v, _ in con.terms), dtype=int, count=len(con.terms))
        vals = np.fromiter((k for _, k in con.terms), dtype=float, count=len(con.terms))
        rows.append((cols, vals))
    return _Rows(
        names=names,
        c=c,
        lb=np.array([v.lower for v in problem.variables], dtype=float),
        ub=np.array([v.upper for v in problem.variables], dtype=float),
        is_int=np.array([(v.is_integer and not relax) for v in problem.variables], dtype=bool),
        rows=rows,
        senses=[_SENSE_CODE[con.sense] for con in problem.constraints],
        rhs=[float(con.rhs) for con in problem.constraints],
    )


class _Infeasible(Exception):
    pass


def _round_int_bounds(lb, ub, is_int, int_tol):
    lo = lb[is_int]
    hi = ub[is_int]
    lb[is_int] = np.where(np.isfinite(lo), np.ceil(lo - int_tol), lo)
    ub[is_int] = np.where(np.isfinite(hi), np.floor(hi + int_tol), hi)


def _presolve(data: _Rows, options: SolverOptions):
    """Tighten bounds in place; returns the indices of rows still active.

    Raises ``_Infeasible`` when a bound or an emptied row is violated.
    """
    tol = options.feas_tol
    lb, ub, is_int = data.lb, data.ub, data.is_int
    _round_int_bounds(lb, ub, is_int, options.int_tol)
    if np.any(lb > ub + tol):
        raise _Infeasible
    active = list(range(len(data.rows)))
    rhs = list(data.rhs)
    rows = list(data.rows)
    changed = True
    while changed:
        changed = False
        if options.dual_reductions and _fix_dominated_units(data, rows, rhs, active):
            changed = True
        fixed = np.abs(ub - lb) <= 1e-12
        keep = []
        for i in active:
            cols, vals = rows[i]
            mask = fixed[cols]
            if mask.any():
                rhs[i] -= float(vals[mask] @ lb[cols[mask]])
                cols, vals = cols[~mask], vals[~mask]
                rows[i] = (cols, vals)
            sense = data.senses[i]
            if len(cols) == 0:
                scale = max(1.0, abs(rhs[i]))
                if ((sense == SENSE_LE and rhs[i] < -tol * scale)
                        or (sense == SENSE_GE and rhs[i] > tol * scale)
                        or (sense == SENSE_EQ and abs(rhs[i]) > tol * scale)):
                    raise _Infeasible
                continue
            if len(cols) == 1:
                j, a = int(cols[0]), float(vals[0])
                value = rhs[i] / a
                upper = (sense == SENSE_LE) == (a > 0) or sense == SENSE_EQ
                lower = (sense == SENSE_GE) == (a > 0) or sense == SENSE_EQ
                if is_int[j]:
                    near = round(value)
                    if abs(value - near) <= options.int_tol:
                        value = float(near)
                if upper:
                    ub[j] = min(ub[j], math.floor(value + options.int_tol) if is_int[j] else value)
                if lower:
                    lb[j] = max(lb[j], math.ceil(value - options.int_tol) if is_int[j] else value)
                if lb[j] > ub[j]:
                    if lb[j] - ub[j] > tol * max(1.0, abs(value)):
                        raise _Infeasible
                    ub[j] = lb[j]
                changed = True
                continue
            keep.append(i)
        active = keep
    data.rows = rows
    data.rhs = rhs
    return active


def _fix_dominated_units(data: _Rows, rows, rhs, active) -> bool:
    """Fix to zero every unit dominated by a parallel, cheaper unit.

    A unit is the full column set of a row with zero right-hand side whose
    columns all have bounds ``[0, inf)``.  Units ``u`` and ``v`` are parallel
    when their columns pair up with equal own-row coefficients, equal kinds,
    identical coefficients in every other row and no entry in each other's
    row.  If ``v`` costs no more column by column, adding ``u``'s values onto
    ``v`` keeps every row satisfied and the objective no worse, so some
    optimum has ``u`` at zero.  (Alternative serving clouds reduce this way.)
    """
    lb, ub = data.lb, data.ub
    col_rows: dict[int, list[tuple[int, float]]] = {}
    for i in active:
        for j, a in zip(*rows[i]):
            col_rows.setdefault(int(j), []).append((i, float(a)))
    groups: dict[tuple, list[tuple[int, np.ndarray]]] = {}
    for i in active:
        cols, vals = rows[i]
        if rhs[i] != 0.0 or len(cols) < 2:
            continue
        if np.any(lb[cols] != 0.0) or np.any(np.isfinite(ub[cols])):
            continue
        members = []
        for j, a in zip(cols, vals):
            ext = tuple((r, v) for r, v in col_rows[int(j)] if r != i)
            members.append(((float(a), bool(data.is_int[j]), ext), int(j)))
        members.sort()
        key = (data.senses[i], tuple(sig for sig, _ in members))
        groups.setdefault(key, []).append((i, np.array([j for _, j in members])))

    changed = False
    for units in groups.values():
        if len(units) < 2:
            continue
        own_rows = {i for i, _ in units}
        alive = list(units)
        for row_u, cols_u in units:
            if any(r in own_rows for j in cols_u for r, _ in col_rows[int(j)] if r != row_u):
                continue
            for row_v, cols_v in alive:
                if row_v == row_u:
                    continue
                if np.all(data.c[cols_v] <= data.c[cols_u]):
                    ub[cols_u] = 0.0
                    alive = [(r, c) for r, c in alive if r != row_u]
                    changed = True
                    break
    return changed


def _blocks(data: _Rows, active: list[int]) -> list[tuple[list[int], list[int]]]:
    """Independent (columns, rows) blocks of the active constraint matrix."""
    parent = list(range(len(data.names)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in active:
        cols = data.rows[i][0]
        root = find(int(cols[0]))
        for j in cols[1:]:
            r = find(int(j))
            if r != root:
                if r < root:
                    root, r = r, root
                parent[r] = root
    groups: dict[int, tuple[list[int], list[int]]] = {}
    for i in active:
        root = find(int(data.rows[i][0][0]))
        groups.setdefault(root, ([], []))[1].append(i)
    free = np.abs(data.ub - data.lb) > 1e-12
    for j in range(len(data.names)):
        if not free[j]:
            continue
        root = find(j)
        if root in groups:
            groups[root][0].append(j)
    return [groups[k] for k in sorted(groups)]


@dataclass
class _Block:
    cols: np.ndarray
    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    senses: np.ndarray
    lb: np.ndarray
    ub: np.ndarray
    is_int: np.ndarray
    lp: DenseLp
    n_orig: int = 0

    @property
    def aggregate(self) -> np.ndarray:
        mask = np.zeros(len(self.c), dtype=bool)
        mask[self.n_orig:] = True
        return mask


def _make_block(data: _Rows, cols: list[int], rows: list[int], options: SolverOptions) -> _Block:
    cols_arr = np.array(cols, dtype=int)
    pos = {j: k for k, j in enumerate(cols)}
    A = np.zeros((len(rows), len(cols)))
    for r, i in enumerate(rows):
        rc, rv = data.rows[i]
        for j, v in zip(rc, rv):
            A[r, pos[int(j)]] += v
    c = data.c[cols_arr]
    b = np.array([data.rhs[i] for i in rows], dtype=float)
    senses = np.array([data.senses[i] for i in rows], dtype=int)
    lb = data.lb[cols_arr].copy()
    ub = data.ub[cols_arr].copy()
    is_int = data.is_int[cols_arr].copy()
    n = len(cols)

    groups = _symmetric_groups(c, is_int)
    if groups:
        g = len(groups)
        link = np.zeros((g, n + g))
        for k, members in enumerate(groups):
            link[k, members] = 1.0
            link[k, n + k] = -1.0
        A = np.vstack([np.hstack([A, np.zeros((len(rows), g))]), link])
        b = np.concatenate([b, np.zeros(g)])
        senses = np.concatenate([senses, np.full(g, SENSE_EQ)])
        c = np.concatenate([c, np.zeros(g)])
        lb = np.concatenate([lb, [lb[m].sum() for m in groups]])
        ub = np.concatenate([ub, [ub[m].sum() for m in groups]])
        is_int = np.concatenate([is_int, np.ones(g, dtype=bool)])
    return _Block(
        cols=cols_arr,
        c=c,
        A=A,
        b=b,
        senses=senses,
        lb=lb,
        ub=ub,
        is_int=is_int,
        lp=DenseLp(c, A, b, senses, options.feas_tol),
        n_orig=n,
    )


def _symmetric_groups(c: np.ndarray, is_int: np.ndarray) -> list[np.ndarray]:
    """Integer columns sharing one nonzero objective coefficient.

    Branching on the sum of such a group settles how many units the LP may
    spread across interchangeable columns (hours, say) before the individual
    columns are branched on; without it the fractional part just migrates
    between columns and the bound hardly moves.
    """
    by_cost: dict[float, list[int]] = {}
    for j in np.flatnonzero(is_int):
        if c[j] != 0.0:
            by_cost.setdefault(float(c[j]), []).append(int(j))
    return [np.array(m) for _, m in sorted(by_cost.items()) if len(m) >= 2]


def _lp(block: _Block, lb, ub, options: SolverOptions, stats: SolveStats, warm: Basis | None = None):
    res = block.lp.solve(lb, ub, warm=warm)
    stats.lp_iterations += res.iterations
    stats.lp_solves += 1
    return res


def _fractionality(x, is_int, int_tol):
    frac = np.abs(x - np.round(x))
    return np.where(is_int & (frac > int_tol), frac, 0.0)


class _PseudoCosts:
    def __init__(self, n):
        self.sum = np.zeros((2, n))
        self.count = np.zeros((2, n))

    def record(self, j, up, gain, dist):
        if dist > 0 and math.isfinite(gain):
            self.sum[int(up), j] += max(gain, 0.0) / dist
            self.count[int(up), j] += 1

    def estimates(self):
        with np.errstate(invalid="ignore", divide="ignore"):
            pc = self.sum / self.count
        for k in range(2):
            known = self.count[k] > 0
            fallback = pc[k][known].mean() if known.any() else 1.0
            pc[k][~known] = fallback
        return pc


@dataclass(order=True)
class _Node:
    bound: float
    seq: int
    lb: np.ndarray = field(compare=False)
    ub: np.ndarray = field(compare=False)
    x: np.ndarray = field(compare=False)
    basis: Basis | None = field(compare=False, default=None)
    depth: int = field(compare=False, default=0)


DIVE_EVERY = 64


def _dive(block: _Block, lb, ub, x, basis, cutoff, options: SolverOptions, stats: SolveStats):
    """Fractional diving: round the least fractional column, re-solve, repeat.

    Returns ``(x, objective)`` of an integral LP solution or ``None``.
    """
    lb, ub = lb.copy(), ub.copy()
    fix = block.is_int & ~block.aggregate
    for _ in range(int(fix.sum()) + 1):
        frac = _fractionality(x, fix, options.int_tol)
        if not frac.any():
            return x, float(block.c @ x)
        j = int(np.argmin(np.where(frac > 0, frac, np.inf)))
        for value in (round(x[j]), math.floor(x[j]) if round(x[j]) > x[j] else math.ceil(x[j])):
            lo, hi = lb.copy(), ub.copy()
            if value > x[j]:
                lo[j] = value
            else:
                hi[j] = value
            if lo[j] > hi[j]:
                continue
            res = _lp(block, lo, hi, options, stats, basis)
            if res.status == OPTIMAL and res.objective < cutoff:
                lb, ub, x, basis = lo, hi, res.x, res.basis
                break
        else:
            return None
    return None


def _root_cuts(block: _Block, root, options: SolverOptions, stats: SolveStats):
    """Tighten the root relaxation with rounds of Gomory mixed-integer cuts.

    Cut rows are appended to ``block`` in place.  Returns the LP result of the
    final round.
    """
    base_rows = len(block.b)
    for _ in range(options.cut_rounds):
        if root.tableau is None:
            break
        cuts = gmi_cuts(block.lp, root.tableau, block.is_int, block.lb, block.ub)
        if not cuts or len(block.b) - base_rows + len(cuts) > 2 * base_rows + 20:
            break
        pi = np.array([p for p, _ in cuts])
        A = np.vstack([block.A, pi])
        b = np.concatenate([block.b, [p0 for _, p0 in cuts]])
        senses = np.concatenate([block.senses, np.full(len(cuts), SENSE_GE)])
        lp = DenseLp(block.c, A, b, senses, options.feas_tol)
        res = lp.solve(block.lb, block.ub, keep_tableau=True)
        stats.lp_iterations += res.iterations
        stats.lp_solves += 1
        if res.status != OPTIMAL:
            break  # numerical trouble: keep the previous round
        block.A, block.b, block.senses, block.lp = A, b, senses, lp
        gain = res.objective - root.objective
        root = res
        if gain <= 1e-4 * max(1.0, abs(res.objective)):
            break
        if not _fractionality(root.x, block.is_int, options.int_tol).any():
            break
    return root


def _branch_and_bound(block: _Block, options: SolverOptions, stats: SolveStats, budget: _Budget):
    """Returns ``(status, x, objective, best_bound)`` for one block."""
    root = block.lp.solve(block.lb, block.ub, keep_tableau=options.cut_rounds > 0)
    stats.lp_iterations += root.iterations
    stats.lp_solves += 1
    if root.status != OPTIMAL:
        return root.status, None, math.nan, math.nan
    if not block.is_int.any():
        return OPTIMAL, root.x, root.objective, root.objective
    if _fractionality(root.x, block.is_int, options.int_tol).any():
        root = _root_cuts(block, root, options, stats)

    int_tol = options.int_tol
    incumbent_x, incumbent = None, math.inf

    def consider(x, obj):
        nonlocal incumbent_x, incumbent
        if obj < incumbent - 1e-12:
            incumbent_x, incumbent = x.copy(), obj

    def prune_margin():
        return max(options.gap_limit * abs(incumbent), 1e-9) if math.isfinite(incumbent) else 0.0

    frac = _fractionality(root.x, block.is_int, int_tol)
    if not frac.any():
        return OPTIMAL, root.x, root.objective, root.objective

    # rounding heuristics for an early incumbent
    fix = block.is_int & ~block.aggregate
    for trial in (np.ceil(root.x - int_tol), np.round(root.x)):
        lo = np.where(fix, np.clip(trial, block.lb, block.ub), block.lb)
        hi = np.where(fix, lo, block.ub)
        res = _lp(block, lo, hi, options, stats)
        if res.status == OPTIMAL:
            consider(res.x, res.objective)
    found = _dive(block, block.lb, block.ub, root.x, root.basis, incumbent, options, stats)
    if found is not None:
        consider(*found)

    pseudo = _PseudoCosts(len(block.c)) if options.branching == PSEUDO_COST else None
    seq = 0
    heap = [_Node(root.objective, seq, block.lb.copy(), block.ub.copy(), root.x, root.basis)]
    status = OPTIMAL
    while heap:
        if heap[0].bound >= incumbent - prune_margin():
            break
        if budget.exhausted():
            status = ITERATION_LIMIT
            break
        node = heapq.heappop(heap)
        budget.nodes += 1
        stats.nodes += 1
        if stats.nodes % DIVE_EVERY == 0:
            found = _dive(block, node.lb, node.ub, node.x, node.basis, incumbent - prune_margin(),
                          options, stats)
            if found is not None:
                consider(*found)
                if heap and node.bound >= incumbent - prune_margin():
                    continue

        frac = _fractionality(node.x, block.is_int, int_tol)
        if pseudo is None:
            score = np.where(frac > 0, 0.5 - np.abs((node.x - np.floor(node.x)) - 0.5), -1.0)
        else:
            pc = pseudo.estimates()
            f = node.x - np.floor(node.x)
            score = np.where(frac > 0, np.maximum(pc[0] * f, 1e-6) * np.maximum(pc[1] * (1 - f), 1e-6), -1.0)
        aggregate_frac = block.aggregate & (score >= 0)
        if aggregate_frac.any():
            score = np.where(aggregate_frac, score, -1.0)
        j = int(np.argmax(score))
        value = node.x[j]
        warm = node.basis
        if warm is not None:
            try:
                warm = Basis(warm.basis, warm.state, block.lp.factor(warm))
            except np.linalg.LinAlgError:
                warm = None

        for up in (False, True):
            lb, ub = node.lb.copy(), node.ub.copy()
            if up:
                lb[j] = math.ceil(value)
            else:
                ub[j] = math.floor(value)
            if lb[j] > ub[j]:
                continue
            res = _lp(block, lb, ub, options, stats, warm)
            if res.status == UNBOUNDED:
                return UNBOUNDED, None, math.nan, math.nan
            if res.status in (ITERATION_LIMIT, NUMERICAL):
                status = ITERATION_LIMIT  # subtree left unexplored
                continue
            if res.status != OPTIMAL:
                continue
            if pseudo is not None:
                dist = math.ceil(value) - value if up else value - math.floor(value)
                pseudo.record(j, up, res.objective - node.bound, dist)
            if res.objective >= incumbent - prune_margin():
                continue
            if not _fractionality(res.x, block.is_int, int_tol).any():
                consider(res.x, res.objective)
                continue
            seq += 1
            heapq.heappush(heap, _Node(res.objective, seq, lb, ub, res.x, res.basis, node.depth + 1))

    best_bound = min([n.bound for n in heap] + [incumbent])
    if incumbent_x is None:
        return (INFEASIBLE if status == OPTIMAL else ITERATION_LIMIT), None, math.nan, best_bound
    return status, incumbent_x, incumbent, best_bound


def _polish(block: _Block, x: np.ndarray, options: SolverOptions, stats: SolveStats):
    """Re-solve with integers fixed at their rounded values for a clean vertex."""
    if not block.is_int.any():
        return x
    fixed = np.round(x)
    fix = block.is_int & ~block.aggregate
    lo = np.where(fix, fixed, block.lb)
    hi = np.where(fix, fixed, block.ub)
    res = _lp(block, lo, hi, options, stats)
    if res.status != OPTIMAL:
        out = x.copy()
        out[block.is_int] = fixed[block.is_int]
        return out
    out = res.x.copy()
    out[block.is_int] = fixed[block.is_int]
    return out


def _lone_value(c, lb, ub):
    if c > 0:
        return lb
    if c < 0:
        return ub
    if math.isfinite(lb):
        return lb
    return ub if math.isfinite(ub) else 0.0


def _gap(incumbent: float, bound: float) -> float:
    if not math.isfinite(incumbent) or not math.isfinite(bound):
        return math.inf
    diff = incumbent - bound
    if diff <= 1e-9:
        return 0.0
    return diff / max(abs(incumbent), 1e-10)


def _solve(problem: MilpProblem, options: SolverOptions, relax: bool) -> Solution:
    started = time.perf_counter()
    stats = SolveStats()
    budget = _Budget(options)
    data = _to_rows(problem, relax)

    def finish(status, objective, assignment, gap):
        stats.wall_time = time.perf_counter() - started
        return Solution(status, objective, assignment, gap, stats)

    try:
        active = _presolve(data, options)
    except _Infeasible:
        return finish(INFEASIBLE, math.nan, {}, math.inf)

    x = np.where(np.isfinite(data.lb), data.lb, 0.0).astype(float)
    blocks = _blocks(data, active)
    stats.components = len(blocks)
    in_block = np.zeros(len(data.names), dtype=bool)
    for cols, _ in blocks:
        in_block[cols] = True

    for j in np.flatnonzero(~in_block):
        value = _lone_value(data.c[j], data.lb[j], data.ub[j])
        if not math.isfinite(value):
            return finish(UNBOUNDED, math.nan, {}, math.inf)
        x[j] = value

    status = OPTIMAL
    bound_total = 0.0
    for cols, rows in blocks:
        block = _make_block(data, cols, rows, options)
        if relax or not block.is_int.any():
            res = _lp(block, block.lb, block.ub, options, stats)
            sub_status, sub_x, sub_bound = res.status, res.x, res.objective
        else:
            sub_status, sub_x, _, sub_bound = _branch_and_bound(block, options, stats, budget)
            if sub_x is not None:
                sub_x = _polish(block, sub_x, options, stats)
        if sub_status in (INFEASIBLE, UNBOUNDED):
            return finish(sub_status, math.nan, {}, math.inf)
        if sub_status in (ITERATION_LIMIT, NUMERICAL):
            status = ITERATION_LIMIT
        if sub_x is None:
            bound_total = math.nan
            x[block.cols] = np.nan
            continue
        x[block.cols] = sub_x[: block.n_orig]
        bound_total += sub_bound if math.isfinite(sub_bound) else math.nan

    if np.any(np.isnan(x)):
        return finish(status, math.nan, {}, math.inf)
    objective = float(data.c @ x)
    assignment = dict(zip(data.names, (float(v) for v in x)))
    gap = _gap(objective, bound_total)
    return finish(status, objective, assignment, gap)


def solve_lp(problem: MilpProblem, options: SolverOptions = SolverOptions()) -> Solution:
    """Solve the LP relaxation (integrality is ignored)."""
    return _solve(problem, options, relax=True)


def solve_mip(problem: MilpProblem, options: SolverOptions = SolverOptions()) -> Solution:
    """Solve to proven optimality within ``options.gap_limit``."""
    return _solve(problem, options, relax=False)
