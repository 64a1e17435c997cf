"""Independent reference implementations used as test oracles.

Nothing here imports solver or model internals: the oracles only read the
public problem description and recompute answers from first principles.
"""

from __future__ import annotations

import heapq
import math

import numpy as np

from fogcache.milp import CONTINUOUS, EQ, GE, INTEGER, LE, Constraint, MilpProblem, Variable


# -- shortest paths -------------------------------------------------------

def dijkstra_km(links, source):
    """Textbook Dijkstra over an undirected ``(u, v, km)`` link list."""
    adj = {}
    for u, v, km in links:
        adj.setdefault(u, []).append((v, km))
        adj.setdefault(v, []).append((u, km))
    dist = {source: 0.0}
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, km in adj[u]:
            if d + km < dist.get(v, math.inf):
                dist[v] = d + km
                heapq.heappush(heap, (dist[v], v))
    return dist


# -- naive full-tableau simplex ------------------------------------------

def tableau_lp(c, A, b, senses, lb, ub):
    """Dense two-phase full-tableau simplex with Bland's rule.

    ``senses`` holds ``"<="``, ``"="`` or ``">="``; every ``lb`` must be finite.
    Returns ``(status, objective)`` with status ``optimal``, ``infeasible``
    or ``unbounded``.
    """
    c = np.asarray(c, float)
    A = np.asarray(A, float)
    b = np.asarray(b, float)
    lb = np.asarray(lb, float)
    ub = np.asarray(ub, float)
    n = len(c)
    # shift x = lb + y, y >= 0; finite upper bounds become rows
    b = b - A @ lb
    rows, rhs, kinds = list(A), list(b), list(senses)
    for j in range(n):
        if math.isfinite(ub[j]):
            e = np.zeros(n)
            e[j] = 1.0
            rows.append(e)
            rhs.append(ub[j] - lb[j])
            kinds.append(LE)
    m = len(rows)
    n_slack = sum(k != EQ for k in kinds)
    width = n + n_slack + m
    T = np.zeros((m, width + 1))
    s = n
    for i, (row, r, k) in enumerate(zip(rows, rhs, kinds)):
        T[i, :n] = row
        if k != EQ:
            T[i, s] = 1.0 if k == LE else -1.0
            s += 1
        T[i, -1] = r
        if r < 0:
            T[i] *= -1
        T[i, n + n_slack + i] = 1.0
    basis = list(range(n + n_slack, width))

    def run(cost, allowed):
        while True:
            cb = cost[basis]
            reduced = cost[:width] - cb @ T[:, :width]
            entering = next((j for j in range(width) if allowed[j] and reduced[j] < -1e-9), None)
            if entering is None:
                return "optimal"
            col = T[:, entering]
            ratios = [(T[i, -1] / col[i], basis[i], i) for i in range(m) if col[i] > 1e-9]
            if not ratios:
                return "unbounded"
            _, _, r = min(ratios)
            T[r] /= T[r, entering]
            for i in range(m):
                if i != r and T[i, entering] != 0:
                    T[i] -= T[i, entering] * T[r]
            basis[r] = entering

    phase1 = np.zeros(width)
    phase1[n + n_slack:] = 1.0
    run(phase1, np.ones(width, bool))
    if phase1[basis] @ T[:, -1] > 1e-7 * max(1.0, np.abs(b).max(initial=0.0)):
        return "infeasible", math.nan
    # drive zero-valued artificials out where possible
    for i in range(m):
        if basis[i] >= n + n_slack:
            for j in range(n + n_slack):
                if abs(T[i, j]) > 1e-9:
                    T[i] /= T[i, j]
                    for k in range(m):
                        if k != i and T[k, j] != 0:
                            T[k] -= T[k, j] * T[i]
                    basis[i] = j
                    break
    cost = np.zeros(width)
    cost[:n] = c
    allowed = np.zeros(width, bool)
    allowed[: n + n_slack] = True
    status = run(cost, allowed)
    if status != "optimal":
        return status, math.nan
    y = np.zeros(width)
    y[basis] = T[:, -1]
    return "optimal", float(c @ (lb + y[:n]))


def problem_arrays(problem: MilpProblem):
    names = [v.name for v in problem.variables]
    pos = {name: k for k, name in enumerate(names)}
    c = np.zeros(len(names))
    for name, coef in problem.objective:
        c[pos[name]] = coef
    A = np.zeros((len(problem.constraints), len(names)))
    for i, con in enumerate(problem.constraints):
        for name, coef in con.terms:
            A[i, pos[name]] = coef
    b = np.array([con.rhs for con in problem.constraints])
    senses = [con.sense for con in problem.constraints]
    lb = np.array([v.lower for v in problem.variables])
    ub = np.array([v.upper for v in problem.variables])
    return c, A, b, senses, lb, ub


# -- solution verifier ----------------------------------------------------

def verify(problem: MilpProblem, values, feas_tol=1e-7, int_tol=1e-6):
    """List of violations of ``values`` against ``problem`` (empty when feasible).

    Row violations are measured after dividing the row by its largest
    absolute coefficient.
    """
    issues = []
    for var in problem.variables:
        x = values[var.name]
        if x < var.lower - feas_tol or x > var.upper + feas_tol:
            issues.append(f"{var.name}={x} outside [{var.lower}, {var.upper}]")
        if var.kind == INTEGER and abs(x - round(x)) > int_tol:
            issues.append(f"{var.name}={x} not integral")
    for con in problem.constraints:
        lhs = sum(coef * values[name] for name, coef in con.terms)
        scale = max(abs(coef) for _, coef in con.terms)
        gap = {LE: lhs - con.rhs, GE: con.rhs - lhs, EQ: abs(lhs - con.rhs)}[con.sense] / scale
        if gap > feas_tol:
            issues.append(f"{con.name} violated by {gap:.3g}")
    return issues


# -- greedy battery dispatch ----------------------------------------------

def hand_dispatch(gen, load, e_max, eta_c, eta_d, decay, soc0=0.0):
    """Per-hour greedy rules recomputed step by step for one node.

    Returns lists ``direct, charged, delivered, soc`` (soc at end of hour).
    """
    direct, charged, delivered, socs = [], [], [], []
    soc = soc0
    for g, l in zip(gen, load):
        d = min(g, l)
        kept = decay * soc
        ch = min(g - d, max(e_max - kept, 0.0) / eta_c)
        out = min((l - d) / eta_d, kept)
        soc = kept + eta_c * ch - out
        direct.append(d)
        charged.append(ch)
        delivered.append(eta_d * out)
        socs.append(soc)
    return direct, charged, delivered, socs


# -- random instances -----------------------------------------------------

def random_mip(rng, max_ints=12, max_values=8, max_combos=512, n_cont=None, n_rows=None):
    """Random bounded MILP with at most ``max_combos`` integer assignments."""
    n_int = int(rng.integers(1, max_ints + 1))
    sizes = []
    combos = 1
    for _ in range(n_int):
        cap = max(1, min(max_values, max_combos // combos))
        size = int(rng.integers(1, cap + 1))
        sizes.append(size)
        combos *= size
    n_cont = int(rng.integers(0, 5)) if n_cont is None else n_cont
    variables = []
    for k, size in enumerate(sizes):
        lo = int(rng.integers(-2, 3))
        variables.append(Variable(f"i{k}", INTEGER, float(lo), float(lo + size - 1)))
    for k in range(n_cont):
        hi = math.inf if rng.random() < 0.3 else float(rng.uniform(1, 10))
        variables.append(Variable(f"x{k}", CONTINUOUS, 0.0, hi))
    names = [v.name for v in variables]
    n_rows = int(rng.integers(1, 7)) if n_rows is None else n_rows
    # anchor point keeps most instances feasible
    anchor = {v.name: (float(rng.integers(v.lower, v.upper + 1)) if v.kind == INTEGER
                       else float(rng.uniform(0, min(v.upper, 5.0)))) for v in variables}
    constraints = []
    for i in range(n_rows):
        chosen = [nm for nm in names if rng.random() < 0.6] or [names[0]]
        terms = tuple((nm, float(np.round(rng.uniform(-5, 5), 2)) or 1.0) for nm in chosen)
        lhs = sum(coef * anchor[nm] for nm, coef in terms)
        sense = (LE, GE, EQ)[int(rng.choice(3, p=[0.45, 0.45, 0.10]))]
        slack = float(rng.uniform(0, 3)) if rng.random() < 0.9 else -float(rng.uniform(0, 3))
        rhs = lhs + slack if sense == LE else lhs - slack if sense == GE else lhs
        constraints.append(Constraint(f"r{i}", terms, sense, float(np.round(rhs, 3))))
    # positive costs on unbounded columns keep the problem bounded
    objective = []
    for v in variables:
        coef = float(np.round(rng.uniform(-4, 4), 2))
        if v.upper == math.inf:
            coef = abs(coef) + 0.1
        objective.append((v.name, coef))
    return MilpProblem(tuple(variables), tuple(constraints), tuple(objective), "random")
