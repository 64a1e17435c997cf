"""Gomory mixed-integer cuts read off an optimal simplex tableau.

For a basic integer column with fractional value the tableau row reads
``x_B + sum_j a_j t_j = beta`` where ``t_j >= 0`` is the distance of nonbasic
column ``j`` from the bound it sits at.  The GMI inequality

    sum_{j int}  min(f_j / f0, (1 - f_j) / (1 - f0)) t_j
  + sum_{j cont} (a_j / f0 if a_j > 0 else -a_j / (1 - f0)) t_j  >=  1

holds for every mixed-integer feasible point.  Slack distances are rewritten
through their rows so each cut comes back over the structural columns only,
as ``pi . x >= pi0``.
"""

from __future__ import annotations

import math

import numpy as np

from .simplex import _AT_LOWER, _AT_UPPER, _BASIC, _FREE, DenseLp

MIN_FRACTION = 1e-3
MAX_DYNAMISM = 1e6
MIN_EFFICACY = 1e-6
RHS_SAFETY = 1e-9
MAX_PARALLEL = 0.999


def gmi_cuts(lp: DenseLp, tab, is_int: np.ndarray, lb: np.ndarray, ub: np.ndarray,
             limit: int = 50) -> list[tuple[np.ndarray, float]]:
    """Up to ``limit`` cuts, most efficacious first, from an optimal tableau."""
    n = lp.n
    x = tab.x[:n]
    nonbasic = np.flatnonzero(tab.state != _BASIC)
    movable = tab.ub[nonbasic] > tab.lb[nonbasic]
    nonbasic = nonbasic[movable]
    states = tab.state[nonbasic]
    int_col = np.zeros(lp.total, dtype=bool)
    int_col[:n] = is_int
    structural = nonbasic < n
    slack_row = np.full(lp.total, -1)
    slack_row[lp.slack_of_row[lp.slack_of_row >= 0]] = np.flatnonzero(lp.slack_of_row >= 0)

    found = []
    xb = tab.x[tab.basis]
    for r in range(lp.m):
        j0 = tab.basis[r]
        if j0 >= n or not is_int[j0]:
            continue
        f0 = xb[r] - math.floor(xb[r])
        if not MIN_FRACTION < f0 < 1 - MIN_FRACTION:
            continue
        row = tab.Binv[r] @ lp.A[:, nonbasic]
        row[np.abs(row) < 1e-12] = 0.0
        if np.any((states == _FREE) & (row != 0.0)):
            continue
        a = np.where(states == _AT_UPPER, -row, row)
        f = a - np.floor(a)
        coef = np.where(int_col[nonbasic],
                        np.minimum(f / f0, (1.0 - f) / (1.0 - f0)),
                        np.where(a > 0, a / f0, -a / (1.0 - f0)))
        coef[a == 0.0] = 0.0

        pi = np.zeros(n)
        pi0 = 1.0
        sel = structural & (coef != 0.0)
        cols = nonbasic[sel]
        at_low = states[sel] == _AT_LOWER
        pi[cols] += np.where(at_low, coef[sel], -coef[sel])
        pi0 += float(np.where(at_low, coef[sel] * tab.lb[cols], -coef[sel] * tab.ub[cols]).sum())
        for j, cj in zip(nonbasic[~structural & (coef != 0.0)], coef[~structural & (coef != 0.0)]):
            i = slack_row[j]
            if i < 0:
                continue  # artificial at zero in every feasible point
            sign = lp.slack_sign[i]
            # slack = sign * (b_i - a_i . x)
            pi -= cj * sign * lp.A[i, :n]
            pi0 -= cj * sign * lp.b[i]

        cut = _clean(pi, pi0, lb, ub)
        if cut is None:
            continue
        pi, pi0 = cut
        norm = float(np.linalg.norm(pi))
        efficacy = (pi0 - float(pi @ x)) / norm
        if efficacy >= MIN_EFFICACY:
            found.append((efficacy, r, pi, pi0))
    found.sort(key=lambda item: (-item[0], item[1]))
    kept, directions = [], []
    for _, _, pi, pi0 in found:
        unit = pi / np.linalg.norm(pi)
        if any(abs(float(unit @ d)) > MAX_PARALLEL for d in directions):
            continue
        kept.append((pi, pi0))
        directions.append(unit)
        if len(kept) == limit:
            break
    return kept


def _clean(pi, pi0, lb, ub):
    """Drop negligible coefficients safely and relax the right-hand side."""
    big = float(np.abs(pi).max(initial=0.0))
    if big == 0.0 or not math.isfinite(big) or not math.isfinite(pi0):
        return None
    tiny = (pi != 0.0) & (np.abs(pi) < big / MAX_DYNAMISM)
    for j in np.flatnonzero(tiny):
        # removing pi_j x_j from ``pi . x >= pi0`` is safe once pi0 absorbs
        # the largest value that term can take
        bound = ub[j] if pi[j] > 0 else lb[j]
        if not math.isfinite(bound):
            return None
        pi0 -= pi[j] * bound
        pi[j] = 0.0
    if not (pi != 0.0).any():
        return None
    pi0 -= RHS_SAFETY * max(1.0, abs(pi0))
    return pi, pi0
