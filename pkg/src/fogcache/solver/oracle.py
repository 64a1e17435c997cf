"""Exhaustive-enumeration reference solver for tiny MILPs."""

from __future__ import annotations

import itertools
import math

from ..milp.problem import MilpProblem
from .mip import Solution, SolveStats, SolverOptions, solve_lp
from .simplex import INFEASIBLE, OPTIMAL, UNBOUNDED


class OracleRefusal(ValueError):
    """Instance too large for exhaustive enumeration."""


MAX_VALUES_PER_VARIABLE = 8


def enumerate_oracle(
    problem: MilpProblem,
    max_integer_vars: int = 16,
    options: SolverOptions = SolverOptions(),
) -> Solution:
    """Fix every integer combination, solve the remaining LP, keep the best.

    Exact by construction.  Refuses (never approximates) when there are more
    than ``max_integer_vars`` integer variables or any of them has an
    unbounded domain or more than eight values.
    """
    ints = problem.integer_variables
    if len(ints) > max_integer_vars:
        raise OracleRefusal(f"{len(ints)} integer variables exceed the limit of {max_integer_vars}")
    domains = []
    for var in ints:
        if not (math.isfinite(var.lower) and math.isfinite(var.upper)):
            raise OracleRefusal(f"integer variable {var.name!r} has an unbounded domain")
        lo, hi = math.ceil(var.lower - 1e-9), math.floor(var.upper + 1e-9)
        if hi - lo + 1 > MAX_VALUES_PER_VARIABLE:
            raise OracleRefusal(f"integer variable {var.name!r} has {hi - lo + 1} values")
        domains.append(range(lo, hi + 1))

    stats = SolveStats()
    relaxed = problem.relaxed()
    best: Solution | None = None
    for combo in itertools.product(*domains):
        fixed = relaxed.with_bounds({v.name: (float(k), float(k)) for v, k in zip(ints, combo)})
        sol = solve_lp(fixed, options)
        stats.nodes += 1
        stats.lp_iterations += sol.stats.lp_iterations
        stats.lp_solves += sol.stats.lp_solves
        if sol.status == UNBOUNDED:
            return Solution(UNBOUNDED, math.nan, {}, math.inf, stats)
        if sol.status != OPTIMAL:
            continue
        if best is None or sol.objective < best.objective:
            best = sol
    if best is None:
        return Solution(INFEASIBLE, math.nan, {}, math.inf, stats)
    return Solution(OPTIMAL, best.objective, best.assignment, 0.0, stats)
