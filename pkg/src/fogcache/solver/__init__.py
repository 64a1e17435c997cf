"""Exact desk-scale LP/MILP solving: revised simplex plus branch and bound."""

import csv
from pathlib import Path

from .mip import (
    MOST_FRACTIONAL,
    PSEUDO_COST,
    Solution,
    SolverOptions,
    SolveStats,
    solve_lp,
    solve_mip,
)
from .oracle import OracleRefusal, enumerate_oracle
from .simplex import INFEASIBLE, ITERATION_LIMIT, OPTIMAL, UNBOUNDED, solve_dense_lp


def write_solution_csv(solution: Solution, path) -> None:
    """``variable,value`` rows sorted by name, then a ``#`` summary line."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["variable", "value"])
        for name in sorted(solution.assignment):
            writer.writerow([name, repr(solution.assignment[name])])
        fh.write(f"# {solution.summary()}\n")


__all__ = [
    "INFEASIBLE",
    "ITERATION_LIMIT",
    "MOST_FRACTIONAL",
    "OPTIMAL",
    "PSEUDO_COST",
    "UNBOUNDED",
    "OracleRefusal",
    "Solution",
    "SolveStats",
    "SolverOptions",
    "enumerate_oracle",
    "solve_dense_lp",
    "solve_lp",
    "solve_mip",
    "write_solution_csv",
]
