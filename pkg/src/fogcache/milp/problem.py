"""In-memory representation of a minimization MILP."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

CONTINUOUS = "continuous"
INTEGER = "integer"

LE, EQ, GE = "<=", "=", ">="
SENSES = (LE, EQ, GE)


class ProblemError(ValueError):
    """Structurally invalid problem."""


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str = CONTINUOUS
    lower: float = 0.0
    upper: float = math.inf

    @property
    def is_integer(self) -> bool:
        return self.kind == INTEGER


@dataclass(frozen=True)
class Constraint:
    name: str
    terms: tuple[tuple[str, float], ...]
    sense: str
    rhs: float

    def activity(self, values: Mapping[str, float]) -> float:
        return sum(coef * values[var] for var, coef in self.terms)

    def violation(self, values: Mapping[str, float]) -> float:
        lhs = self.activity(values)
        if self.sense == LE:
            return max(0.0, lhs - self.rhs)
        if self.sense == GE:
            return max(0.0, self.rhs - lhs)
        return abs(lhs - self.rhs)


def _merge_terms(terms: Iterable[tuple[str, float]]) -> tuple[tuple[str, float], ...]:
    merged: dict[str, float] = {}
    for var, coef in terms:
        merged[var] = merged.get(var, 0.0) + float(coef)
    return tuple((v, c) for v, c in merged.items() if c != 0.0)


@dataclass(frozen=True)
class MilpProblem:
    """Variables, linear constraints and a linear objective (always minimized).

    Instances are validated on construction and never mutated afterwards.
    Equality compares the canonical form: variables by name, terms as maps,
    constraints in order.
    """

    variables: tuple[Variable, ...] = ()
    constraints: tuple[Constraint, ...] = ()
    objective: tuple[tuple[str, float], ...] = ()
    name: str = "problem"
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "objective", _merge_terms(self.objective))
        index = {}
        for i, var in enumerate(self.variables):
            if var.name in index:
                raise ProblemError(f"duplicate variable name {var.name!r}")
            if var.kind not in (CONTINUOUS, INTEGER):
                raise ProblemError(f"variable {var.name!r} has unknown kind {var.kind!r}")
            if math.isnan(var.lower) or math.isnan(var.upper) or var.lower > var.upper:
                raise ProblemError(f"variable {var.name!r} has bounds {var.lower} > {var.upper}")
            if var.lower == math.inf or var.upper == -math.inf:
                raise ProblemError(f"variable {var.name!r} has an empty domain")
            index[var.name] = i
        object.__setattr__(self, "_index", index)
        self._check_terms("objective", self.objective)
        names = set()
        for con in self.constraints:
            if con.name in names:
                raise ProblemError(f"duplicate constraint name {con.name!r}")
            names.add(con.name)
            if con.sense not in SENSES:
                raise ProblemError(f"constraint {con.name!r} has unknown sense {con.sense!r}")
            if not math.isfinite(con.rhs):
                raise ProblemError(f"constraint {con.name!r} has non-finite rhs")
            if not con.terms:
                raise ProblemError(f"constraint {con.name!r} has no terms")
            self._check_terms(con.name, con.terms)

    def _check_terms(self, where: str, terms) -> None:
        seen = set()
        for var, coef in terms:
            if var not in self._index:
                raise ProblemError(f"{where} references undeclared variable {var!r}")
            if var in seen:
                raise ProblemError(f"{where} lists variable {var!r} twice")
            seen.add(var)
            if not math.isfinite(coef):
                raise ProblemError(f"{where} has non-finite coefficient on {var!r}")

    def index_of(self, name: str) -> int:
        return self._index[name]

    def variable(self, name: str) -> Variable:
        return self.variables[self._index[name]]

    @property
    def integer_variables(self) -> list[Variable]:
        return [v for v in self.variables if v.is_integer]

    def objective_value(self, values: Mapping[str, float]) -> float:
        return sum(coef * values[var] for var, coef in self.objective)

    def relaxed(self) -> "MilpProblem":
        """Copy with every integer variable made continuous."""
        return MilpProblem(
            tuple(Variable(v.name, CONTINUOUS, v.lower, v.upper) for v in self.variables),
            self.constraints,
            self.objective,
            self.name,
        )

    def with_bounds(self, bounds: Mapping[str, tuple[float, float]]) -> "MilpProblem":
        variables = tuple(
            Variable(v.name, v.kind, *bounds[v.name]) if v.name in bounds else v
            for v in self.variables
        )
        return MilpProblem(variables, self.constraints, self.objective, self.name)

    def canonical(self):
        variables = tuple(sorted((v.name, v.kind, v.lower, v.upper) for v in self.variables))
        constraints = tuple(
            (c.name, tuple(sorted(c.terms)), c.sense, c.rhs) for c in self.constraints
        )
        return variables, constraints, tuple(sorted(self.objective))

    def __eq__(self, other):
        if not isinstance(other, MilpProblem):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def lint(self) -> list[str]:
        """Structural problems that construction does not reject outright."""
        issues = []
        used = {var for var, _ in self.objective}
        for con in self.constraints:
            used.update(var for var, _ in con.terms)
        for var in self.variables:
            if var.name not in used and var.lower != var.upper:
                issues.append(f"variable {var.name!r} appears in no constraint or objective")
        return issues
