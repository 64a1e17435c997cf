import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fogcache.energy import EsdConfig, PvConfig
from fogcache.milp import CONTINUOUS, EQ, GE, INTEGER, LE, Constraint, MilpProblem, ScenarioFlags, Variable
from fogcache.milp import build_model
from fogcache.netmodel import Topology, desk_power_config, shortest_paths
from fogcache.solver import (
    INFEASIBLE,
    ITERATION_LIMIT,
    OPTIMAL,
    PSEUDO_COST,
    UNBOUNDED,
    OracleRefusal,
    SolverOptions,
    enumerate_oracle,
    solve_dense_lp,
    solve_lp,
    solve_mip,
    write_solution_csv,
)
from fogcache.solver.cuts import gmi_cuts
from fogcache.solver.simplex import SENSE_EQ, SENSE_GE, SENSE_LE, DenseLp
from fogcache.timeseries import HourlyTraces

from oracles import problem_arrays, random_mip, tableau_lp, verify

_SENSE = {LE: SENSE_LE, EQ: SENSE_EQ, GE: SENSE_GE}


def _lp(variables, constraints, objective):
    return MilpProblem(tuple(variables), tuple(constraints), tuple(objective), "lp")


# -- linear programs ---------------------------------------------------------

def test_lp_textbook_example():
    # max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
    p = _lp([Variable("x"), Variable("y")],
            [Constraint("a", (("x", 1.0),), LE, 4), Constraint("b", (("y", 2.0),), LE, 12),
             Constraint("c", (("x", 3.0), ("y", 2.0)), LE, 18)],
            [("x", -3.0), ("y", -5.0)])
    sol = solve_lp(p)
    assert sol.status == OPTIMAL and sol.objective == pytest.approx(-36)
    assert sol.assignment["x"] == pytest.approx(2) and sol.assignment["y"] == pytest.approx(6)


def test_lp_infeasible_and_unbounded():
    infeasible = _lp([Variable("x", upper=1)], [Constraint("c", (("x", 1.0),), GE, 2)], [("x", 1.0)])
    assert solve_lp(infeasible).status == INFEASIBLE
    unbounded = _lp([Variable("x"), Variable("y")], [Constraint("c", (("x", 1.0), ("y", -1.0)), LE, 1)],
                    [("x", -1.0)])
    assert solve_lp(unbounded).status == UNBOUNDED


def test_lp_free_and_fixed_variables():
    p = _lp([Variable("x", lower=-math.inf), Variable("y", lower=3, upper=3)],
            [Constraint("c", (("x", 1.0), ("y", 1.0)), GE, -2)], [("x", 1.0), ("y", 2.0)])
    sol = solve_lp(p)
    assert sol.objective == pytest.approx(-5 + 6)
    assert sol.assignment["y"] == 3


def test_empty_problem():
    sol = solve_mip(MilpProblem())
    assert sol.status == OPTIMAL and sol.objective == 0 and sol.assignment == {}


def _random_lp(rng, n=20, m=12):
    c = rng.integers(-5, 6, n).astype(float)
    A = rng.integers(-4, 5, (m, n)).astype(float) * (rng.random((m, n)) < 0.5)
    lb = rng.integers(-3, 2, n).astype(float)
    ub = np.where(rng.random(n) < 0.7, lb + rng.integers(0, 8, n), np.inf)
    x0 = np.where(np.isfinite(ub), (lb + np.where(np.isfinite(ub), ub, 0)) / 2, lb + 1)
    senses = rng.choice([LE, EQ, GE], m, p=[0.45, 0.1, 0.45])
    slack = rng.integers(0, 4, m) * (rng.random(m) < 0.8)
    b = A @ x0 + np.where(senses == LE, slack, np.where(senses == GE, -slack, 0))
    if rng.random() < 0.15:
        b = b + np.where(senses == GE, 50, -50) * (np.arange(m) == 0)
    return c, A, b, list(senses), lb, ub


def test_random_lps_match_tableau_oracle():
    rng = np.random.default_rng(11)
    counts = {}
    for _ in range(150):
        c, A, b, senses, lb, ub = _random_lp(rng)
        res = solve_dense_lp(c, A, b, np.array([_SENSE[s] for s in senses]), lb, ub)
        status, obj = tableau_lp(c, A, b, senses, lb, ub)
        counts[status] = counts.get(status, 0) + 1
        assert res.status == status
        if status == OPTIMAL:
            assert res.objective == pytest.approx(obj, abs=1e-6 * max(1, abs(obj)))
            x = res.x
            assert np.all(x >= lb - 1e-7) and np.all(x <= ub + 1e-7)
            ax = A @ x
            for i, s in enumerate(senses):
                assert {LE: ax[i] <= b[i] + 1e-6, GE: ax[i] >= b[i] - 1e-6,
                        EQ: abs(ax[i] - b[i]) <= 1e-6}[s]
    assert counts.get(OPTIMAL, 0) > 50 and len(counts) >= 2


def test_warm_start_matches_cold():
    rng = np.random.default_rng(5)
    for _ in range(40):
        c, A, b, senses, lb, ub = _random_lp(rng)
        lp = DenseLp(c, A, b, np.array([_SENSE[s] for s in senses]))
        first = lp.solve(lb, ub)
        if first.status != OPTIMAL:
            continue
        j = int(rng.integers(len(c)))
        ub2 = ub.copy()
        ub2[j] = max(lb[j], math.floor(first.x[j]) - 1) if first.x[j] > lb[j] else ub[j]
        warm = lp.solve(lb, ub2, warm=first.basis)
        cold = DenseLp(c, A, b, np.array([_SENSE[s] for s in senses])).solve(lb, ub2)
        assert warm.status == cold.status
        if cold.status == OPTIMAL:
            assert warm.objective == pytest.approx(cold.objective, abs=1e-6)


# -- mixed-integer programs --------------------------------------------------

def test_knapsack_matches_enumeration():
    values = [10, 13, 7, 8, 12, 9, 4]
    weights = [5, 7, 3, 4, 6, 5, 2]
    p = _lp([Variable(f"x{i}", INTEGER, 0, 1) for i in range(7)],
            [Constraint("w", tuple((f"x{i}", float(w)) for i, w in enumerate(weights)), LE, 15)],
            [(f"x{i}", -float(v)) for i, v in enumerate(values)])
    best = max(sum(v for v, k in zip(values, pick) if k)
               for pick in itertools.product((0, 1), repeat=7)
               if sum(w for w, k in zip(weights, pick) if k) <= 15)
    for options in (SolverOptions(), SolverOptions(branching=PSEUDO_COST), SolverOptions(cut_rounds=0)):
        sol = solve_mip(p, options)
        assert sol.status == OPTIMAL and sol.objective == pytest.approx(-best)
        assert verify(p, sol.assignment) == []


def test_integral_lp_needs_no_branching():
    p = _lp([Variable("x", INTEGER, 0, 10), Variable("y", INTEGER, 0, 10)],
            [Constraint("c", (("x", 1.0), ("y", 1.0)), GE, 4)], [("x", 1.0), ("y", 2.0)])
    sol = solve_mip(p)
    assert sol.objective == 4 and sol.stats.nodes <= 1


def test_integer_infeasible():
    p = _lp([Variable("x", INTEGER, 0, 7)], [Constraint("c", (("x", 2.0),), EQ, 3)], [("x", 1.0)])
    assert solve_mip(p).status == INFEASIBLE
    assert enumerate_oracle(p).status == INFEASIBLE


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_mips_match_oracle(seed):
    rng = np.random.default_rng(seed)
    p = random_mip(rng)
    ref = enumerate_oracle(p)
    options = SolverOptions(branching=PSEUDO_COST if seed % 2 else SolverOptions().branching)
    sol = solve_mip(p, options)
    assert sol.status == ref.status
    if ref.status == OPTIMAL:
        assert sol.objective == pytest.approx(ref.objective, abs=1e-6 * max(1, abs(ref.objective)))
        assert verify(p, sol.assignment) == []
        lp = solve_lp(p)
        assert lp.objective <= sol.objective + 1e-7


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_presolve_and_cuts_do_not_change_optimum(seed):
    p = random_mip(np.random.default_rng(seed))
    base = solve_mip(p)
    for options in (SolverOptions(dual_reductions=False), SolverOptions(cut_rounds=0)):
        other = solve_mip(p, options)
        assert other.status == base.status
        if base.status == OPTIMAL:
            assert other.objective == pytest.approx(base.objective, abs=1e-6 * max(1, abs(base.objective)))


def test_gmi_cuts_never_remove_integer_optimum():
    rng = np.random.default_rng(3)
    produced = 0
    for _ in range(120):
        p = random_mip(rng)
        ref = enumerate_oracle(p)
        if ref.status != OPTIMAL:
            continue
        c, A, b, senses, lb, ub = problem_arrays(p)
        lp = DenseLp(c, A, b, np.array([_SENSE[s] for s in senses]))
        res = lp.solve(lb, ub, keep_tableau=True)
        if res.status != OPTIMAL:
            continue
        is_int = np.array([v.kind == INTEGER for v in p.variables])
        x_star = np.array([ref.assignment[v.name] for v in p.variables])
        for pi, pi0 in gmi_cuts(lp, res.tableau, is_int, lb, ub):
            produced += 1
            assert pi @ x_star >= pi0 - 1e-7
            assert pi @ res.x[:len(c)] < pi0
    assert produced > 20


def _tiny_model():
    topo = Topology((1, 2), ((1, 2, 500.0),), (2,))
    demand = np.array([[30.0, 35.0], [20.0, 40.0]])
    irr = np.array([[800.0, 0.0]] * 2)
    return build_model(topo, shortest_paths(topo), desk_power_config(), HourlyTraces(topo.nodes, demand, irr),
                       PvConfig(40), EsdConfig(e_max_kwh=5), ScenarioFlags(esd_enabled=True))


def test_small_model_matches_oracle():
    problem = _tiny_model().problem
    ints = problem.integer_variables
    assert len(ints) == 12
    # demand <= 40 Gbps needs at most one wavelength, metro unit and OLT
    narrowed = problem.with_bounds({v.name: (1.0 if v.name.startswith("o(") else 0.0, 1.0) for v in ints})
    ref = enumerate_oracle(narrowed, max_integer_vars=16)
    sol = solve_mip(narrowed)
    assert ref.status == OPTIMAL
    assert sol.objective == pytest.approx(ref.objective, abs=1e-7)
    assert solve_mip(problem).objective == pytest.approx(ref.objective, abs=1e-7)


def test_oracle_refuses_large_instances():
    big = _lp([Variable(f"x{i}", INTEGER, 0, 1) for i in range(20)], [], [(f"x{i}", 1.0) for i in range(20)])
    with pytest.raises(OracleRefusal):
        enumerate_oracle(big)
    wide = _lp([Variable("x", INTEGER, 0, 20)], [], [("x", 1.0)])
    with pytest.raises(OracleRefusal):
        enumerate_oracle(wide)
    unbounded = _lp([Variable("x", INTEGER)], [], [("x", 1.0)])
    with pytest.raises(OracleRefusal):
        enumerate_oracle(unbounded)


def test_deterministic_results():
    p = random_mip(np.random.default_rng(99), max_ints=12)
    first = solve_mip(p)
    second = solve_mip(p)
    assert first.assignment == second.assignment and first.objective == second.objective
    assert first.stats.nodes == second.stats.nodes


def test_node_limit_reports_incomplete_search():
    rng = np.random.default_rng(2)
    weights = rng.integers(20, 60, 30)
    p = _lp([Variable(f"x{i}", INTEGER, 0, 1) for i in range(30)],
            [Constraint("w", tuple((f"x{i}", float(w)) for i, w in enumerate(weights)), LE,
                        float(weights.sum() // 2) + 0.5)],
            [(f"x{i}", -float(w) - 0.1 * (i % 3)) for i, w in enumerate(weights)])
    sol = solve_mip(p, SolverOptions(node_limit=1, cut_rounds=0))
    assert sol.status in (OPTIMAL, ITERATION_LIMIT)
    if sol.status == ITERATION_LIMIT:
        assert sol.gap > 0


@pytest.mark.parametrize("kwargs", [dict(feas_tol=0), dict(gap_limit=-1), dict(node_limit=0),
                                    dict(time_limit=0), dict(cut_rounds=-1), dict(branching="random")])
def test_options_validation(kwargs):
    with pytest.raises(ValueError):
        SolverOptions(**kwargs)


def test_solution_csv(tmp_path):
    p = _lp([Variable("b"), Variable("a", INTEGER, 0, 5)], [Constraint("c", (("a", 1.0), ("b", 1.0)), GE, 2.5)],
            [("a", 1.0), ("b", 1.5)])
    sol = solve_mip(p)
    write_solution_csv(sol, tmp_path / "s.csv")
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert lines[0] == "variable,value"
    assert [line.split(",")[0] for line in lines[1:3]] == ["a", "b"]
    assert lines[-1].startswith("# status=optimal objective=")
