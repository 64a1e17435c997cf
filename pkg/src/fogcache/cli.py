"""Brown-energy optimizer for cloud versus fog video delivery.

Subcommands: solve, scenario, export-lp, simulate-esd.

Exit codes: 0 optimal (or success), 2 infeasible, 1 any other error or
non-optimal solver status.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from .config import ConfigError, FogcacheConfig, desk_config, load_config
from .energy import simulate_dispatch, write_dispatch_csv
from .milp import ScenarioFlags, build_model, export_lp
from .netmodel import TopologyError, build_nsfnet, load_topology, shortest_paths
from .report import emit_report, write_breakdown_csv
from .scenarios import ScenarioSpec, default_solver_options, run_scenario
from .solver import INFEASIBLE, OPTIMAL, SolverOptions, solve_mip, write_solution_csv
from .timeseries import HourlyTraces, TraceError, load_matrix, synth_demand, synth_irradiance

EXIT_OK, EXIT_ERROR, EXIT_INFEASIBLE = 0, 1, 2
DEFAULT_SYNTHETIC = "100:diurnal"


def _parse_synthetic(text: str) -> tuple[float, str]:
    try:
        peak, profile = text.split(":")
        return float(peak), profile
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected PEAK:PROFILE, got {text!r}") from None


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON configuration (default: bundled desk config)")
    p.add_argument("--topology", help="topology file (default: bundled NSFNET)")
    p.add_argument("--demand", help="demand CSV (node,hour,value)")
    p.add_argument("--irradiance", help="irradiance CSV (node,hour,value)")
    p.add_argument("--synthetic-demand", type=_parse_synthetic, metavar="PEAK:PROFILE",
                   help=f"synthetic demand, profile flat or diurnal (default {DEFAULT_SYNTHETIC})")
    p.add_argument("--peak-irradiance", type=float, default=1000.0,
                   help="peak W/m^2 of the synthetic half-sine irradiance (default 1000)")
    p.add_argument("--seed", type=int,
                   help="scale every demand cell by a random factor in [0.9, 1] (tests only)")
    p.add_argument("--exact-fibers", action="store_true",
                   help="integer fibre counts per link instead of amortized EDFA power")
    p.add_argument("--branching", choices=("most-fractional", "pseudo-cost"))
    p.add_argument("--time-limit", type=float, help="solver wall-clock limit per solve (s)")


def _model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--pue-fog", type=float)
    p.add_argument("--ssc", type=float, help="solar cell area per OLT (m^2)")
    p.add_argument("--emax", type=float, help="battery capacity per fog DC (kWh)")
    p.add_argument("--cdc-renewable", action="store_true", help="cloud DCs draw no brown power")
    p.add_argument("--cyclic-soc", action="store_true", help="battery ends the day where it began")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fogcache", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one instance")
    _common(p)
    _model_flags(p)
    p.add_argument("--out", help="directory for solution.csv and breakdown.csv")

    p = sub.add_parser("scenario", help="run sweep A (fog PUE), B (solar area) or C (battery)")
    p.add_argument("kind", choices=("A", "B", "C"))
    _common(p)
    p.add_argument("--values", type=float, nargs="+", help="sweep values (default: standard sweep)")
    p.add_argument("--pue-fog", type=float, help="fixed fog PUE for scenario B")
    p.add_argument("--out", default=".", help="report directory (default: current directory)")

    p = sub.add_parser("export-lp", help="write the instance as an LP file")
    _common(p)
    _model_flags(p)
    p.add_argument("--out", required=True, help="LP file to write")

    p = sub.add_parser("simulate-esd", help="greedy solar/battery dispatch of one fog DC")
    _common(p)
    p.add_argument("--pue-fog", type=float)
    p.add_argument("--ssc", type=float)
    p.add_argument("--emax", type=float)
    p.add_argument("--node", type=int, help="node to report (default: first node)")
    p.add_argument("--out", required=True, help="CSV file (hour,direct,charged,delivered,soc)")
    return parser


def _config(args) -> FogcacheConfig:
    cfg = load_config(args.config) if args.config else desk_config()
    power, pv, esd = cfg.power, cfg.pv, cfg.esd
    if getattr(args, "pue_fog", None) is not None:
        power = dataclasses.replace(power, pue_fog=args.pue_fog)
    if getattr(args, "ssc", None) is not None:
        pv = dataclasses.replace(pv, area_m2=args.ssc)
    if getattr(args, "emax", None) is not None:
        esd = dataclasses.replace(esd, e_max_kwh=args.emax,
                                  soc_init_kwh=min(esd.soc_init_kwh, args.emax))
    return dataclasses.replace(cfg, power=power, pv=pv, esd=esd)


def _inputs(args, cfg: FogcacheConfig):
    topo = load_topology(args.topology) if args.topology else build_nsfnet()
    if args.demand and args.synthetic_demand:
        raise ValueError("--demand and --synthetic-demand are mutually exclusive")
    if args.demand:
        demand = load_matrix(args.demand, topo)
    else:
        peak, profile = args.synthetic_demand or _parse_synthetic(DEFAULT_SYNTHETIC)
        demand = synth_demand(topo, peak, profile)
    if args.irradiance:
        irradiance = load_matrix(args.irradiance, topo)
    else:
        irradiance = synth_irradiance(topo, args.peak_irradiance)
    traces = HourlyTraces(topo.nodes, demand, irradiance)
    if args.seed is not None:
        rng = np.random.default_rng(args.seed)
        scale = rng.uniform(0.9, 1.0, size=traces.demand_gbps.shape)
        traces = traces.with_demand(traces.demand_gbps * scale)
    traces.validate(topo, cfg.power.olt_capacity_gbps)
    return topo, traces


def _options(args) -> SolverOptions:
    options = default_solver_options()
    changes = {}
    if args.branching:
        changes["branching"] = args.branching
    if args.time_limit:
        changes["time_limit"] = args.time_limit
    return dataclasses.replace(options, **changes)


def _flags(args, cfg: FogcacheConfig) -> ScenarioFlags:
    return ScenarioFlags(
        cdc_renewable=args.cdc_renewable,
        esd_enabled=cfg.esd.e_max_kwh > 0,
        exact_edfa_fibers=args.exact_fibers,
        cyclic_soc=args.cyclic_soc and cfg.esd.e_max_kwh > 0,
    )


def _status_code(status: str) -> int:
    if status == OPTIMAL:
        return EXIT_OK
    return EXIT_INFEASIBLE if status == INFEASIBLE else EXIT_ERROR


def cmd_solve(args) -> int:
    cfg = _config(args)
    topo, traces = _inputs(args, cfg)
    model = build_model(topo, shortest_paths(topo), cfg.power, traces, cfg.pv, cfg.esd,
                        _flags(args, cfg))
    solution = solve_mip(model.problem, _options(args))
    print(solution.summary())
    if solution.assignment:
        solution.assignment = model.complementary(solution.assignment)
        b = model.breakdown(solution.assignment)
        print(" ".join(f"{k}={v:.6f}" for k, v in b.subsystems().items())
              + f" fog_fraction={b.fog_fraction:.6f}")
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            write_solution_csv(solution, out / "solution.csv")
            write_breakdown_csv(b, out / "breakdown.csv")
    return _status_code(solution.status)


def cmd_scenario(args) -> int:
    cfg = _config(args)
    topo, traces = _inputs(args, cfg)
    spec = ScenarioSpec(args.kind, tuple(args.values) if args.values else None,
                        pue_fog=args.pue_fog, exact_fibers=args.exact_fibers)
    report = run_scenario(spec, topo, cfg, traces, _options(args))
    emit_report(report, args.out)
    print(f"baseline_kwh={report.baseline_kwh:.6f}")
    for p in report.points:
        print(f"{spec.parameter}={p.value:g} status={p.status} brown_kwh={p.brown_kwh:.6f} "
              f"savings_pct={100 * p.savings:.4f} fog_fraction={p.fog_fraction:.6f}")
    statuses = [p.status for p in report.points]
    if all(s == OPTIMAL for s in statuses):
        return EXIT_OK
    return EXIT_INFEASIBLE if INFEASIBLE in statuses else EXIT_ERROR


def cmd_export_lp(args) -> int:
    cfg = _config(args)
    topo, traces = _inputs(args, cfg)
    model = build_model(topo, shortest_paths(topo), cfg.power, traces, cfg.pv, cfg.esd,
                        _flags(args, cfg))
    export_lp(model.problem, args.out)
    return EXIT_OK


def cmd_simulate_esd(args) -> int:
    cfg = _config(args)
    topo, traces = _inputs(args, cfg)
    power = cfg.power
    load_kw = power.pue_fog * power.net_overhead_ratio * power.p_server_kw_per_gbps
    # every fog DC serves its whole demand
    load = load_kw * np.minimum(traces.demand_gbps, power.fdc_capacity_gbps)
    trace = simulate_dispatch(traces, cfg.pv, cfg.esd, load)
    node = topo.nodes[0] if args.node is None else args.node
    if node not in topo.nodes:
        raise ValueError(f"node {node} is not in the topology")
    write_dispatch_csv(trace, node, args.out)
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "scenario": cmd_scenario, "export-lp": cmd_export_lp,
            "simulate-esd": cmd_simulate_esd}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, TopologyError, TraceError, ValueError, OSError) as exc:
        print(f"fogcache: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
