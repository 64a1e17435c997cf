"""Parameter sweeps over fog PUE (A), solar panel area (B) and battery size (C).

Every sweep point is one MILP solve.  Savings are measured against a
per-scenario baseline:

* A: forced cloud-only delivery (fog DCs switched off) with brown cloud DCs;
* B: cloud-only delivery from renewable cloud DCs, i.e. transport energy only;
* C: the scenario B optimum at the fixed panel area, without a battery.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

from .config import FogcacheConfig
from .energy import EsdConfig
from .milp import CLOUD_ONLY, FOG_ONLY, Breakdown, ScenarioFlags, build_model
from .netmodel import PathTable, PowerConfig, Topology, shortest_paths
from .solver import OPTIMAL, PSEUDO_COST, Solution, SolverOptions, solve_mip
from .timeseries import HourlyTraces

SCENARIO_A, SCENARIO_B, SCENARIO_C = "A", "B", "C"

DEFAULT_VALUES = {
    SCENARIO_A: (1.25, 1.20, 1.15, 1.10),
    SCENARIO_B: (50.0, 100.0, 150.0, 200.0, 250.0),
    SCENARIO_C: (20.0, 30.0, 40.0, 50.0),
}
SWEEP_PARAMETER = {SCENARIO_A: "pue_fog", SCENARIO_B: "ssc_m2", SCENARIO_C: "e_max_kwh"}

C_SSC_M2 = 250.0
C_PUE_FOG = 1.1


def default_solver_options() -> SolverOptions:
    """Pseudo-cost branching: markedly more robust than most-fractional on battery sweeps."""
    return SolverOptions(branching=PSEUDO_COST)


@dataclass(frozen=True)
class ScenarioSpec:
    """One sweep.  ``values`` defaults to the standard sweep of ``kind``.

    ``pue_fog`` (B only; ``None`` keeps the configured value) and
    ``cyclic_soc`` (C only) tune the fixed part of the model.
    """

    kind: str
    values: tuple[float, ...] | None = None
    pue_fog: float | None = None
    exact_fibers: bool = False
    cyclic_soc: bool = False

    def __post_init__(self):
        if self.kind not in DEFAULT_VALUES:
            raise ValueError(f"scenario kind must be one of A, B, C, got {self.kind!r}")
        values = DEFAULT_VALUES[self.kind] if self.values is None else self.values
        values = tuple(float(v) for v in values)
        if not values:
            raise ValueError("sweep must contain at least one value")
        object.__setattr__(self, "values", values)
        if self.kind == SCENARIO_C and self.pue_fog not in (None, C_PUE_FOG):
            raise ValueError(f"scenario C fixes pue_fog = {C_PUE_FOG}")

    @property
    def parameter(self) -> str:
        return SWEEP_PARAMETER[self.kind]


@dataclass
class PointResult:
    """Outcome of one sweep point.  Energy fields are NaN when no solution exists."""

    value: float
    status: str
    solution: Solution
    breakdown: Breakdown | None
    baseline_kwh: float

    @property
    def brown_kwh(self) -> float:
        return self.breakdown.brown_kwh if self.breakdown is not None else math.nan

    @property
    def transport_kwh(self) -> float:
        return self.breakdown.transport_kwh if self.breakdown is not None else math.nan

    @property
    def subsystems(self) -> dict[str, float]:
        if self.breakdown is None:
            return {k: math.nan for k in ("core", "metro", "olt", "fdc", "cdc")}
        return self.breakdown.subsystems()

    @property
    def fog_fraction(self) -> float:
        return self.breakdown.fog_fraction if self.breakdown is not None else math.nan

    def _sum(self, name: str) -> float:
        return float(getattr(self.breakdown, name).sum()) if self.breakdown is not None else math.nan

    @property
    def solar_direct_kwh(self) -> float:
        return self._sum("solar_direct")

    @property
    def solar_charged_kwh(self) -> float:
        return self._sum("solar_charged")

    @property
    def esd_delivered_kwh(self) -> float:
        return self._sum("esd_delivered")

    @property
    def cdc_green_kwh(self) -> float:
        return self._sum("cdc_green")

    @property
    def savings(self) -> float:
        """``(baseline - value) / baseline``; NaN when undefined."""
        if not self.baseline_kwh > 0 or self.breakdown is None:
            return math.nan
        return (self.baseline_kwh - self.brown_kwh) / self.baseline_kwh


@dataclass
class ScenarioReport:
    spec: ScenarioSpec
    baseline_kwh: float
    baseline: Breakdown | None
    points: list[PointResult] = field(default_factory=list)

    def brown(self) -> list[float]:
        return [p.brown_kwh for p in self.points]


def _as_config(cfg) -> FogcacheConfig:
    if isinstance(cfg, FogcacheConfig):
        return cfg
    if isinstance(cfg, PowerConfig):
        return FogcacheConfig(power=cfg)
    raise TypeError(f"expected FogcacheConfig or PowerConfig, got {type(cfg).__name__}")


def _point_inputs(spec: ScenarioSpec, cfg: FogcacheConfig, value: float):
    """``(power, pv, esd, flags)`` of one sweep point."""
    power, pv, esd = cfg.power, cfg.pv, cfg.esd
    exact = spec.exact_fibers
    if spec.kind == SCENARIO_A:
        return (dataclasses.replace(power, pue_fog=value),
                dataclasses.replace(pv, area_m2=0.0),
                dataclasses.replace(esd, e_max_kwh=0.0, soc_init_kwh=0.0),
                ScenarioFlags(exact_edfa_fibers=exact))
    if spec.kind == SCENARIO_B:
        if spec.pue_fog is not None:
            power = dataclasses.replace(power, pue_fog=spec.pue_fog)
        return (power,
                dataclasses.replace(pv, area_m2=value),
                dataclasses.replace(esd, e_max_kwh=0.0, soc_init_kwh=0.0),
                ScenarioFlags(cdc_renewable=True, exact_edfa_fibers=exact))
    esd = dataclasses.replace(esd, e_max_kwh=value, soc_init_kwh=min(esd.soc_init_kwh, value))
    return (dataclasses.replace(power, pue_fog=C_PUE_FOG),
            dataclasses.replace(pv, area_m2=C_SSC_M2),
            esd,
            ScenarioFlags(cdc_renewable=True, esd_enabled=value > 0,
                          exact_edfa_fibers=exact, cyclic_soc=spec.cyclic_soc and value > 0))


def _baseline_inputs(spec: ScenarioSpec, cfg: FogcacheConfig):
    power, pv, esd, flags = _point_inputs(spec, cfg, spec.values[0])
    no_esd = dataclasses.replace(esd, e_max_kwh=0.0, soc_init_kwh=0.0)
    if spec.kind == SCENARIO_A:
        return power, pv, no_esd, dataclasses.replace(flags, delivery=CLOUD_ONLY)
    if spec.kind == SCENARIO_B:
        return power, dataclasses.replace(pv, area_m2=0.0), no_esd, dataclasses.replace(
            flags, delivery=CLOUD_ONLY)
    return power, pv, no_esd, dataclasses.replace(flags, esd_enabled=False, cyclic_soc=False)


def _solve(topo, paths, traces, inputs, options):
    power, pv, esd, flags = inputs
    model = build_model(topo, paths, power, traces, pv, esd, flags)
    solution = solve_mip(model.problem, options)
    if solution.assignment:
        solution.assignment = model.complementary(solution.assignment)
    breakdown = model.breakdown(solution.assignment) if solution.assignment else None
    return solution, breakdown


def run_scenario(
    spec: ScenarioSpec,
    topo: Topology,
    cfg: FogcacheConfig | PowerConfig,
    traces: HourlyTraces,
    solver_opts: SolverOptions | None = None,
    paths: PathTable | None = None,
) -> ScenarioReport:
    """Solve the baseline and every sweep point, in sweep order."""
    cfg = _as_config(cfg)
    options = default_solver_options() if solver_opts is None else solver_opts
    paths = shortest_paths(topo) if paths is None else paths

    base_solution, base_breakdown = _solve(topo, paths, traces, _baseline_inputs(spec, cfg), options)
    baseline_kwh = base_breakdown.brown_kwh if base_solution.status == OPTIMAL else math.nan
    report = ScenarioReport(spec, baseline_kwh, base_breakdown)
    for value in spec.values:
        solution, breakdown = _solve(topo, paths, traces, _point_inputs(spec, cfg, value), options)
        report.points.append(PointResult(value, solution.status, solution, breakdown, baseline_kwh))
    return report


def transport_saving_fraction(full_fog, full_cdc) -> float | None:
    """``1 - transport_fog / transport_cdc`` for two solved breakdowns or points.

    Returns ``None`` when the cloud-delivery transport energy is zero.
    """
    baseline = full_cdc.transport_kwh
    if not baseline > 0:
        return None
    return 1.0 - full_fog.transport_kwh / baseline


def full_delivery_pair(topo: Topology, cfg: FogcacheConfig | PowerConfig, traces: HourlyTraces,
                       solver_opts: SolverOptions | None = None, paths: PathTable | None = None):
    """Breakdowns of forced full-fog and forced full-cloud delivery (no solar, no battery)."""
    cfg = _as_config(cfg)
    options = default_solver_options() if solver_opts is None else solver_opts
    paths = shortest_paths(topo) if paths is None else paths
    pv = dataclasses.replace(cfg.pv, area_m2=0.0)
    esd = EsdConfig()
    out = []
    for mode in (FOG_ONLY, CLOUD_ONLY):
        solution, breakdown = _solve(topo, paths, traces,
                                     (cfg.power, pv, esd, ScenarioFlags(delivery=mode)), options)
        if solution.status != OPTIMAL:
            raise RuntimeError(f"{mode} delivery solve ended with status {solution.status}")
        out.append(breakdown)
    return tuple(out)
