"""Daily brown-energy minimization model for cloud versus fog VoD delivery.

Indices: ``n`` node, ``c`` cloud node, ``t`` hour, ``l`` link.  Powers are
in kW and each step lasts one hour, so objective terms are kWh per day.

Variables (per node and hour unless noted)::

    f_fog(n,t)     Gbps served by the fog DC at n           0 <= . <= fdc capacity
    f_cld(n,c,t)   Gbps served to n from cloud c
    lam(n,c,t)     wavelengths on the c -> n lightpath       integer
    m(n,t)         metro units of metro_port_gbps            integer
    o(n,t)         active OLTs                               integer
    g_dir(n,t)     solar kW used directly by the fog DC
    g_chg(n,t)     solar kW sent into the battery
    dis(n,t)       kW drawn out of the battery
    soc(n,t)       battery kWh at the start of hour t, t = 0..H
    b_fog(n,t)     brown kW drawn by the fog DC
    fib(u,v,t)     lit fibres on link (u, v)                 integer, exact EDFA mode only

Constraints::

    demand     f_fog + sum_c f_cld = D
    lam_cap    line_rate * lam >= f_cld
    metro      metro_port_gbps * m >= sum_c f_cld
    olt        olt_capacity * o >= D
    solar      g_dir + g_chg <= PV
    esd        soc(t+1) = decay * soc(t) + eta_c * g_chg - dis
    fdc_brown  b_fog >= L * f_fog - g_dir - eta_d * dis
    green_cap  g_dir + eta_d * dis <= L * f_fog
    fib_cap    wavelengths_per_fiber * fib >= sum of lam routed over the link

with ``L = pue_fog * ratio * server kW/Gbps``.  The fog capacity limit is a
bound on ``f_fog``; with the battery disabled ``g_chg``, ``dis`` and ``soc``
are fixed to zero and no ``esd`` rows are emitted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..energy import EsdConfig, PvConfig, pv_output_w
from ..netmodel import (
    Link,
    PathTable,
    PowerConfig,
    Topology,
    fibre_edfa_watts,
    pair_power_table,
)
from ..timeseries import HourlyTraces
from .problem import CONTINUOUS, EQ, GE, INTEGER, LE, Constraint, MilpProblem, Variable

OPTIMAL_SPLIT = "optimal"
CLOUD_ONLY = "cloud_only"
FOG_ONLY = "fog_only"
_DELIVERY_MODES = (OPTIMAL_SPLIT, CLOUD_ONLY, FOG_ONLY)


@dataclass(frozen=True)
class ScenarioFlags:
    cdc_renewable: bool = False
    esd_enabled: bool = False
    exact_edfa_fibers: bool = False
    cyclic_soc: bool = False
    delivery: str = OPTIMAL_SPLIT

    def __post_init__(self):
        if self.delivery not in _DELIVERY_MODES:
            raise ValueError(f"delivery must be one of {_DELIVERY_MODES}, got {self.delivery!r}")


class ModelError(ValueError):
    """Inputs cannot be assembled into a consistent model."""


def v_fog(n, t): return f"f_fog({n},{t})"
def v_cld(n, c, t): return f"f_cld({n},{c},{t})"
def v_lam(n, c, t): return f"lam({n},{c},{t})"
def v_metro(n, t): return f"m({n},{t})"
def v_olt(n, t): return f"o({n},{t})"
def v_gdir(n, t): return f"g_dir({n},{t})"
def v_gchg(n, t): return f"g_chg({n},{t})"
def v_dis(n, t): return f"dis({n},{t})"
def v_soc(n, t): return f"soc({n},{t})"
def v_brown(n, t): return f"b_fog({n},{t})"
def v_fib(link, t): return f"fib({link[0]},{link[1]},{t})"


def expected_variable_count(n_nodes: int, n_clouds: int, hours: int,
                            n_links: int = 0, exact_fibers: bool = False) -> int:
    """Closed-form variable count of :func:`build_problem`."""
    count = hours * n_nodes * (7 + 2 * n_clouds) + n_nodes * (hours + 1)
    if exact_fibers:
        count += n_links * hours
    return count


@dataclass
class Breakdown:
    """Per node-hour energy (kWh) split by subsystem, decoded from a solution.

    ``cdc_brown`` is what the objective bills for cloud DCs; ``cdc_green`` is
    cloud DC energy drawn from renewables (reported, not billed).
    ``core_links`` holds exact-mode fibre EDFA energy per link and hour; it is
    counted in :attr:`core_kwh` but has no node.
    """

    nodes: tuple[int, ...]
    core: np.ndarray
    metro: np.ndarray
    olt: np.ndarray
    fdc: np.ndarray
    cdc_brown: np.ndarray
    cdc_green: np.ndarray
    fog_gbps: np.ndarray
    cloud_gbps: np.ndarray
    solar_direct: np.ndarray
    solar_charged: np.ndarray
    esd_delivered: np.ndarray
    soc: np.ndarray
    core_links: dict[Link, np.ndarray] = field(default_factory=dict)

    @property
    def core_kwh(self) -> float:
        return float(self.core.sum() + sum(v.sum() for v in self.core_links.values()))

    @property
    def metro_kwh(self) -> float:
        return float(self.metro.sum())

    @property
    def olt_kwh(self) -> float:
        return float(self.olt.sum())

    @property
    def fdc_kwh(self) -> float:
        return float(self.fdc.sum())

    @property
    def cdc_kwh(self) -> float:
        return float(self.cdc_brown.sum())

    @property
    def cdc_green_kwh(self) -> float:
        return float(self.cdc_green.sum())

    @property
    def transport_kwh(self) -> float:
        return self.core_kwh + self.metro_kwh + self.olt_kwh

    @property
    def brown_kwh(self) -> float:
        return self.transport_kwh + self.fdc_kwh + self.cdc_kwh

    @property
    def fog_fraction(self) -> float:
        total = self.fog_gbps.sum() + self.cloud_gbps.sum()
        return float(self.fog_gbps.sum() / total) if total > 0 else math.nan

    def subsystems(self) -> dict[str, float]:
        return {
            "core": self.core_kwh,
            "metro": self.metro_kwh,
            "olt": self.olt_kwh,
            "fdc": self.fdc_kwh,
            "cdc": self.cdc_kwh,
        }


@dataclass(frozen=True)
class FogcacheModel:
    """A built problem together with the inputs needed to decode solutions."""

    problem: MilpProblem
    topo: Topology
    paths: PathTable
    power: PowerConfig
    traces: HourlyTraces
    pv: PvConfig
    esd: EsdConfig
    flags: ScenarioFlags
    kappa_w: dict
    pv_kw: np.ndarray
    fog_load_kw_per_gbps: float

    def complementary(self, values) -> dict[str, float]:
        """Copy of ``values`` with no hour both charging and discharging a battery.

        Where both happen, discharge drops by ``delta = min(dis, eta_c * g_chg)``,
        charging by ``delta / eta_c`` and direct solar use rises by
        ``eta_d * delta``: the state of charge, brown power and objective are
        unchanged and every constraint stays satisfied.
        """
        out = dict(values)
        if not self.flags.esd_enabled:
            return out
        eta_c, eta_d = self.esd.eta_charge, self.esd.eta_discharge
        for n in self.topo.nodes:
            for t in range(self.traces.horizon_hours):
                chg, dis = out[v_gchg(n, t)], out[v_dis(n, t)]
                delta = min(dis, eta_c * chg)
                if delta <= 0:
                    continue
                out[v_dis(n, t)] = dis - delta
                out[v_gchg(n, t)] = max(chg - delta / eta_c, 0.0)
                out[v_gdir(n, t)] += eta_d * delta
        return out

    def breakdown(self, values) -> Breakdown:
        topo, cfg, flags = self.topo, self.power, self.flags
        nodes = topo.nodes
        hours = self.traces.horizon_hours
        shape = (len(nodes), hours)
        arrays = {k: np.zeros(shape) for k in (
            "core", "metro", "olt", "fdc", "cdc_brown", "cdc_green", "fog_gbps",
            "cloud_gbps", "solar_direct", "solar_charged", "esd_delivered")}
        soc = np.zeros((len(nodes), hours + 1))
        dc_kw = cfg.pue_cloud * cfg.net_overhead_ratio * cfg.p_server_kw_per_gbps
        for i, n in enumerate(nodes):
            for t in range(hours):
                cloud = sum(values[v_cld(n, c, t)] for c in topo.cdc_nodes)
                arrays["fog_gbps"][i, t] = values[v_fog(n, t)]
                arrays["cloud_gbps"][i, t] = cloud
                arrays["core"][i, t] = sum(
                    self.kappa_w[(c, n)] / 1000.0 * values[v_lam(n, c, t)]
                    for c in topo.cdc_nodes
                )
                arrays["metro"][i, t] = cfg.metro_unit_kw * values[v_metro(n, t)]
                arrays["olt"][i, t] = cfg.p_olt_w / 1000.0 * values[v_olt(n, t)]
                arrays["fdc"][i, t] = values[v_brown(n, t)]
                target = "cdc_green" if flags.cdc_renewable else "cdc_brown"
                arrays[target][i, t] = dc_kw * cloud
                arrays["solar_direct"][i, t] = values[v_gdir(n, t)]
                arrays["solar_charged"][i, t] = values[v_gchg(n, t)]
                arrays["esd_delivered"][i, t] = self.esd.eta_discharge * values[v_dis(n, t)]
            for t in range(hours + 1):
                soc[i, t] = values[v_soc(n, t)]
        core_links = {}
        if flags.exact_edfa_fibers:
            edfa = fibre_edfa_watts(topo, cfg)
            for link in sorted(edfa):
                core_links[link] = np.array(
                    [edfa[link] / 1000.0 * values[v_fib(link, t)] for t in range(hours)]
                )
        return Breakdown(nodes=nodes, soc=soc, core_links=core_links, **arrays)


def build_model(
    topo: Topology,
    paths: PathTable,
    power: PowerConfig,
    traces: HourlyTraces,
    pv: PvConfig,
    esd: EsdConfig,
    flags: ScenarioFlags = ScenarioFlags(),
    name: str = "fogcache",
) -> FogcacheModel:
    if tuple(traces.nodes) != tuple(topo.nodes):
        raise ModelError(f"trace nodes {traces.nodes} do not match topology nodes {topo.nodes}")
    for c in topo.cdc_nodes:
        for n in topo.nodes:
            if (c, n) not in paths:
                raise ModelError(f"path table has no route from cloud {c} to node {n}")
    if flags.esd_enabled and not esd.e_max_kwh > 0:
        raise ModelError("esd_enabled requires e_max_kwh > 0")

    hours = traces.horizon_hours
    demand = traces.demand_gbps
    fog_cap = 0.0 if flags.delivery == CLOUD_ONLY else power.fdc_capacity_gbps
    if flags.delivery == FOG_ONLY and np.any(demand > fog_cap):
        raise ModelError("fog-only delivery is infeasible: demand exceeds fog DC capacity")

    kappa = pair_power_table(topo, paths, power, amortize_edfa=not flags.exact_edfa_fibers)
    pv_kw = np.asarray(pv_output_w(pv, traces.irradiance_w_m2)) / 1000.0
    load_kw = power.pue_fog * power.net_overhead_ratio * power.p_server_kw_per_gbps
    cdc_kw = (0.0 if flags.cdc_renewable else 1.0) * (
        power.pue_cloud * power.net_overhead_ratio * power.p_server_kw_per_gbps
    )
    metro_kw = power.metro_unit_kw
    olt_kw = power.p_olt_w / 1000.0
    eta_c, eta_d, decay = esd.eta_charge, esd.eta_discharge, esd.decay
    esd_on = flags.esd_enabled
    cloud_ub = 0.0 if flags.delivery == FOG_ONLY else math.inf

    variables: list[Variable] = []
    constraints: list[Constraint] = []
    objective: list[tuple[str, float]] = []

    def add(name, kind=CONTINUOUS, lower=0.0, upper=math.inf):
        variables.append(Variable(name, kind, lower, upper))

    for i, n in enumerate(topo.nodes):
        for t in range(hours):
            d = float(demand[i, t])
            add(v_fog(n, t), upper=fog_cap)
            for c in topo.cdc_nodes:
                add(v_cld(n, c, t), upper=cloud_ub)
                add(v_lam(n, c, t), INTEGER)
            add(v_metro(n, t), INTEGER)
            add(v_olt(n, t), INTEGER)
            add(v_gdir(n, t))
            add(v_gchg(n, t), upper=esd.max_charge_kwh if esd_on else 0.0)
            add(v_dis(n, t), upper=esd.max_discharge_kwh if esd_on else 0.0)
            add(v_brown(n, t))

            constraints.append(Constraint(
                f"demand({n},{t})",
                ((v_fog(n, t), 1.0),) + tuple((v_cld(n, c, t), 1.0) for c in topo.cdc_nodes),
                EQ, d))
            for c in topo.cdc_nodes:
                constraints.append(Constraint(
                    f"lam_cap({n},{c},{t})",
                    ((v_lam(n, c, t), power.line_rate_gbps), (v_cld(n, c, t), -1.0)),
                    GE, 0.0))
            constraints.append(Constraint(
                f"metro({n},{t})",
                ((v_metro(n, t), power.metro_port_gbps),)
                + tuple((v_cld(n, c, t), -1.0) for c in topo.cdc_nodes),
                GE, 0.0))
            constraints.append(Constraint(
                f"olt({n},{t})", ((v_olt(n, t), power.olt_capacity_gbps),), GE, d))
            constraints.append(Constraint(
                f"solar({n},{t})", ((v_gdir(n, t), 1.0), (v_gchg(n, t), 1.0)),
                LE, float(pv_kw[i, t])))
            constraints.append(Constraint(
                f"fdc_brown({n},{t})",
                ((v_brown(n, t), 1.0), (v_fog(n, t), -load_kw), (v_gdir(n, t), 1.0),
                 (v_dis(n, t), eta_d)),
                GE, 0.0))
            constraints.append(Constraint(
                f"green_cap({n},{t})",
                ((v_gdir(n, t), 1.0), (v_dis(n, t), eta_d), (v_fog(n, t), -load_kw)),
                LE, 0.0))

            objective.append((v_brown(n, t), 1.0))
            for c in topo.cdc_nodes:
                objective.append((v_cld(n, c, t), cdc_kw))
                objective.append((v_lam(n, c, t), kappa[(c, n)] / 1000.0))
            objective.append((v_metro(n, t), metro_kw))
            objective.append((v_olt(n, t), olt_kw))

        for t in range(hours + 1):
            if not esd_on:
                add(v_soc(n, t), upper=0.0)
            elif t == 0 and not flags.cyclic_soc:
                add(v_soc(n, t), lower=esd.soc_init_kwh, upper=esd.soc_init_kwh)
            else:
                add(v_soc(n, t), upper=esd.e_max_kwh)
        if esd_on:
            for t in range(hours):
                constraints.append(Constraint(
                    f"esd({n},{t})",
                    ((v_soc(n, t + 1), 1.0), (v_soc(n, t), -decay),
                     (v_gchg(n, t), -eta_c), (v_dis(n, t), 1.0)),
                    EQ, 0.0))
            if flags.cyclic_soc:
                constraints.append(Constraint(
                    f"cyclic({n})", ((v_soc(n, 0), 1.0), (v_soc(n, hours), -1.0)), EQ, 0.0))

    if flags.exact_edfa_fibers:
        edfa_w = fibre_edfa_watts(topo, power)
        users: dict[Link, list[str]] = {link: [] for link in edfa_w}
        for c in topo.cdc_nodes:
            for n in topo.nodes:
                for link in paths[(c, n)].links:
                    users[link].append((c, n))
        for link in sorted(edfa_w):
            for t in range(hours):
                add(v_fib(link, t), INTEGER)
                terms = ((v_fib(link, t), float(power.wavelengths_per_fiber)),) + tuple(
                    (v_lam(n, c, t), -1.0) for c, n in users[link])
                constraints.append(Constraint(
                    f"fib_cap({link[0]},{link[1]},{t})", terms, GE, 0.0))
                objective.append((v_fib(link, t), edfa_w[link] / 1000.0))

    problem = MilpProblem(tuple(variables), tuple(constraints), tuple(objective), name)
    return FogcacheModel(
        problem=problem,
        topo=topo,
        paths=paths,
        power=power,
        traces=traces,
        pv=pv,
        esd=esd,
        flags=flags,
        kappa_w=kappa,
        pv_kw=pv_kw,
        fog_load_kw_per_gbps=load_kw,
    )


def build_problem(topo, paths, power_cfg, traces, pv, esd_cfg, flags=ScenarioFlags()) -> MilpProblem:
    return build_model(topo, paths, power_cfg, traces, pv, esd_cfg, flags).problem
