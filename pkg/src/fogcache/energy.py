"""Solar PV output and battery (ESD) state-of-charge dynamics.

Energies are in kWh per one-hour step, so kW and kWh per hour coincide.
The battery recurrence is

    soc[t+1] = decay * soc[t] + eta_charge * charge_in[t] - discharge_out[t]
    delivered[t] = eta_discharge * discharge_out[t]

with ``decay`` the hourly equivalent of the daily self-discharge.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class InfeasibleStepError(ValueError):
    """A battery step would leave the state of charge outside [0, e_max]."""


@dataclass(frozen=True)
class PvConfig:
    area_m2: float = 250.0
    efficiency: float = 0.263
    max_area_m2: float = 250.0

    def __post_init__(self):
        if not 0 <= self.area_m2 <= self.max_area_m2:
            raise ValueError(f"area_m2 must be within [0, {self.max_area_m2}], got {self.area_m2}")
        if not 0 < self.efficiency < 1:
            raise ValueError(f"efficiency must be in (0, 1), got {self.efficiency}")


@dataclass(frozen=True)
class EsdConfig:
    """Li-ion battery parameters.

    ``eta_charge``/``eta_discharge`` are energy efficiencies.  The optional
    ``max_charge_frac``/``max_discharge_frac`` cap the energy moved in or out
    per hour as a fraction of ``e_max_kwh`` (off when ``None``).
    """

    e_max_kwh: float = 0.0
    eta_charge: float = 0.7225
    eta_discharge: float = 0.9025
    self_discharge_per_day: float = 0.03
    soc_init_kwh: float = 0.0
    max_charge_frac: float | None = None
    max_discharge_frac: float | None = None

    def __post_init__(self):
        if not self.e_max_kwh >= 0:
            raise ValueError("e_max_kwh must be >= 0")
        if not 0 < self.eta_charge <= 1:
            raise ValueError("eta_charge must be in (0, 1]")
        if not 0 < self.eta_discharge <= 1:
            raise ValueError("eta_discharge must be in (0, 1]")
        if not 0 <= self.self_discharge_per_day < 1:
            raise ValueError("self_discharge_per_day must be in [0, 1)")
        if not 0 <= self.soc_init_kwh <= self.e_max_kwh:
            raise ValueError("soc_init_kwh must be within [0, e_max_kwh]")
        for name in ("max_charge_frac", "max_discharge_frac"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ValueError(f"{name} must be > 0 when set")

    @property
    def decay(self) -> float:
        return hourly_decay(self.self_discharge_per_day)

    @property
    def max_charge_kwh(self) -> float:
        if self.max_charge_frac is None:
            return math.inf
        return self.max_charge_frac * self.e_max_kwh

    @property
    def max_discharge_kwh(self) -> float:
        if self.max_discharge_frac is None:
            return math.inf
        return self.max_discharge_frac * self.e_max_kwh


@dataclass(frozen=True)
class EsdState:
    soc_kwh: float = 0.0


def pv_output_w(pv: PvConfig, irradiance_w_m2):
    """Electrical output in W; accepts scalars or arrays."""
    irr = np.asarray(irradiance_w_m2, dtype=float)
    if np.any(irr < 0):
        raise ValueError("irradiance must be >= 0")
    out = irr * pv.area_m2 * pv.efficiency
    return float(out) if out.ndim == 0 else out


def hourly_decay(self_discharge_per_day: float) -> float:
    if not 0 <= self_discharge_per_day < 1:
        raise ValueError(f"self_discharge_per_day must be in [0, 1), got {self_discharge_per_day}")
    return (1.0 - self_discharge_per_day) ** (1.0 / 24.0)


_SOC_TOL = 1e-9


def esd_step(
    state: EsdState, cfg: EsdConfig, charge_in_kwh: float, discharge_out_kwh: float
) -> tuple[EsdState, float]:
    """Advance the battery by one hour; returns ``(new_state, delivered_kwh)``."""
    if charge_in_kwh < 0 or discharge_out_kwh < 0:
        raise ValueError("charge and discharge energies must be >= 0")
    soc = cfg.decay * state.soc_kwh + cfg.eta_charge * charge_in_kwh - discharge_out_kwh
    if soc < -_SOC_TOL or soc > cfg.e_max_kwh + _SOC_TOL:
        raise InfeasibleStepError(
            f"state of charge {soc:.6g} kWh outside [0, {cfg.e_max_kwh}] "
            f"(soc={state.soc_kwh}, charge={charge_in_kwh}, discharge={discharge_out_kwh})"
        )
    soc = min(max(soc, 0.0), cfg.e_max_kwh)
    return EsdState(soc), cfg.eta_discharge * discharge_out_kwh


@dataclass(frozen=True)
class DispatchTrace:
    """Hourly greedy dispatch for every node, ``[node x hour]`` arrays.

    ``soc`` holds the state of charge at the end of each hour; ``soc_initial``
    the value before hour 0.
    """

    nodes: tuple[int, ...]
    generation: np.ndarray
    load: np.ndarray
    direct: np.ndarray
    charged: np.ndarray
    delivered: np.ndarray
    discharged: np.ndarray
    soc: np.ndarray
    soc_initial: float

    @property
    def unmet(self) -> np.ndarray:
        return self.load - self.direct - self.delivered


def simulate_dispatch(traces, pv: PvConfig, esd_cfg: EsdConfig, load_profile_kwh) -> DispatchTrace:
    """Greedy solar/battery dispatch used as a heuristic baseline.

    Each hour: serve load from PV first, put surplus into the battery up to
    its headroom, then cover any remaining load from the battery.  Always
    feasible, not optimal.  ``load_profile_kwh`` is a ``[node x hour]``
    matrix (or a single row broadcast to every node).
    """
    irr = np.asarray(traces.irradiance_w_m2, dtype=float)
    load = np.broadcast_to(np.asarray(load_profile_kwh, dtype=float), irr.shape)
    if np.any(load < 0):
        raise ValueError("load must be >= 0")
    gen = pv_output_w(pv, irr) / 1000.0
    shape = irr.shape
    direct = np.zeros(shape)
    charged = np.zeros(shape)
    discharged = np.zeros(shape)
    soc = np.zeros(shape)
    decay = esd_cfg.decay
    for i in range(shape[0]):
        state = EsdState(esd_cfg.soc_init_kwh)
        for t in range(shape[1]):
            direct[i, t] = min(gen[i, t], load[i, t])
            surplus = gen[i, t] - direct[i, t]
            deficit = load[i, t] - direct[i, t]
            kept = decay * state.soc_kwh
            headroom = max(esd_cfg.e_max_kwh - kept, 0.0)
            charged[i, t] = min(surplus, headroom / esd_cfg.eta_charge, esd_cfg.max_charge_kwh)
            discharged[i, t] = min(
                deficit / esd_cfg.eta_discharge, kept, esd_cfg.max_discharge_kwh
            )
            state, _ = esd_step(state, esd_cfg, charged[i, t], discharged[i, t])
            soc[i, t] = state.soc_kwh
    return DispatchTrace(
        nodes=tuple(traces.nodes),
        generation=gen,
        load=np.array(load),
        direct=direct,
        charged=charged,
        delivered=esd_cfg.eta_discharge * discharged,
        discharged=discharged,
        soc=soc,
        soc_initial=esd_cfg.soc_init_kwh,
    )


def write_dispatch_csv(trace: DispatchTrace, node: int, path: str | Path) -> None:
    """One node's hourly trace as ``hour,direct,charged,delivered,soc``."""
    i = trace.nodes.index(node)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["hour", "direct", "charged", "delivered", "soc"])
        for t in range(trace.soc.shape[1]):
            writer.writerow([
                t,
                repr(float(trace.direct[i, t])),
                repr(float(trace.charged[i, t])),
                repr(float(trace.delivered[i, t])),
                repr(float(trace.soc[i, t])),
            ])
