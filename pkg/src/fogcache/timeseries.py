"""Hourly demand and solar irradiance traces.

Both traces are ``[node x hour]`` matrices whose rows follow the topology's
node order.  On disk each trace is a CSV with header ``node,hour,value``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .netmodel import Topology

# Diurnal VoD demand shape: anchor hours and their fraction of peak.  Hours in
# between are linearly interpolated; hour 24 wraps back to hour 0.
DIURNAL_ANCHORS: tuple[tuple[int, float], ...] = (
    (0, 0.55),
    (4, 0.20),
    (7, 0.30),
    (12, 0.50),
    (17, 0.65),
    (21, 1.00),
    (24, 0.55),
)


class TraceError(ValueError):
    """Invalid trace data."""


def _diurnal_table() -> tuple[float, ...]:
    hours, values = zip(*DIURNAL_ANCHORS)
    return tuple(float(v) for v in np.interp(np.arange(24), hours, values))


DIURNAL_SHAPE = _diurnal_table()


@dataclass(frozen=True)
class HourlyTraces:
    """Per-node, per-hour demand (Gbps) and irradiance (W/m^2)."""

    nodes: tuple[int, ...]
    demand_gbps: np.ndarray
    irradiance_w_m2: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(int(n) for n in self.nodes))
        for name in ("demand_gbps", "irradiance_w_m2"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.demand_gbps.ndim != 2 or self.demand_gbps.shape != self.irradiance_w_m2.shape:
            raise TraceError(
                f"demand {self.demand_gbps.shape} and irradiance "
                f"{self.irradiance_w_m2.shape} must be matching 2-D matrices"
            )
        if self.demand_gbps.shape[0] != len(self.nodes):
            raise TraceError("trace rows do not match the node list")
        for name in ("demand_gbps", "irradiance_w_m2"):
            arr = getattr(self, name)
            if not np.all(np.isfinite(arr)) or np.any(arr < 0):
                raise TraceError(f"{name} must be finite and non-negative")

    @property
    def horizon_hours(self) -> int:
        return self.demand_gbps.shape[1]

    def validate(self, topo: Topology, max_demand_gbps: float | None = None) -> None:
        """Check the traces against ``topo`` and an optional per-cell demand cap."""
        if tuple(self.nodes) != tuple(topo.nodes):
            raise TraceError(f"trace nodes {self.nodes} do not match topology {topo.nodes}")
        if max_demand_gbps is not None:
            bad = np.argwhere(self.demand_gbps > max_demand_gbps)
            if bad.size:
                i, t = bad[0]
                raise TraceError(
                    f"demand {self.demand_gbps[i, t]} Gbps at node {self.nodes[i]} hour {t} "
                    f"exceeds {max_demand_gbps} Gbps"
                )

    def with_demand(self, demand_gbps) -> "HourlyTraces":
        return HourlyTraces(self.nodes, demand_gbps, self.irradiance_w_m2)

    def with_irradiance(self, irradiance_w_m2) -> "HourlyTraces":
        return HourlyTraces(self.nodes, self.demand_gbps, irradiance_w_m2)


def _read_matrix(path: str | Path, topo: Topology, horizon_hours: int) -> np.ndarray:
    index = {n: i for i, n in enumerate(topo.nodes)}
    out = np.full((len(topo.nodes), horizon_hours), np.nan)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["node", "hour", "value"]:
            raise TraceError(f"{path}: row 1: expected header 'node,hour,value', got {header}")
        for row_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 3:
                raise TraceError(f"{path}: row {row_no}: expected 3 fields, got {len(row)}")
            try:
                node, hour, value = int(row[0]), int(row[1]), float(row[2])
            except ValueError:
                raise TraceError(f"{path}: row {row_no}: cannot parse {row}") from None
            if node not in index:
                raise TraceError(f"{path}: row {row_no}: node {node} is not in the topology")
            if not 0 <= hour < horizon_hours:
                raise TraceError(
                    f"{path}: row {row_no}: hour {hour} outside 0..{horizon_hours - 1} "
                    f"(pass horizon_hours to override)"
                )
            if not math.isfinite(value) or value < 0:
                raise TraceError(f"{path}: row {row_no}: negative or non-finite value {value}")
            i = index[node]
            if not np.isnan(out[i, hour]):
                raise TraceError(f"{path}: row {row_no}: duplicate cell node {node} hour {hour}")
            out[i, hour] = value
    missing = np.argwhere(np.isnan(out))
    if missing.size:
        absent = [topo.nodes[i] for i in range(len(topo.nodes)) if np.all(np.isnan(out[i]))]
        if absent:
            raise TraceError(f"{path}: node {absent[0]} is missing (no rows)")
        i, t = missing[0]
        raise TraceError(f"{path}: missing cell node {topo.nodes[i]} hour {t}")
    return out


def load_matrix(path: str | Path, topo: Topology, horizon_hours: int = 24) -> np.ndarray:
    """One validated ``[node x hour]`` matrix from a ``node,hour,value`` CSV."""
    return _read_matrix(path, topo, horizon_hours)


def load_traces(
    demand_path: str | Path,
    irradiance_path: str | Path,
    topo: Topology,
    horizon_hours: int = 24,
    max_demand_gbps: float | None = 160.0,
) -> HourlyTraces:
    """Read and validate the demand and irradiance CSV files.

    ``max_demand_gbps`` defaults to one OLT's capacity; pass ``None`` to lift
    the single-OLT cap.
    """
    demand = _read_matrix(demand_path, topo, horizon_hours)
    irradiance = _read_matrix(irradiance_path, topo, horizon_hours)
    traces = HourlyTraces(topo.nodes, demand, irradiance)
    traces.validate(topo, max_demand_gbps)
    return traces


def format_matrix(nodes: Sequence[int], matrix: np.ndarray) -> str:
    """Canonical CSV text: rows sorted by (node, hour), shortest round-trip floats."""
    buf = io.StringIO()
    buf.write("node,hour,value\n")
    order = sorted(range(len(nodes)), key=lambda i: nodes[i])
    for i in order:
        for t, value in enumerate(matrix[i]):
            buf.write(f"{nodes[i]},{t},{float(value)!r}\n")
    return buf.getvalue()


def save_matrix(path: str | Path, nodes: Sequence[int], matrix: np.ndarray) -> None:
    Path(path).write_bytes(format_matrix(nodes, matrix).encode("utf-8"))


def save_traces(traces: HourlyTraces, demand_path: str | Path, irradiance_path: str | Path) -> None:
    save_matrix(demand_path, traces.nodes, traces.demand_gbps)
    save_matrix(irradiance_path, traces.nodes, traces.irradiance_w_m2)


def synth_demand(
    topo: Topology, peak_gbps: float, profile: str = "flat", horizon_hours: int = 24
) -> np.ndarray:
    """Synthetic demand matrix; ``diurnal`` follows ``DIURNAL_SHAPE`` (repeats daily)."""
    if not peak_gbps > 0:
        raise ValueError(f"peak_gbps must be > 0, got {peak_gbps}")
    n = len(topo.nodes)
    if profile == "flat":
        return np.full((n, horizon_hours), float(peak_gbps))
    if profile == "diurnal":
        shape = np.array([DIURNAL_SHAPE[h % 24] for h in range(horizon_hours)])
        return np.tile(peak_gbps * shape, (n, 1))
    raise ValueError(f"unknown demand profile {profile!r}; expected 'flat' or 'diurnal'")


def solar_shape(horizon_hours: int = 24) -> np.ndarray:
    """Clipped half-sine between 06:00 and 18:00, zero at night."""
    hours = np.arange(horizon_hours) % 24
    shape = np.sin(np.pi * (hours - 6) / 12.0)
    shape[(hours < 6) | (hours > 18)] = 0.0
    return np.clip(shape, 0.0, None)


def synth_irradiance(
    topo: Topology,
    peak_w_m2: float,
    node_scale: Sequence[float] | None = None,
    horizon_hours: int = 24,
) -> np.ndarray:
    if peak_w_m2 < 0:
        raise ValueError(f"peak_w_m2 must be >= 0, got {peak_w_m2}")
    n = len(topo.nodes)
    scale = np.ones(n) if node_scale is None else np.asarray(node_scale, dtype=float)
    if scale.shape != (n,) or np.any(scale < 0):
        raise ValueError("node_scale needs one non-negative factor per node")
    return np.outer(scale, peak_w_m2 * solar_shape(horizon_hours))


def synthetic_traces(
    topo: Topology,
    peak_gbps: float,
    profile: str = "flat",
    peak_w_m2: float = 1000.0,
    node_scale: Sequence[float] | None = None,
    horizon_hours: int = 24,
) -> HourlyTraces:
    return HourlyTraces(
        topo.nodes,
        synth_demand(topo, peak_gbps, profile, horizon_hours),
        synth_irradiance(topo, peak_w_m2, node_scale, horizon_hours),
    )


def trapezoid_daily_energy(values: np.ndarray) -> float:
    """Trapezoidal integral over hourly samples (value-hours)."""
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return 0.0
    return float(np.sum((values[1:] + values[:-1]) / 2.0))
