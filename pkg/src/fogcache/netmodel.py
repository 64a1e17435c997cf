"""Network topology and static power models for core, metro, access and DC equipment.

Power figures are in watts and traffic in Gbps unless a name says otherwise.
The core network is IP over WDM with lightpath bypass: a lightpath from a
cloud node to a destination node terminates on router and transponder ports
only at its two ends, and picks up regenerators and amplifiers along the way.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field, fields
from importlib import resources
import pathlib
from typing import Iterable, Sequence


class TopologyError(ValueError):
    """Malformed or disconnected topology."""


class CapacityError(ValueError):
    """Requested load exceeds an equipment capacity."""


Link = tuple[int, int]


def link_key(u: int, v: int) -> Link:
    """Canonical (sorted) key of an undirected link."""
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Topology:
    """Undirected core graph with link lengths and cloud DC placement.

    Every node hosts one fog data centre co-located with its OLT, so only the
    cloud set needs to be stored.  Connectivity is checked by
    :meth:`check_connected` (called by the loaders and by
    :func:`shortest_paths`), not on construction.
    """

    nodes: tuple[int, ...]
    links: tuple[tuple[int, int, float], ...]
    cdc_nodes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(int(n) for n in self.nodes))
        object.__setattr__(
            self, "links", tuple((int(u), int(v), float(km)) for u, v, km in self.links)
        )
        object.__setattr__(self, "cdc_nodes", tuple(sorted(int(c) for c in self.cdc_nodes)))

        if not self.nodes:
            raise TopologyError("topology has no nodes")
        if len(set(self.nodes)) != len(self.nodes):
            raise TopologyError("duplicate node ids")
        known = set(self.nodes)
        seen: set[Link] = set()
        for u, v, km in self.links:
            if u not in known or v not in known:
                raise TopologyError(f"link ({u}, {v}) references an unknown node")
            if u == v:
                raise TopologyError(f"self-loop on node {u}")
            if not km > 0 or not math.isfinite(km):
                raise TopologyError(f"link ({u}, {v}) has non-positive length {km}")
            key = link_key(u, v)
            if key in seen:
                raise TopologyError(f"duplicate link {key}")
            seen.add(key)
        if not self.cdc_nodes:
            raise TopologyError("at least one cloud data centre node is required")
        missing = [c for c in self.cdc_nodes if c not in known]
        if missing:
            raise TopologyError(f"cdc nodes {missing} are not topology nodes")

    def adjacency(self) -> dict[int, list[tuple[int, float]]]:
        adj: dict[int, list[tuple[int, float]]] = {n: [] for n in self.nodes}
        for u, v, km in self.links:
            adj[u].append((v, km))
            adj[v].append((u, km))
        return adj

    def link_lengths(self) -> dict[Link, float]:
        return {link_key(u, v): km for u, v, km in self.links}

    def components(self) -> list[list[int]]:
        """Connected components, each sorted, ordered by smallest member."""
        adj = self.adjacency()
        unvisited = set(self.nodes)
        comps = []
        for start in sorted(self.nodes):
            if start not in unvisited:
                continue
            stack = [start]
            unvisited.discard(start)
            comp = []
            while stack:
                u = stack.pop()
                comp.append(u)
                for v, _ in adj[u]:
                    if v in unvisited:
                        unvisited.discard(v)
                        stack.append(v)
            comps.append(sorted(comp))
        return comps

    def check_connected(self) -> None:
        comps = self.components()
        if len(comps) > 1:
            stray = comps[1:]
            raise TopologyError(
                f"topology is disconnected: nodes {stray[0]} are unreachable from node "
                f"{comps[0][0]} ({len(comps)} components)"
            )


def load_topology(path: str | pathlib.Path) -> Topology:
    """Parse a ``.topo`` file (see ``data/nsfnet.topo`` for the schema)."""
    nodes: list[int] = []
    cdc: list[int] = []
    links: list[tuple[int, int, float]] = []
    text = pathlib.Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, *args = line.split()
        try:
            if keyword == "nodes":
                nodes.extend(int(a) for a in args)
            elif keyword == "cdc":
                cdc.extend(int(a) for a in args)
            elif keyword == "link":
                if len(args) != 3:
                    raise ValueError("expected 'link <u> <v> <length_km>'")
                links.append((int(args[0]), int(args[1]), float(args[2])))
            else:
                raise ValueError(f"unknown keyword {keyword!r}")
        except ValueError as exc:
            raise TopologyError(f"{path}:{lineno}: {exc}") from None
    topo = Topology(tuple(nodes), tuple(links), tuple(cdc))
    topo.check_connected()
    return topo


def build_nsfnet() -> Topology:
    """The bundled 14-node, 21-link NSFNET with clouds at nodes 2, 3, 7, 8, 9."""
    with resources.as_file(resources.files("fogcache") / "data" / "nsfnet.topo") as p:
        return load_topology(p)


@dataclass(frozen=True)
class PowerConfig:
    """Device power coefficients, capacities and PUE values.

    The four core-device powers (router port, transponder, EDFA, regenerator)
    have no defaults and must come from configuration; see
    :func:`desk_power_config` for the non-measured desk-scale set.
    """

    p_router_port_w: float
    p_transponder_w: float
    p_edfa_w: float
    p_regen_w: float
    line_rate_gbps: float = 40.0
    span_km: float = 80.0
    reach_km: float = 2500.0
    wavelengths_per_fiber: int = 40
    p_metro_port_w: float = 50.0
    metro_port_gbps: float = 40.0
    metro_redundancy: int = 2
    p_olt_w: float = 904.0
    olt_capacity_gbps: float = 160.0
    p_server_w_per_gbps: float = 221.1
    server_capacity_gbps: float = 1.8
    net_overhead_ratio: float = 1.3
    pue_cloud: float = 1.1
    pue_fog: float = 1.1
    fdc_capacity_gbps: float = 160.0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise TypeError(f"{f.name} must be a number, got {value!r}")
            if not math.isfinite(value):
                raise ValueError(f"{f.name} must be finite")
        for name in ("p_router_port_w", "p_transponder_w", "p_edfa_w", "p_regen_w",
                     "p_metro_port_w", "p_olt_w", "p_server_w_per_gbps"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        for name in ("line_rate_gbps", "span_km", "reach_km", "wavelengths_per_fiber",
                     "metro_port_gbps", "metro_redundancy", "olt_capacity_gbps",
                     "server_capacity_gbps", "fdc_capacity_gbps"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        for name in ("pue_cloud", "pue_fog", "net_overhead_ratio"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")

    @property
    def p_server_kw_per_gbps(self) -> float:
        return self.p_server_w_per_gbps / 1000.0

    @property
    def metro_unit_kw(self) -> float:
        """Power of one metro unit (``metro_port_gbps`` of traffic) in kW."""
        return self.p_metro_port_w * self.metro_redundancy / 1000.0


def desk_power_config(**overrides) -> PowerConfig:
    """Desk-scale defaults.

    Router port 300 W, transponder 100 W, EDFA 8 W and regenerator 150 W are
    placeholder values, not measured 2020 equipment figures.  Everything else
    uses the library defaults.
    """
    base = dict(p_router_port_w=300.0, p_transponder_w=100.0, p_edfa_w=8.0, p_regen_w=150.0)
    base.update(overrides)
    return PowerConfig(**base)


@dataclass(frozen=True)
class Path:
    """A routed lightpath between a cloud node and a destination node."""

    nodes: tuple[int, ...]
    links: tuple[Link, ...]
    km: float

    @property
    def hops(self) -> int:
        return len(self.links)


@dataclass(frozen=True)
class PathTable:
    """Shortest paths keyed by ``(cloud, destination)``."""

    paths: dict[tuple[int, int], Path] = field(default_factory=dict)

    def __getitem__(self, key: tuple[int, int]) -> Path:
        return self.paths[key]

    def __contains__(self, key) -> bool:
        return key in self.paths

    def __iter__(self):
        return iter(sorted(self.paths))

    def __len__(self) -> int:
        return len(self.paths)


def _dijkstra(adj: dict[int, list[tuple[int, float]]], source: int) -> dict[int, tuple]:
    # labels compare as (km, hops, node sequence): min length, then fewer hops,
    # then lexicographically smallest sequence
    best: dict[int, tuple] = {source: (0.0, 0, (source,))}
    heap = [(0.0, 0, (source,))]
    done: set[int] = set()
    while heap:
        km, hops, seq = heapq.heappop(heap)
        u = seq[-1]
        if u in done:
            continue
        done.add(u)
        for v, length in adj[u]:
            if v in done:
                continue
            label = (km + length, hops + 1, seq + (v,))
            if v not in best or label < best[v]:
                best[v] = label
                heapq.heappush(heap, label)
    return best


def shortest_paths(topo: Topology, sources: Iterable[int] | None = None) -> PathTable:
    """Minimum-km paths from every cloud node to every node.

    Ties break on hop count, then on the lexicographically smallest node
    sequence, so the table is fully deterministic.
    """
    topo.check_connected()
    adj = topo.adjacency()
    lengths = topo.link_lengths()
    table: dict[tuple[int, int], Path] = {}
    for c in (topo.cdc_nodes if sources is None else sources):
        labels = _dijkstra(adj, c)
        for n in topo.nodes:
            _, _, seq = labels[n]
            links = tuple(link_key(a, b) for a, b in zip(seq, seq[1:]))
            table[(c, n)] = Path(seq, links, float(sum(lengths[l] for l in links)))
    return PathTable(table)


def _require_positive(**values: float) -> None:
    for name, value in values.items():
        if not value > 0:
            raise ValueError(f"{name} must be > 0, got {value}")


def _require_traffic(traffic_gbps: float) -> None:
    if traffic_gbps < 0:
        raise ValueError(f"traffic must be >= 0, got {traffic_gbps}")


def edfas_on_link(length_km: float, span_km: float) -> int:
    """Inline amplifiers every span plus one pre- and one post-amplifier."""
    _require_positive(length_km=length_km, span_km=span_km)
    return max(0, math.ceil(length_km / span_km - 1)) + 2


def regens_per_wavelength(length_km: float, reach_km: float) -> int:
    _require_positive(length_km=length_km, reach_km=reach_km)
    return math.floor(length_km / reach_km)


def core_pair_power_per_wavelength(
    cfg: PowerConfig,
    path: Path,
    link_lengths: dict[Link, float] | None = None,
    amortize_edfa: bool = True,
) -> float:
    """Watts drawn by one wavelength routed along ``path``.

    Two router ports and two transponders at the lightpath ends, regenerators
    along the full lightpath length, and (in amortized mode) each traversed
    link's EDFA power divided by the wavelengths one fibre carries.  With
    ``amortize_edfa=False`` EDFAs are left out here and billed per lit fibre
    by the optimization model instead.
    """
    if not path.links:
        return 0.0
    watts = 2 * cfg.p_router_port_w + 2 * cfg.p_transponder_w
    watts += cfg.p_regen_w * regens_per_wavelength(path.km, cfg.reach_km)
    if amortize_edfa and cfg.p_edfa_w:
        if link_lengths is None:
            raise ValueError("link_lengths are needed for amortized EDFA power")
        amps = sum(edfas_on_link(link_lengths[l], cfg.span_km) for l in path.links)
        watts += cfg.p_edfa_w * amps / cfg.wavelengths_per_fiber
    return watts


def metro_power(cfg: PowerConfig, traffic_gbps: float) -> float:
    _require_traffic(traffic_gbps)
    ports = math.ceil(traffic_gbps / cfg.metro_port_gbps)
    return ports * cfg.p_metro_port_w * cfg.metro_redundancy


def olt_power(cfg: PowerConfig, served_gbps: float) -> float:
    """OLT power for the total demand at a node (both delivery routes cross it)."""
    _require_traffic(served_gbps)
    return math.ceil(served_gbps / cfg.olt_capacity_gbps) * cfg.p_olt_w


def dc_it_power(cfg: PowerConfig, served_gbps: float, pue: float) -> float:
    """Load-proportional facility power of a data centre, networking and PUE included."""
    _require_traffic(served_gbps)
    if pue < 1:
        raise ValueError(f"pue must be >= 1, got {pue}")
    return pue * cfg.net_overhead_ratio * cfg.p_server_w_per_gbps * served_gbps


def fdc_server_count(cfg: PowerConfig, served_gbps: float) -> int:
    _require_traffic(served_gbps)
    if served_gbps > cfg.fdc_capacity_gbps:
        raise CapacityError(
            f"{served_gbps} Gbps exceeds fog DC capacity {cfg.fdc_capacity_gbps} Gbps"
        )
    return math.ceil(served_gbps / cfg.server_capacity_gbps)


def pair_power_table(
    topo: Topology, paths: PathTable, cfg: PowerConfig, amortize_edfa: bool = True
) -> dict[tuple[int, int], float]:
    """``core_pair_power_per_wavelength`` in watts for every ``(cloud, node)`` pair."""
    lengths = topo.link_lengths()
    return {
        key: core_pair_power_per_wavelength(cfg, paths[key], lengths, amortize_edfa)
        for key in paths
    }


def fibre_edfa_watts(topo: Topology, cfg: PowerConfig) -> dict[Link, float]:
    """EDFA power of one lit fibre on each link (exact EDFA accounting)."""
    return {
        link_key(u, v): cfg.p_edfa_w * edfas_on_link(km, cfg.span_km)
        for u, v, km in topo.links
    }


def unit_delivery_costs(
    topo: Topology,
    paths: PathTable,
    cfg: PowerConfig,
    cdc_brown: bool = True,
) -> tuple[dict[int, float], dict[tuple[int, int], float]]:
    """Marginal brown kW per Gbps of fog and of cloud delivery, ignoring rounding.

    Returns ``(fog[n], cloud[(c, n)])``.  Fog delivery pays only the fog DC;
    cloud delivery pays the cloud DC (when brown), the lightpath share of the
    core and the metro ports.  The OLT is common to both and left out.
    """
    server = cfg.net_overhead_ratio * cfg.p_server_kw_per_gbps
    kappa = pair_power_table(topo, paths, cfg)
    fog = {n: cfg.pue_fog * server for n in topo.nodes}
    cloud = {}
    for (c, n), watts in kappa.items():
        cloud[(c, n)] = (
            (cfg.pue_cloud * server if cdc_brown else 0.0)
            + watts / 1000.0 / cfg.line_rate_gbps
            + cfg.metro_unit_kw / cfg.metro_port_gbps
        )
    return fog, cloud


def fog_pue_threshold(topo: Topology, paths: PathTable, cfg: PowerConfig) -> float:
    """Fog PUE above which cloud delivery is cheaper per Gbps at every node.

    Compares brown-powered fog against the cheapest cloud route of each node;
    above the returned value no node gains from serving demand at its fog DC.
    """
    server = cfg.net_overhead_ratio * cfg.p_server_kw_per_gbps
    _, cloud = unit_delivery_costs(topo, paths, cfg, cdc_brown=True)
    worst = max(min(cloud[(c, n)] for c in topo.cdc_nodes) for n in topo.nodes)
    return worst / server


def node_index(nodes: Sequence[int]) -> dict[int, int]:
    return {n: i for i, n in enumerate(nodes)}
