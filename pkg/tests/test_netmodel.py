import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fogcache.netmodel import (
    CapacityError,
    Path,
    PowerConfig,
    Topology,
    TopologyError,
    core_pair_power_per_wavelength,
    dc_it_power,
    desk_power_config,
    edfas_on_link,
    fdc_server_count,
    fog_pue_threshold,
    load_topology,
    metro_power,
    olt_power,
    regens_per_wavelength,
    shortest_paths,
    unit_delivery_costs,
)

from oracles import dijkstra_km


def test_nsfnet_shape(nsfnet):
    assert len(nsfnet.nodes) == 14
    assert len(nsfnet.links) == 21
    assert set(nsfnet.cdc_nodes) == {2, 3, 7, 8, 9}
    assert all(km > 0 for _, _, km in nsfnet.links)


def test_nsfnet_connected_from_node_1(nsfnet):
    assert set(dijkstra_km(nsfnet.links, 1)) == set(nsfnet.nodes)


def test_paths_match_independent_dijkstra(nsfnet, nsfnet_paths):
    lengths = {frozenset((u, v)): km for u, v, km in nsfnet.links}
    for c in nsfnet.cdc_nodes:
        ref = dijkstra_km(nsfnet.links, c)
        for n in nsfnet.nodes:
            path = nsfnet_paths[(c, n)]
            assert path.km == pytest.approx(ref[n], abs=1e-9)
            assert path.km == pytest.approx(sum(lengths[frozenset(l)] for l in path.links))
            assert len(set(path.nodes)) == len(path.nodes)
            assert path.nodes[0] == c and path.nodes[-1] == n


def test_symmetric_pairs_have_equal_length(nsfnet, nsfnet_paths):
    for c in nsfnet.cdc_nodes:
        for d in nsfnet.cdc_nodes:
            assert nsfnet_paths[(c, d)].km == pytest.approx(nsfnet_paths[(d, c)].km)


def test_self_path_is_empty(nsfnet_paths):
    p = nsfnet_paths[(2, 2)]
    assert p.links == () and p.km == 0.0


def test_two_node_toy_graph():
    topo = Topology((1, 2), ((1, 2, 500.0),), (1,))
    p = shortest_paths(topo)[(1, 2)]
    assert p.links == ((1, 2),) and p.km == 500.0


def test_tie_break_prefers_fewer_hops_then_lexicographic():
    # 1-4 direct (200) ties with 1-2-4 and 1-3-4 (100 + 100)
    topo = Topology((1, 2, 3, 4), ((1, 2, 100), (2, 4, 100), (1, 3, 100), (3, 4, 100), (1, 4, 200)), (1,))
    assert shortest_paths(topo)[(1, 4)].nodes == (1, 4)
    topo = Topology((1, 2, 3, 4), ((1, 3, 100), (3, 4, 100), (1, 2, 100), (2, 4, 100)), (1,))
    assert shortest_paths(topo)[(1, 4)].nodes == (1, 2, 4)


def test_disconnected_graph_names_component():
    topo = Topology((1, 2, 3, 4), ((1, 2, 10.0), (3, 4, 10.0)), (1,))
    with pytest.raises(TopologyError, match="3"):
        shortest_paths(topo)


@pytest.mark.parametrize("bad", [
    dict(nodes=(1, 2), links=((1, 2, 0.0),), cdc_nodes=(1,)),
    dict(nodes=(1, 2), links=((1, 2, 5.0),), cdc_nodes=()),
    dict(nodes=(1, 2), links=((1, 2, 5.0),), cdc_nodes=(7,)),
    dict(nodes=(1, 2), links=((1, 9, 5.0),), cdc_nodes=(1,)),
])
def test_topology_invariants(bad):
    with pytest.raises(TopologyError):
        Topology(**bad)


def test_load_topology_errors_carry_line(tmp_path):
    f = tmp_path / "bad.topo"
    f.write_text("nodes 1 2\ncdc 1\nlink 1 2\n")
    with pytest.raises(TopologyError, match=":3:"):
        load_topology(f)


@pytest.mark.parametrize("length, span, expected", [(80, 80, 2), (1000, 80, 14), (79, 80, 2)])
def test_edfas_on_link(length, span, expected):
    assert edfas_on_link(length, span) == expected


@pytest.mark.parametrize("length, reach, expected", [(2000, 2500, 0), (2500, 2500, 1), (6000, 2500, 2)])
def test_regens_per_wavelength(length, reach, expected):
    assert regens_per_wavelength(length, reach) == expected


@pytest.mark.parametrize("fn", [edfas_on_link, regens_per_wavelength])
@pytest.mark.parametrize("args", [(0, 80), (100, 0), (-1, 80)])
def test_length_functions_reject_non_positive(fn, args):
    with pytest.raises(ValueError):
        fn(*args)


@given(st.floats(1, 10_000), st.floats(1, 10_000), st.floats(10, 200))
def test_length_functions_monotone(a, b, span):
    lo, hi = sorted((a, b))
    assert edfas_on_link(lo, span) <= edfas_on_link(hi, span)
    assert regens_per_wavelength(lo, span * 10) <= regens_per_wavelength(hi, span * 10)


def _one_link_path(km):
    return Path((1, 2), ((1, 2),), km)


def test_core_pair_power_examples(desk):
    assert core_pair_power_per_wavelength(desk, Path((3,), (), 0.0)) == 0.0
    assert core_pair_power_per_wavelength(desk, _one_link_path(1000), amortize_edfa=False) == 800.0
    assert core_pair_power_per_wavelength(desk, _one_link_path(3000), amortize_edfa=False) == 950.0


def test_core_pair_power_amortized_edfa(desk):
    watts = core_pair_power_per_wavelength(desk, _one_link_path(1000), {(1, 2): 1000.0})
    assert watts == pytest.approx(800 + 8 * 14 / 40)


def test_metro_power(desk):
    assert metro_power(desk, 0) == 0
    assert metro_power(desk, 40) == 100
    assert metro_power(desk, 41) == 200


def test_olt_power(desk):
    assert olt_power(desk, 0) == 0
    assert olt_power(desk, 160) == 904
    assert olt_power(desk, 161) == 1808


def test_dc_it_power(desk):
    assert dc_it_power(desk, 0, 1.1) == 0
    assert dc_it_power(desk, 1.8, 1.1) == pytest.approx(1.1 * 1.3 * 221.1 * 1.8, abs=1e-9)
    assert dc_it_power(desk, 160, 1.1) == pytest.approx(50587.68, abs=0.1)


def test_fdc_server_count(desk):
    assert fdc_server_count(desk, 160) == 89
    assert fdc_server_count(desk, 1.8) == 1
    assert fdc_server_count(desk, 0) == 0
    with pytest.raises(CapacityError):
        fdc_server_count(desk, 160.5)


@pytest.mark.parametrize("fn", [metro_power, olt_power])
def test_negative_traffic_rejected(desk, fn):
    with pytest.raises(ValueError):
        fn(desk, -1)


@given(st.floats(0, 1000), st.floats(0, 1000))
def test_power_functions_monotone_and_zero_at_zero(a, b):
    cfg = desk_power_config()
    lo, hi = sorted((a, b))
    for fn in (metro_power, olt_power, lambda c, x: dc_it_power(c, x, 1.2)):
        assert fn(cfg, 0) == 0
        assert fn(cfg, lo) <= fn(cfg, hi)


@given(st.floats(0, 1000), st.floats(0, 1000))
def test_dc_it_power_linear(a, b):
    cfg = desk_power_config()
    assert dc_it_power(cfg, a + b, 1.1) == pytest.approx(
        dc_it_power(cfg, a, 1.1) + dc_it_power(cfg, b, 1.1), rel=1e-12, abs=1e-9)


def test_power_config_table_defaults():
    cfg = desk_power_config()
    assert (cfg.p_metro_port_w, cfg.metro_port_gbps, cfg.p_olt_w, cfg.olt_capacity_gbps) == (50, 40, 904, 160)
    assert (cfg.p_server_w_per_gbps, cfg.server_capacity_gbps) == (221.1, 1.8)
    assert (cfg.net_overhead_ratio, cfg.pue_cloud, cfg.fdc_capacity_gbps) == (1.3, 1.1, 160)


@pytest.mark.parametrize("field, value", [
    ("pue_fog", 0.9), ("net_overhead_ratio", 0.5), ("p_olt_w", -1), ("olt_capacity_gbps", 0),
])
def test_power_config_invariants(field, value):
    with pytest.raises(ValueError):
        desk_power_config(**{field: value})


def test_core_devices_have_no_defaults():
    with pytest.raises(TypeError):
        PowerConfig()


def test_self_delivery_costs_nothing_in_core(nsfnet, nsfnet_paths, desk):
    for c in nsfnet.cdc_nodes:
        assert core_pair_power_per_wavelength(desk, nsfnet_paths[(c, c)]) == 0.0


def test_fog_avoids_core_and_metro_terms(nsfnet, nsfnet_paths, desk):
    fog, cloud = unit_delivery_costs(nsfnet, nsfnet_paths, desk)
    for (c, n), cost in cloud.items():
        assert fog[n] < cost  # equal PUEs: cloud adds metro (and core off-site)


def test_fog_pue_threshold_separates_regimes(nsfnet, nsfnet_paths, desk):
    threshold = fog_pue_threshold(nsfnet, nsfnet_paths, desk)
    assert desk.pue_cloud < threshold < 1.25
    server = desk.net_overhead_ratio * desk.p_server_kw_per_gbps
    _, cloud = unit_delivery_costs(nsfnet, nsfnet_paths, desk)
    for n in nsfnet.nodes:
        cheapest = min(cloud[(c, n)] for c in nsfnet.cdc_nodes)
        assert 1.25 * server > cheapest
    assert math.isfinite(threshold)
