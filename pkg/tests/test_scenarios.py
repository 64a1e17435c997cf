import math

import numpy as np
import pytest

from fogcache.config import FogcacheConfig
from fogcache.energy import EsdConfig, PvConfig
from fogcache.netmodel import Topology, desk_power_config
from fogcache.scenarios import (
    DEFAULT_VALUES,
    ScenarioSpec,
    full_delivery_pair,
    run_scenario,
    transport_saving_fraction,
)
from fogcache.solver import OPTIMAL
from fogcache.timeseries import HourlyTraces, synthetic_traces


@pytest.fixture(scope="module")
def flat80(nsfnet):
    return synthetic_traces(nsfnet, 80, "flat")


@pytest.fixture(scope="module")
def sweep_a(nsfnet, nsfnet_paths, desk, flat80):
    return run_scenario(ScenarioSpec("A"), nsfnet, desk, flat80, paths=nsfnet_paths)


def test_spec_defaults_and_validation():
    assert ScenarioSpec("A").values == DEFAULT_VALUES["A"]
    assert ScenarioSpec("B").parameter == "ssc_m2"
    assert ScenarioSpec("C", (0, 20)).values == (0.0, 20.0)
    for bad in (dict(kind="D"), dict(kind="A", values=()), dict(kind="C", pue_fog=1.2)):
        with pytest.raises(ValueError):
            ScenarioSpec(**bad)


def test_sweep_a_regimes(sweep_a):
    assert [p.value for p in sweep_a.points] == [1.25, 1.20, 1.15, 1.10]
    assert all(p.status == OPTIMAL for p in sweep_a.points)
    fractions = [p.fog_fraction for p in sweep_a.points]
    assert fractions[0] == pytest.approx(0, abs=1e-9)
    assert fractions[-1] == pytest.approx(1, abs=1e-9)
    assert all(a <= b + 1e-9 for a, b in zip(fractions, fractions[1:]))
    brown = sweep_a.brown()
    assert all(a >= b - 1e-6 for a, b in zip(brown, brown[1:]))
    assert sweep_a.points[0].savings == pytest.approx(0, abs=1e-9)
    assert sweep_a.points[-1].savings > 0


def test_points_add_up(sweep_a):
    for p in sweep_a.points:
        assert sum(p.subsystems.values()) == pytest.approx(p.brown_kwh, rel=1e-9)
        assert p.brown_kwh == pytest.approx(p.solution.objective, abs=1e-6)
        assert p.savings == pytest.approx((sweep_a.baseline_kwh - p.brown_kwh) / sweep_a.baseline_kwh)


def test_sweep_b_zero_area_saves_nothing(nsfnet, nsfnet_paths, desk, flat80):
    report = run_scenario(ScenarioSpec("B", (0.0, 250.0)), nsfnet, desk, flat80, paths=nsfnet_paths)
    zero, full = report.points
    assert zero.savings == pytest.approx(0, abs=1e-9)
    assert full.savings > 0
    assert zero.cdc_green_kwh > 0 and zero.subsystems["cdc"] == 0


def test_battery_at_zero_equals_largest_panel(nsfnet, nsfnet_paths, desk):
    traces = synthetic_traces(nsfnet, 40, "diurnal")
    b = run_scenario(ScenarioSpec("B", (250.0,), pue_fog=1.1), nsfnet, desk, traces, paths=nsfnet_paths)
    c = run_scenario(ScenarioSpec("C", (0.0,)), nsfnet, desk, traces, paths=nsfnet_paths)
    assert c.points[0].brown_kwh == pytest.approx(b.points[0].brown_kwh, rel=1e-7)
    assert c.baseline_kwh == pytest.approx(b.points[0].brown_kwh, rel=1e-7)
    assert c.points[0].esd_delivered_kwh == 0


def test_battery_helps_on_a_small_network():
    topo = Topology((1, 2, 3), ((1, 2, 900.0), (2, 3, 1700.0)), (2,))
    traces = synthetic_traces(topo, 60, "diurnal")
    cfg = FogcacheConfig(desk_power_config(), PvConfig(), EsdConfig())
    report = run_scenario(ScenarioSpec("C", (0.0, 20.0, 50.0)), topo, cfg, traces)
    brown = report.brown()
    assert all(p.status == OPTIMAL for p in report.points)
    assert brown[0] > brown[1] > brown[2]
    assert report.points[2].esd_delivered_kwh > 0
    assert report.points[0].savings == pytest.approx(0, abs=1e-9)


def test_transport_saving_identity(nsfnet, nsfnet_paths, desk):
    fog, cdc = full_delivery_pair(nsfnet, desk, synthetic_traces(nsfnet, 80, "flat"), paths=nsfnet_paths)
    frac = transport_saving_fraction(fog, cdc)
    assert frac == pytest.approx(1 - fog.transport_kwh / cdc.transport_kwh, abs=1e-12)
    assert 0 < frac < 1
    assert fog.fog_fraction == 1 and cdc.fog_fraction == 0


def test_transport_saving_undefined_without_transport():
    class Zero:
        transport_kwh = 0.0
    assert transport_saving_fraction(Zero(), Zero()) is None


def test_power_config_accepted_and_nan_when_unsolved():
    topo = Topology((1, 2), ((1, 2, 100.0),), (2,))
    traces = HourlyTraces(topo.nodes, np.full((2, 2), 5.0), np.zeros((2, 2)))
    report = run_scenario(ScenarioSpec("A", (1.1,)), topo, desk_power_config(), traces)
    assert report.points[0].status == OPTIMAL
    assert math.isfinite(report.points[0].savings)
