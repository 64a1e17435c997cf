"""CSV and SVG output of a :class:`~fogcache.scenarios.ScenarioReport`.

Files written to ``out_dir``:

* ``summary.csv``   one row per sweep point;
* ``breakdown.csv`` ``sweep_value,node,hour,subsystem,kwh`` for every node-hour
  (exact-fibre EDFA rows use the link ``u-v`` as node);
* ``solution.csv``  ``sweep_value,variable,value`` for every solved point;
* ``scenario_<kind>.svg`` bar chart of brown kWh/day against the sweep value.

Floats are written with ``repr`` so re-runs on identical inputs produce
byte-identical files.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

from .milp import Breakdown
from .scenarios import ScenarioReport

SUMMARY_FIELDS = (
    "scenario", "parameter", "sweep_value", "status", "brown_kwh",
    "core_kwh", "metro_kwh", "olt_kwh", "fdc_kwh", "cdc_kwh", "cdc_green_kwh",
    "fog_fraction", "solar_direct_kwh", "solar_charged_kwh", "esd_delivered_kwh",
    "baseline_kwh", "savings_pct", "gap", "nodes",
)
BREAKDOWN_FIELDS = ("sweep_value", "node", "hour", "subsystem", "kwh")
SOLUTION_FIELDS = ("sweep_value", "variable", "value")
NODE_SUBSYSTEMS = ("core", "metro", "olt", "fdc", "cdc_brown", "cdc_green")


def _num(value) -> str:
    value = float(value)
    return "" if math.isnan(value) else repr(value)


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def summary_rows(report: ScenarioReport) -> list[list[str]]:
    rows = []
    for p in report.points:
        sub = p.subsystems
        rows.append([
            report.spec.kind, report.spec.parameter, _num(p.value), p.status, _num(p.brown_kwh),
            _num(sub["core"]), _num(sub["metro"]), _num(sub["olt"]), _num(sub["fdc"]),
            _num(sub["cdc"]), _num(p.cdc_green_kwh), _num(p.fog_fraction),
            _num(p.solar_direct_kwh), _num(p.solar_charged_kwh), _num(p.esd_delivered_kwh),
            _num(report.baseline_kwh), _num(100.0 * p.savings), _num(p.solution.gap),
            str(p.solution.stats.nodes),
        ])
    return rows


def emit_report(report: ScenarioReport, out_dir: str | Path) -> list[Path]:
    """Write all report files; returns their paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = [out / "summary.csv", out / "breakdown.csv", out / "solution.csv",
             out / f"scenario_{report.spec.kind}.svg"]

    with open(paths[0], "w", newline="", encoding="utf-8") as fh:
        w = _writer(fh)
        w.writerow(SUMMARY_FIELDS)
        w.writerows(summary_rows(report))

    with open(paths[1], "w", newline="", encoding="utf-8") as fh:
        w = _writer(fh)
        w.writerow(BREAKDOWN_FIELDS)
        for p in report.points:
            if p.breakdown is not None:
                write_breakdown_rows(w, _num(p.value), p.breakdown)

    with open(paths[2], "w", newline="", encoding="utf-8") as fh:
        w = _writer(fh)
        w.writerow(SOLUTION_FIELDS)
        for p in report.points:
            assignment = p.solution.assignment
            for name in sorted(assignment):
                w.writerow([_num(p.value), name, _num(assignment[name])])

    paths[3].write_bytes(bar_chart_svg(report).encode("utf-8"))
    return paths


def write_breakdown_rows(writer, label: str, b: Breakdown) -> None:
    """Append the per node-hour rows of one breakdown, tagged with ``label``."""
    for i, node in enumerate(b.nodes):
        for t in range(b.core.shape[1]):
            for name in NODE_SUBSYSTEMS:
                writer.writerow([label, node, t, name, _num(getattr(b, name)[i, t])])
    for (u, v), series in b.core_links.items():
        for t, kwh in enumerate(series):
            writer.writerow([label, f"{u}-{v}", t, "core_fibre", _num(kwh)])


def write_breakdown_csv(b: Breakdown, path: str | Path, label: str = "") -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = _writer(fh)
        w.writerow(BREAKDOWN_FIELDS)
        write_breakdown_rows(w, label, b)


_AXIS_LABEL = {"pue_fog": "Fog PUE", "ssc_m2": "Solar cell size per OLT (m²)",
               "e_max_kwh": "Battery capacity (kWh)"}


def bar_chart_svg(report: ScenarioReport, width: int = 640, height: int = 400) -> str:
    """Brown energy per sweep point as a static SVG bar chart."""
    left, right, top, bottom = 80, 20, 40, 60
    plot_w, plot_h = width - left - right, height - top - bottom
    values = [p.brown_kwh for p in report.points]
    finite = [v for v in values if math.isfinite(v)]
    ymax = _nice_ceiling(max(finite)) if finite else 1.0

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" font-size="14">'
        f"Scenario {report.spec.kind}: brown energy per day</text>",
        f'<line x1="{left}" y1="{top + plot_h}" x2="{left + plot_w}" y2="{top + plot_h}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + plot_h}" stroke="black"/>',
    ]
    for k in range(6):
        tick = ymax * k / 5
        y = top + plot_h - plot_h * k / 5
        parts.append(f'<line x1="{left - 4}" y1="{y:.1f}" x2="{left}" y2="{y:.1f}" stroke="black"/>')
        parts.append(f'<text x="{left - 8}" y="{y + 4:.1f}" text-anchor="end">{tick:g}</text>')
    n = max(len(values), 1)
    slot = plot_w / n
    for k, (p, v) in enumerate(zip(report.points, values)):
        cx = left + slot * (k + 0.5)
        if math.isfinite(v):
            h = plot_h * v / ymax
            parts.append(f'<rect x="{cx - slot * 0.3:.1f}" y="{top + plot_h - h:.1f}" '
                         f'width="{slot * 0.6:.1f}" height="{h:.1f}" fill="#4a7ab5"/>')
            parts.append(f'<text x="{cx:.1f}" y="{top + plot_h - h - 4:.1f}" '
                         f'text-anchor="middle">{v:.1f}</text>')
        else:
            parts.append(f'<text x="{cx:.1f}" y="{top + plot_h - 4:.1f}" '
                         f'text-anchor="middle">{p.status}</text>')
        parts.append(f'<text x="{cx:.1f}" y="{top + plot_h + 18:.1f}" '
                     f'text-anchor="middle">{p.value:g}</text>')
    parts.append(f'<text x="{left + plot_w / 2:.1f}" y="{height - 16}" text-anchor="middle">'
                 f"{_AXIS_LABEL[report.spec.parameter]}</text>")
    parts.append(f'<text x="18" y="{top + plot_h / 2:.1f}" text-anchor="middle" '
                 f'transform="rotate(-90 18 {top + plot_h / 2:.1f})">Brown energy (kWh/day)</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _nice_ceiling(value: float) -> float:
    if value <= 0:
        return 1.0
    exponent = math.floor(math.log10(value))
    for step in (1, 2, 2.5, 5, 10):
        top = step * 10**exponent
        if top >= value:
            return float(top)
    return float(10 ** (exponent + 1))
