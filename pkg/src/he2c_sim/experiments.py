"""The three ablation experiments and their file outputs.

* feasibility: sweeps the task count grid, multi-factor checker vs the
  latency-only baseline, and reports the completion-rate series.
* rescue: the same sweep with the rescue module on vs off.
* tradeoff: fixed workload, one run set per trade-off handler, reporting
  completion, energy, accuracy, and latency per handler.

Each series is averaged over the seed list; paired variants reuse the same
seeds (hence the same traces), so gaps are paired differences. Outputs are
a CSV with one row per replication, a JSON summary, and for the sweeps a
small self-contained SVG chart.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .allocator import HandlerKind
from .config import SimConfig
from .engine import run_replications
from .feasibility import CheckerKind
from .metrics import ReportRow, RunReport, write_rows_csv

EXPERIMENT_NAMES = ("feasibility", "tradeoff", "rescue")

_SERIES_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


@dataclass
class ExperimentResult:
    name: str
    rows: list[ReportRow]
    summary: dict
    # completion-rate series per variant, keyed variant -> [(x, mean_rate)]
    series: dict[str, list[tuple[int, float]]]


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values)


def _mean_or_none(values: Sequence[float | None]) -> float | None:
    present = [v for v in values if v is not None]
    return sum(present) / len(present) if present else None


def _variant_stats(reports: list[RunReport]) -> dict:
    return {
        "mean_completion_rate": _mean([r.completion_rate for r in reports]),
        "mean_total_energy_j": _mean([r.total_energy_j for r in reports]),
        "mean_accuracy": _mean_or_none([r.mean_accuracy for r in reports]),
        "mean_latency_ms": _mean_or_none([r.mean_latency_ms for r in reports]),
    }


def _sweep(name: str, config: SimConfig, seeds: Sequence[int],
           variants: list[tuple[str, SimConfig]]) -> ExperimentResult:
    rows: list[ReportRow] = []
    series: dict[str, list[tuple[int, float]]] = {v: [] for v, _ in variants}
    points = []
    for n_tasks in config.n_tasks_grid:
        point: dict = {"n_tasks": n_tasks}
        for variant_name, variant_config in variants:
            reports = run_replications(variant_config, seeds, n_tasks=n_tasks)
            rows.extend(
                ReportRow.from_report(name, variant_name, n_tasks, seed, report)
                for seed, report in zip(seeds, reports))
            stats = _variant_stats(reports)
            point[variant_name] = stats
            series[variant_name].append((n_tasks, stats["mean_completion_rate"]))
        first, second = variants[0][0], variants[1][0]
        point["completion_gap_pp"] = 100.0 * (
            point[first]["mean_completion_rate"] - point[second]["mean_completion_rate"])
        points.append(point)
    summary = {
        "experiment": name,
        "seeds": list(seeds),
        "variants": [v for v, _ in variants],
        "points": points,
        "completion_gap_at_highest_load_pp": points[-1]["completion_gap_pp"],
    }
    return ExperimentResult(name=name, rows=rows, summary=summary, series=series)


def feasibility_experiment(config: SimConfig, seeds: Sequence[int]) -> ExperimentResult:
    """Multi-factor vs latency-only checker across the load grid."""
    variants = [
        (CheckerKind.MULTI_FACTOR.value,
         dataclasses.replace(config, checker=CheckerKind.MULTI_FACTOR)),
        (CheckerKind.LATENCY_ONLY.value,
         dataclasses.replace(config, checker=CheckerKind.LATENCY_ONLY)),
    ]
    return _sweep("feasibility", config, seeds, variants)


def rescue_experiment(config: SimConfig, seeds: Sequence[int]) -> ExperimentResult:
    """Rescue module on vs off across the load grid."""
    variants = [
        ("rescue_on", dataclasses.replace(config, rescue_enabled=True)),
        ("rescue_off", dataclasses.replace(config, rescue_enabled=False)),
    ]
    return _sweep("rescue", config, seeds, variants)


def tradeoff_experiment(config: SimConfig, seeds: Sequence[int]) -> ExperimentResult:
    """All four trade-off handlers on the configured workload."""
    rows: list[ReportRow] = []
    n_tasks = config.workload.n_tasks
    handlers: dict[str, dict] = {}
    for handler in HandlerKind:
        variant_config = dataclasses.replace(config, handler=handler)
        reports = run_replications(variant_config, seeds)
        rows.extend(
            ReportRow.from_report("tradeoff", handler.value, n_tasks, seed, report)
            for seed, report in zip(seeds, reports))
        handlers[handler.value] = _variant_stats(reports)

    # strict-domination check of the energy-accuracy handler on the
    # (total energy, mean accuracy) plane
    reference = handlers[HandlerKind.ENERGY_ACCURACY.value]
    dominated_by = [
        name for name, stats in handlers.items()
        if name != HandlerKind.ENERGY_ACCURACY.value
        and stats["mean_total_energy_j"] < reference["mean_total_energy_j"]
        and (stats["mean_accuracy"] or 0.0) > (reference["mean_accuracy"] or 0.0)
    ]
    summary = {
        "experiment": "tradeoff",
        "seeds": list(seeds),
        "n_tasks": n_tasks,
        "handlers": handlers,
        "energy_accuracy_dominated_by": dominated_by,
    }
    return ExperimentResult(name="tradeoff", rows=rows, summary=summary, series={})


def run_experiment(name: str, config: SimConfig, seeds: Sequence[int]) -> ExperimentResult:
    if name == "feasibility":
        return feasibility_experiment(config, seeds)
    if name == "rescue":
        return rescue_experiment(config, seeds)
    if name == "tradeoff":
        return tradeoff_experiment(config, seeds)
    raise ValueError(f"unknown experiment '{name}' (choose from {EXPERIMENT_NAMES})")


# --- SVG chart -------------------------------------------------------------


def render_series_svg(title: str, xlabel: str, ylabel: str,
                      series: dict[str, list[tuple[float, float]]]) -> str:
    """Minimal deterministic line chart, no external tooling."""
    width, height = 640, 400
    left, right, top, bottom = 70, 20, 40, 50
    xs = [x for points in series.values() for x, _ in points]
    ys = [y for points in series.values() for _, y in points]
    x_lo, x_hi = min(xs), max(xs)
    y_lo = min(ys) - 0.02
    y_hi = max(ys) + 0.02
    if x_hi == x_lo:
        x_hi = x_lo + 1
    span_x = x_hi - x_lo
    span_y = y_hi - y_lo

    def px(x: float) -> float:
        return left + (x - x_lo) / span_x * (width - left - right)

    def py(y: float) -> float:
        return height - bottom - (y - y_lo) / span_y * (height - top - bottom)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<line x1="{left}" y1="{height - bottom}" x2="{width - right}" '
        f'y2="{height - bottom}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{height - bottom}" stroke="black"/>',
        f'<text x="{(left + width - right) / 2:.1f}" y="{height - 12}" '
        f'text-anchor="middle">{xlabel}</text>',
        f'<text x="16" y="{(top + height - bottom) / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {(top + height - bottom) / 2:.1f})">{ylabel}</text>',
    ]
    for i in range(5):
        y_val = y_lo + span_y * i / 4
        y_pix = py(y_val)
        parts.append(f'<line x1="{left - 4}" y1="{y_pix:.1f}" x2="{left}" '
                     f'y2="{y_pix:.1f}" stroke="black"/>')
        parts.append(f'<text x="{left - 8}" y="{y_pix + 4:.1f}" '
                     f'text-anchor="end">{y_val:.2f}</text>')
    for x_val in sorted({x for points in series.values() for x, _ in points}):
        x_pix = px(x_val)
        parts.append(f'<line x1="{x_pix:.1f}" y1="{height - bottom}" x2="{x_pix:.1f}" '
                     f'y2="{height - bottom + 4}" stroke="black"/>')
        parts.append(f'<text x="{x_pix:.1f}" y="{height - bottom + 18}" '
                     f'text-anchor="middle">{x_val:g}</text>')
    for idx, (label, points) in enumerate(series.items()):
        color = _SERIES_COLORS[idx % len(_SERIES_COLORS)]
        coords = " ".join(f"{px(x):.1f},{py(y):.1f}" for x, y in points)
        parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" '
                     f'stroke-width="2"/>')
        for x, y in points:
            parts.append(f'<circle cx="{px(x):.1f}" cy="{py(y):.1f}" r="3" '
                         f'fill="{color}"/>')
        legend_y = top + 16 * idx
        parts.append(f'<line x1="{width - right - 150}" y1="{legend_y}" '
                     f'x2="{width - right - 126}" y2="{legend_y}" stroke="{color}" '
                     f'stroke-width="2"/>')
        parts.append(f'<text x="{width - right - 120}" y="{legend_y + 4}">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_experiment_outputs(result: ExperimentResult, out_dir, svg: bool = True) -> list[Path]:
    """Write CSV, JSON summary, and (for sweeps) the SVG chart under out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    csv_path = out_dir / f"{result.name}.csv"
    write_rows_csv(csv_path, result.rows)
    written.append(csv_path)
    summary_path = out_dir / f"{result.name}_summary.json"
    summary_path.write_text(json.dumps(result.summary, indent=2, sort_keys=True) + "\n")
    written.append(summary_path)
    if svg and result.series:
        svg_path = out_dir / f"{result.name}.svg"
        svg_path.write_text(render_series_svg(
            f"{result.name}: on-time completion rate vs load",
            "tasks per run", "completion rate", result.series))
        written.append(svg_path)
    return written
