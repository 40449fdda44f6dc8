"""Aggregation of task outcomes into run-level metrics, plus CSV/JSON io.

Completion rate counts on-time completions. Mean accuracy is taken over
on-time completions and mean latency over all completions; both are None
(CSV: empty field, JSON: null) when the underlying set is empty, never
zero. The vacuous empty-trace run reports completion rate 1.0.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field, fields
from typing import TYPE_CHECKING, Iterable, Mapping

from .model import Target, TaskType, to_joules

if TYPE_CHECKING:
    from .engine import TaskOutcome

METRIC_NAMES = ("completion_rate", "total_energy_j", "mean_accuracy", "mean_latency_ms")


@dataclass(frozen=True)
class GroupMetrics:
    """Metrics over one group of outcomes (whole run or one app)."""

    n_tasks: int
    completed_on_time: int
    dropped: int
    missed: int
    completion_rate: float
    total_energy_j: float
    mean_accuracy: float | None
    mean_latency_ms: float | None


@dataclass(frozen=True)
class RunReport(GroupMetrics):
    """One simulation's metrics with a per-application breakdown."""

    per_app: Mapping[TaskType, GroupMetrics] = field(default_factory=dict)


def _group(outcomes: list["TaskOutcome"], n_tasks: int) -> dict:
    on_time = sum(1 for o in outcomes if o.on_time)
    dropped = sum(1 for o in outcomes if o.decision.target is Target.DROP)
    energy_uj = sum(o.energy_spent_uj for o in outcomes)
    accuracies = [o.accuracy for o in outcomes if o.on_time and o.accuracy is not None]
    latencies = [o.latency_ms for o in outcomes if o.completed_ms is not None]
    return {
        "n_tasks": n_tasks,
        "completed_on_time": on_time,
        "dropped": dropped,
        "missed": n_tasks - on_time - dropped,
        "completion_rate": on_time / n_tasks if n_tasks else 1.0,
        "total_energy_j": to_joules(energy_uj),
        "mean_accuracy": sum(accuracies) / len(accuracies) if accuracies else None,
        "mean_latency_ms": sum(latencies) / len(latencies) if latencies else None,
    }


def aggregate(outcomes: Iterable["TaskOutcome"]) -> RunReport:
    """Fold task outcomes into a RunReport.

    Outcomes are folded in task-id order, which makes the result exactly
    permutation-invariant despite float accumulation.
    """
    outcomes = sorted(outcomes, key=lambda o: o.task_id)
    apps = [app for app in TaskType if any(o.app is app for o in outcomes)]
    per_app = {
        app: GroupMetrics(**_group([o for o in outcomes if o.app is app],
                                   sum(1 for o in outcomes if o.app is app)))
        for app in apps
    }
    return RunReport(**_group(outcomes, len(outcomes)), per_app=per_app)


@dataclass(frozen=True)
class MetricDelta:
    metric: str
    mean_a: float | None
    mean_b: float | None
    delta: float | None
    min_a: float | None
    max_a: float | None
    min_b: float | None
    max_b: float | None


def _summarize(values: list[float | None]):
    present = [v for v in values if v is not None]
    if not present:
        return None, None, None
    return sum(present) / len(present), min(present), max(present)


def compare(reports_a: list[RunReport], reports_b: list[RunReport]) -> list[MetricDelta]:
    """Per-metric mean/min/max of two replication sets and their mean gap.

    Rows come back in the fixed METRIC_NAMES order. Replication counts must
    match; None metrics are averaged over the replications that have them.
    """
    if not reports_a or not reports_b:
        raise ValueError("cannot compare empty report lists")
    if len(reports_a) != len(reports_b):
        raise ValueError(
            f"replication counts differ: {len(reports_a)} vs {len(reports_b)}")
    rows = []
    for name in METRIC_NAMES:
        mean_a, min_a, max_a = _summarize([getattr(r, name) for r in reports_a])
        mean_b, min_b, max_b = _summarize([getattr(r, name) for r in reports_b])
        delta = mean_a - mean_b if mean_a is not None and mean_b is not None else None
        rows.append(MetricDelta(name, mean_a, mean_b, delta, min_a, max_a, min_b, max_b))
    return rows


# --- CSV / JSON emission -------------------------------------------------
#
# One CSV row per replication. `series` names the experiment (or "run"),
# `variant` the compared configuration, `point` the swept grid value.

CSV_HEADER = (
    "series", "variant", "point", "seed",
    "n_tasks", "completed_on_time", "dropped", "missed",
    "completion_rate", "total_energy_j", "mean_accuracy", "mean_latency_ms",
)


@dataclass(frozen=True)
class ReportRow:
    series: str
    variant: str
    point: int
    seed: int
    n_tasks: int
    completed_on_time: int
    dropped: int
    missed: int
    completion_rate: float
    total_energy_j: float
    mean_accuracy: float | None
    mean_latency_ms: float | None

    @classmethod
    def from_report(cls, series: str, variant: str, point: int, seed: int,
                    report: RunReport) -> "ReportRow":
        return cls(series, variant, point, seed, report.n_tasks,
                   report.completed_on_time, report.dropped, report.missed,
                   report.completion_rate, report.total_energy_j,
                   report.mean_accuracy, report.mean_latency_ms)


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        # 6 decimals represents the microjoule energy resolution exactly
        return f"{value:.6f}"
    return str(value)


def write_rows_csv(path, rows: Iterable[ReportRow]) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow([_format_cell(getattr(row, name)) for name in CSV_HEADER])


def read_rows_csv(path) -> list[ReportRow]:
    rows = []
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"unexpected CSV header in {path}")
        for record in reader:
            kwargs = {}
            for spec in fields(ReportRow):
                raw = record[spec.name]
                if spec.name in ("series", "variant"):
                    kwargs[spec.name] = raw
                elif spec.name in ("mean_accuracy", "mean_latency_ms"):
                    kwargs[spec.name] = float(raw) if raw else None
                elif spec.name in ("completion_rate", "total_energy_j"):
                    kwargs[spec.name] = float(raw)
                else:
                    kwargs[spec.name] = int(raw)
            rows.append(ReportRow(**kwargs))
    return rows


def report_to_dict(report: RunReport) -> dict:
    """JSON-ready nested dict, apps keyed by their config names."""
    def block(metrics: GroupMetrics) -> dict:
        return {
            "n_tasks": metrics.n_tasks,
            "completed_on_time": metrics.completed_on_time,
            "dropped": metrics.dropped,
            "missed": metrics.missed,
            "completion_rate": metrics.completion_rate,
            "total_energy_j": metrics.total_energy_j,
            "mean_accuracy": metrics.mean_accuracy,
            "mean_latency_ms": metrics.mean_latency_ms,
        }

    result = block(report)
    result["per_app"] = {app.value: block(m) for app, m in report.per_app.items()}
    return result


def report_to_json(report: RunReport) -> str:
    return json.dumps(report_to_dict(report), indent=2, sort_keys=True)
