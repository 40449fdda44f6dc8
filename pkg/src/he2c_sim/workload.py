"""Seeded workload generation and the task trace file format.

Traces are JSON Lines: one object per task with exactly the fields
{id, app, arrival_ms, deadline_ms, input_kb}, sorted by arrival, ids
0..n-1 in arrival order.

Generation uses ``random.Random`` (Mersenne Twister), so the same
(spec, seed) pair yields the same trace on every platform. Draw order is
fixed: all arrivals first, then per task (in arrival order) app, deadline,
input size.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, replace
from typing import Iterable

from .model import Task, TaskType

TRACE_FIELDS = ("id", "app", "arrival_ms", "deadline_ms", "input_kb")


class TraceError(ValueError):
    pass


@dataclass(frozen=True)
class WorkloadSpec:
    """Parameters of one synthetic trace.

    ``app_mix`` holds relative (not necessarily normalized) weights per
    application; deadline and input ranges are inclusive integer bounds.
    ``arrival_process`` is "uniform" (arrivals uniform over the horizon)
    or "poisson" (exponential inter-arrival times at rate n/horizon, which
    may overshoot the horizon).
    """

    n_tasks: int
    horizon_ms: int
    app_mix: dict[TaskType, float]
    deadline_range_ms: tuple[int, int]
    input_kb_range: tuple[int, int]
    arrival_process: str = "uniform"

    def __post_init__(self) -> None:
        if self.n_tasks < 0:
            raise ValueError("n_tasks must be >= 0")
        if self.horizon_ms <= 0:
            raise ValueError("horizon_ms must be > 0")
        weights = [self.app_mix.get(app, 0.0) for app in TaskType]
        if any(w < 0 for w in weights) or sum(weights) <= 0:
            raise ValueError("app_mix weights must be >= 0 and sum to > 0")
        for name, (lo, hi) in (("deadline_range_ms", self.deadline_range_ms),
                               ("input_kb_range", self.input_kb_range)):
            if lo < 1 or hi < lo:
                raise ValueError(f"{name} must satisfy 1 <= lo <= hi, got ({lo}, {hi})")
        if self.arrival_process not in ("uniform", "poisson"):
            raise ValueError(f"unknown arrival_process '{self.arrival_process}'")

    def with_n_tasks(self, n_tasks: int) -> "WorkloadSpec":
        return replace(self, n_tasks=n_tasks)


def _draw_app(rng: random.Random, apps: list[TaskType], cumulative: list[float]) -> TaskType:
    u = rng.random() * cumulative[-1]
    for app, bound in zip(apps, cumulative):
        if u < bound:
            return app
    return apps[-1]


def generate_trace(spec: WorkloadSpec, seed: int) -> list[Task]:
    """Deterministic task list for (spec, seed), sorted by arrival."""
    rng = random.Random(seed)
    if spec.arrival_process == "uniform":
        arrivals = sorted(rng.randint(0, spec.horizon_ms) for _ in range(spec.n_tasks))
    else:
        rate = spec.n_tasks / spec.horizon_ms
        clock = 0.0
        arrivals = []
        for _ in range(spec.n_tasks):
            clock += rng.expovariate(rate)
            arrivals.append(int(clock))
    apps = [app for app in TaskType if spec.app_mix.get(app, 0.0) > 0]
    cumulative = []
    total = 0.0
    for app in apps:
        total += spec.app_mix[app]
        cumulative.append(total)
    tasks = []
    for task_id, arrival in enumerate(arrivals):
        tasks.append(Task(
            id=task_id,
            app=_draw_app(rng, apps, cumulative),
            arrival_ms=arrival,
            deadline_ms=rng.randint(*spec.deadline_range_ms),
            input_kb=rng.randint(*spec.input_kb_range),
        ))
    return tasks


def save_trace(tasks: Iterable[Task], path) -> None:
    with open(path, "w") as handle:
        for task in tasks:
            handle.write(json.dumps({
                "id": task.id,
                "app": task.app.value,
                "arrival_ms": task.arrival_ms,
                "deadline_ms": task.deadline_ms,
                "input_kb": task.input_kb,
            }) + "\n")


def load_trace(path) -> list[Task]:
    """Parse and validate a trace file.

    Raises TraceError with the offending line number on malformed JSON,
    missing/unknown fields, unknown app names, bad task values, duplicate
    ids, or out-of-order arrivals.
    """
    tasks: list[Task] = []
    seen_ids: set[int] = set()
    last_arrival = None
    with open(path) as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise TraceError(f"{path}:{lineno}: malformed JSON ({exc.msg})") from None
            if not isinstance(record, dict) or set(record) != set(TRACE_FIELDS):
                raise TraceError(
                    f"{path}:{lineno}: expected exactly the fields {list(TRACE_FIELDS)}")
            try:
                task = Task(
                    id=int(record["id"]),
                    app=TaskType.from_name(record["app"]),
                    arrival_ms=int(record["arrival_ms"]),
                    deadline_ms=int(record["deadline_ms"]),
                    input_kb=record["input_kb"],
                )
            except (TypeError, ValueError) as exc:
                raise TraceError(f"{path}:{lineno}: {exc}") from None
            if task.id in seen_ids:
                raise TraceError(f"{path}:{lineno}: duplicate task id {task.id}")
            seen_ids.add(task.id)
            if last_arrival is not None and task.arrival_ms < last_arrival:
                raise TraceError(f"{path}:{lineno}: trace not sorted by arrival time")
            last_arrival = task.arrival_ms
            tasks.append(task)
    return tasks
