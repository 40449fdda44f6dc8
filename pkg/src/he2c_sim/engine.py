"""Deterministic discrete-event simulation of the edge-cloud system.

Events are processed in (time, seq) order with seq assigned at enqueue;
arrival events are enqueued up front in trace order, so simultaneous
arrivals keep trace order and an arrival at time t is admitted before a
completion at the same instant is settled (admission sees state as of the
arrival instant, with in-flight edge debits still pending).

Dispatch bookkeeping:

* cloud: the transfer energy is debited at dispatch and the task completes
  a fixed end-to-end latency later; cloud capacity is unbounded.
* edge: a single executor runs jobs back to back. The model cache is
  updated at dispatch (LRU eviction of non-executing models, then load);
  inference energy is debited at completion.

Admission never guarantees execution. A dispatch the device cannot actually
carry (battery empty, or a model that no longer fits even after eviction -
both reachable only when resource guards were skipped or state changed
after admission) fails deterministically: a dead battery absorbs whatever
charge remained, a failed model load still occupies the executor for the
load time, and the task counts as missed. Battery never goes negative and
resident models never exceed capacity; the engine asserts both after every
event.

Model pinning is derived from the engine's own job queue, so an initial
``EdgeState.busy_until`` in the future counts as unpinned residual work:
``running_model`` on the initial state is ignored (it cannot be expressed
in config files either).
"""

from __future__ import annotations

import heapq
import os
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Sequence

from .allocator import (
    ACCURACY_SCALE,
    ENERGY_FLOOR_UJ,
    HANDLER_CODES,
    DEFAULT_WEIGHTS,
    HandlerKind,
    HandlerWeights,
)
from .feasibility import REASON_BY_CODE, CheckerKind
from .metrics import RunReport, aggregate
from .model import (
    AppProfile,
    Decision,
    EdgeState,
    FeasibilityEstimate,
    NetworkModel,
    Target,
    Task,
    TaskType,
    to_joules,
    to_microjoules,
)

if TYPE_CHECKING:
    from .config import SimConfig


class EventKind(Enum):
    TASK_ARRIVAL = "task_arrival"
    EDGE_COMPLETE = "edge_complete"
    CLOUD_COMPLETE = "cloud_complete"


@dataclass(frozen=True)
class Event:
    time: int
    seq: int
    kind: EventKind
    task_id: int


@dataclass(frozen=True)
class TaskOutcome:
    """What actually happened to one task (truth, not the estimate)."""

    task_id: int
    app: TaskType
    decision: Decision
    arrival_ms: int
    deadline_ms: int
    started_ms: int | None
    completed_ms: int | None
    on_time: bool
    accuracy: float | None
    energy_spent_uj: int
    latency_ms: int | None

    @property
    def energy_spent_j(self) -> float:
        return to_joules(self.energy_spent_uj)


@dataclass
class SimResult:
    """Full outcome of one run, for inspection beyond the RunReport."""

    outcomes: list[TaskOutcome]
    report: RunReport
    initial_battery_uj: int
    final_battery_uj: int
    final_resident: tuple[TaskType, ...]
    edge_busy_intervals: list[tuple[int, int]]
    events: list[Event]

    @property
    def final_battery_j(self) -> float:
        return to_joules(self.final_battery_uj)


@dataclass(frozen=True)
class _AppRuntime:
    # per-app constants quantized once per run
    edge_exec_ms: int
    cloud_exec_ms: int
    model_load_ms: int
    model_size_mb: float
    edge_cost_uj: int
    upload_j_per_kb: float
    receive_uj: int
    edge_accuracy: float
    cloud_accuracy: float
    sensitive: bool


@dataclass
class _EdgeJob:
    task_id: int
    app: TaskType
    start_ms: int
    end_ms: int
    failed_load: bool


class SimulationError(ValueError):
    pass


class Simulation:
    """One deterministic run over a task trace."""

    def __init__(self, trace: Sequence[Task], profiles: dict[TaskType, AppProfile],
                 net: NetworkModel, edge_init: EdgeState,
                 checker: CheckerKind = CheckerKind.MULTI_FACTOR,
                 handler: HandlerKind = HandlerKind.ENERGY_ACCURACY,
                 weights: HandlerWeights = DEFAULT_WEIGHTS,
                 rescue_enabled: bool = True,
                 record_events: bool = False):
        self._validate_trace(trace, profiles)
        from . import kernels  # bind the backend once per run

        self._kernel = kernels.active()
        self._trace = {task.id: task for task in trace}
        self._order = [task.id for task in trace]
        self._net = net
        self._checker = checker
        self._latency_only = checker is CheckerKind.LATENCY_ONLY
        self._handler_code = HANDLER_CODES[handler]
        self._weights = weights
        self._rescue_enabled = rescue_enabled
        self._record_events = record_events

        self._runtime = {
            app: _AppRuntime(
                edge_exec_ms=p.edge_exec_ms,
                cloud_exec_ms=p.cloud_exec_ms,
                model_load_ms=p.model_load_ms,
                model_size_mb=p.model_size_mb,
                edge_cost_uj=to_microjoules(p.edge_energy_j),
                upload_j_per_kb=p.upload_energy_j_per_kb,
                receive_uj=to_microjoules(p.receive_energy_j),
                edge_accuracy=p.edge_accuracy,
                cloud_accuracy=p.cloud_accuracy,
                sensitive=app.accuracy_sensitive,
            )
            for app, p in profiles.items()
        }

        self._battery_uj = to_microjoules(edge_init.battery_j)
        self._initial_battery_uj = self._battery_uj
        self._capacity_mb = edge_init.memory_capacity_mb
        self._cache: dict[TaskType, float] = dict(edge_init.resident_models)
        self._busy_until = edge_init.busy_until

        self._heap: list[tuple[int, int, int, int]] = []
        self._seq = 0
        self._edge_jobs: deque[_EdgeJob] = deque()
        self._intervals: list[tuple[int, int]] = []
        self._outcomes: dict[int, TaskOutcome] = {}
        self._events: list[Event] = []
        self._pending_cloud: dict[int, tuple[Decision, int, int]] = {}
        self._pending_edge: dict[int, Decision] = {}

    @staticmethod
    def _validate_trace(trace, profiles):
        last_arrival = None
        seen_ids = set()
        for task in trace:
            if last_arrival is not None and task.arrival_ms < last_arrival:
                raise SimulationError("trace not sorted by arrival time")
            last_arrival = task.arrival_ms
            if task.id in seen_ids:
                raise SimulationError(f"duplicate task id {task.id}")
            seen_ids.add(task.id)
            if task.app not in profiles:
                raise SimulationError(f"no profile for app '{task.app.value}'")

    # -- event plumbing ----------------------------------------------------

    _KIND_CODES = {EventKind.TASK_ARRIVAL: 0, EventKind.EDGE_COMPLETE: 1,
                   EventKind.CLOUD_COMPLETE: 2}
    _KIND_BY_CODE = {v: k for k, v in _KIND_CODES.items()}

    def _push(self, time: int, kind: EventKind, task_id: int) -> None:
        heapq.heappush(self._heap, (time, self._seq, self._KIND_CODES[kind], task_id))
        self._seq += 1

    # -- edge cache --------------------------------------------------------

    def _pinned_app(self, now: int) -> TaskType | None:
        if self._edge_jobs:
            front = self._edge_jobs[0]
            if front.start_ms <= now < front.end_ms:
                return front.app
        return None

    def _free_for_load_mb(self, now: int) -> float:
        pinned = self._pinned_app(now)
        pinned_mb = self._cache.get(pinned, 0.0) if pinned is not None else 0.0
        return self._capacity_mb - pinned_mb

    def _touch(self, app: TaskType) -> None:
        self._cache[app] = self._cache.pop(app)

    def _try_load(self, app: TaskType, size_mb: float, now: int) -> bool:
        """Evict LRU non-executing models until `app` fits, then insert.

        Returns False (no mutation beyond evictions already needed is ever
        made; the cache is untouched) when the model cannot fit even after
        evicting everything unpinned.
        """
        pinned = self._pinned_app(now)
        pinned_mb = self._cache.get(pinned, 0.0) if pinned is not None else 0.0
        if pinned_mb + size_mb > self._capacity_mb:
            return False
        while sum(self._cache.values()) + size_mb > self._capacity_mb:
            victim = next(a for a in self._cache if a is not pinned)
            del self._cache[victim]
        self._cache[app] = size_mb
        return True

    # -- dispatch ----------------------------------------------------------

    def _dispatch_cloud(self, task: Task, decision: Decision, now: int,
                        latency_ms: int, cost_uj: int) -> None:
        if self._battery_uj >= cost_uj:
            self._battery_uj -= cost_uj
            self._pending_cloud[task.id] = (decision, now, cost_uj)
            self._push(now + latency_ms, EventKind.CLOUD_COMPLETE, task.id)
        else:
            # battery dies mid-transfer: remaining charge is lost, no result
            spent = self._battery_uj
            self._battery_uj = 0
            self._record(task, decision, started=now, completed=None,
                         accuracy=None, energy_uj=spent)

    def _dispatch_edge(self, task: Task, decision: Decision, now: int) -> None:
        rt = self._runtime[task.app]
        start = now if now > self._busy_until else self._busy_until
        if task.app in self._cache:
            self._touch(task.app)
            end = start + rt.edge_exec_ms
            failed_load = False
        elif self._try_load(task.app, rt.model_size_mb, now):
            end = start + rt.model_load_ms + rt.edge_exec_ms
            failed_load = False
        else:
            # load attempt aborts after wasting the load time on the executor
            end = start + rt.model_load_ms
            failed_load = True
        self._busy_until = end
        self._edge_jobs.append(_EdgeJob(task.id, task.app, start, end, failed_load))
        self._pending_edge[task.id] = decision
        self._intervals.append((start, end))
        self._push(end, EventKind.EDGE_COMPLETE, task.id)

    # -- outcome recording ---------------------------------------------------

    def _record(self, task: Task, decision: Decision, started: int | None,
                completed: int | None, accuracy: float | None, energy_uj: int) -> None:
        on_time = completed is not None and completed <= task.absolute_deadline_ms
        self._outcomes[task.id] = TaskOutcome(
            task_id=task.id,
            app=task.app,
            decision=decision,
            arrival_ms=task.arrival_ms,
            deadline_ms=task.deadline_ms,
            started_ms=started,
            completed_ms=completed,
            on_time=on_time,
            accuracy=accuracy,
            energy_spent_uj=energy_uj,
            latency_ms=completed - task.arrival_ms if completed is not None else None,
        )

    # -- event handlers ------------------------------------------------------

    def _estimates(self, verdict, edge_cost_uj: int, model_size_mb: float):
        (_, _, cloud_reason, latency, cloud_cost, edge_reason, completion, _) = verdict
        cloud = FeasibilityEstimate(
            feasible=cloud_reason == 0, expected_latency_ms=latency,
            energy_cost_j=to_joules(cloud_cost), memory_needed_mb=0.0,
            reason=REASON_BY_CODE[cloud_reason])
        edge = FeasibilityEstimate(
            feasible=edge_reason == 0, expected_latency_ms=completion,
            energy_cost_j=to_joules(edge_cost_uj), memory_needed_mb=model_size_mb,
            reason=REASON_BY_CODE[edge_reason])
        return cloud, edge

    def _on_arrival(self, task: Task, now: int) -> None:
        rt = self._runtime[task.app]
        w = self._weights
        verdict = self._kernel.admission_verdict(
            task.deadline_ms, task.input_kb,
            rt.edge_exec_ms, rt.model_load_ms, rt.model_size_mb,
            rt.edge_cost_uj, rt.upload_j_per_kb, rt.receive_uj, rt.cloud_exec_ms,
            self._net.uplink_kbps, self._net.downlink_kbps, self._net.rtt_ms,
            self._net.result_size_kb,
            self._battery_uj, self._busy_until, now,
            task.app in self._cache, self._free_for_load_mb(now),
            self._latency_only, self._rescue_enabled,
            self._handler_code, w.w0, w.w_energy, w.w_accuracy, w.w_sensitive,
            rt.sensitive, rt.edge_accuracy, rt.cloud_accuracy,
            ENERGY_FLOOR_UJ, ACCURACY_SCALE,
        )
        target_code, via_rescue = verdict[0], verdict[1]
        cloud_est, edge_est = self._estimates(verdict, rt.edge_cost_uj, rt.model_size_mb)
        target = (Target.EDGE, Target.CLOUD, Target.DROP)[target_code]
        decision = Decision(target=target, via_rescue=via_rescue,
                            cloud_check=cloud_est, edge_check=edge_est)
        if target is Target.CLOUD:
            self._dispatch_cloud(task, decision, now, verdict[3], verdict[4])
        elif target is Target.EDGE:
            self._dispatch_edge(task, decision, now)
        else:
            self._record(task, decision, started=None, completed=None,
                         accuracy=None, energy_uj=0)

    def _on_edge_complete(self, task: Task, now: int) -> None:
        job = self._edge_jobs.popleft()
        if job.task_id != task.id:
            raise SimulationError("edge completion out of order")
        decision = self._pending_edge.pop(task.id)
        rt = self._runtime[task.app]
        if job.failed_load:
            self._record(task, decision, started=job.start_ms, completed=None,
                         accuracy=None, energy_uj=0)
        elif self._battery_uj >= rt.edge_cost_uj:
            self._battery_uj -= rt.edge_cost_uj
            self._record(task, decision, started=job.start_ms, completed=now,
                         accuracy=rt.edge_accuracy, energy_uj=rt.edge_cost_uj)
        else:
            # battery died mid-inference
            spent = self._battery_uj
            self._battery_uj = 0
            self._record(task, decision, started=job.start_ms, completed=None,
                         accuracy=None, energy_uj=spent)

    def _on_cloud_complete(self, task: Task, now: int) -> None:
        decision, dispatched, cost_uj = self._pending_cloud.pop(task.id)
        self._record(task, decision, started=dispatched, completed=now,
                     accuracy=self._runtime[task.app].cloud_accuracy, energy_uj=cost_uj)

    # -- run -----------------------------------------------------------------

    def _check_state(self) -> None:
        if self._battery_uj < 0:
            raise SimulationError("battery went negative")
        if sum(self._cache.values()) > self._capacity_mb:
            raise SimulationError("resident models exceed memory capacity")

    def run(self) -> SimResult:
        for task_id in self._order:
            self._push(self._trace[task_id].arrival_ms, EventKind.TASK_ARRIVAL, task_id)
        while self._heap:
            time, seq, kind_code, task_id = heapq.heappop(self._heap)
            kind = self._KIND_BY_CODE[kind_code]
            if self._record_events:
                self._events.append(Event(time, seq, kind, task_id))
            task = self._trace[task_id]
            if kind is EventKind.TASK_ARRIVAL:
                self._on_arrival(task, time)
            elif kind is EventKind.EDGE_COMPLETE:
                self._on_edge_complete(task, time)
            else:
                self._on_cloud_complete(task, time)
            self._check_state()
        outcomes = [self._outcomes[task_id] for task_id in sorted(self._outcomes)]
        return SimResult(
            outcomes=outcomes,
            report=aggregate(outcomes),
            initial_battery_uj=self._initial_battery_uj,
            final_battery_uj=self._battery_uj,
            final_resident=tuple(self._cache),
            edge_busy_intervals=list(self._intervals),
            events=self._events,
        )


def simulate(trace: Sequence[Task], profiles: dict[TaskType, AppProfile],
             net: NetworkModel, edge_init: EdgeState,
             checker: CheckerKind = CheckerKind.MULTI_FACTOR,
             handler: HandlerKind = HandlerKind.ENERGY_ACCURACY,
             weights: HandlerWeights = DEFAULT_WEIGHTS,
             rescue_enabled: bool = True) -> RunReport:
    """Run one simulation and return its aggregated report."""
    return Simulation(trace, profiles, net, edge_init, checker=checker,
                      handler=handler, weights=weights,
                      rescue_enabled=rescue_enabled).run().report


def run_simulation(config: "SimConfig", seed: int, trace: Sequence[Task] | None = None,
                   n_tasks: int | None = None) -> SimResult:
    """Simulate one seed of a config, generating its trace unless given."""
    from .workload import generate_trace

    if trace is None:
        spec = config.workload if n_tasks is None else config.workload.with_n_tasks(n_tasks)
        trace = generate_trace(spec, seed)
    return Simulation(
        trace, config.profiles, config.net, config.edge.copy(),
        checker=config.checker, handler=config.handler, weights=config.weights,
        rescue_enabled=config.rescue_enabled,
    ).run()


def thread_count() -> int:
    """Replication parallelism cap from HE2C_SIM_THREADS (default 1)."""
    raw = os.environ.get("HE2C_SIM_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_replications(config: "SimConfig", seeds: Sequence[int],
                     trace: Sequence[Task] | None = None,
                     n_tasks: int | None = None) -> list[RunReport]:
    """One independent simulation per seed, reports in seed order.

    Replications are pure and independent, so they may run on a thread
    pool (capped by HE2C_SIM_THREADS) without affecting results.
    """
    if not seeds:
        raise ValueError("seeds must be nonempty")

    def one(seed: int) -> RunReport:
        return run_simulation(config, seed, trace=trace, n_tasks=n_tasks).report

    workers = min(thread_count(), len(seeds))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, seeds))
    return [one(seed) for seed in seeds]
