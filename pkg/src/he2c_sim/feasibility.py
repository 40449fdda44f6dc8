"""Feasibility checkers for the cloud and edge paths.

The multi-factor checkers gate on deadline, energy, and (for the edge)
memory; the latency-only baseline applies just the deadline comparisons
while still reporting true costs. Boundary semantics follow the decision
ladders exactly as specified: the cloud path misses on deadline < latency
and passes energy at E >= cost; the edge path misses on completion >=
deadline and passes resources strictly (E > cost, M > size).

All checks are pure functions of their inputs. The available-memory figure
for the edge is capacity minus the currently pinned (executing) model:
models not executing are treated as LRU-evictable.
"""

from __future__ import annotations

from enum import Enum

from . import kernels
from .model import (
    AppProfile,
    EdgeState,
    FeasibilityEstimate,
    NetworkModel,
    Reason,
    Task,
    to_joules,
    to_microjoules,
)

REASON_BY_CODE = {
    0: Reason.OK,
    1: Reason.DEADLINE_MISS,
    2: Reason.INSUFFICIENT_ENERGY,
    3: Reason.INSUFFICIENT_MEMORY,
}


class CheckerKind(Enum):
    MULTI_FACTOR = "multi_factor"
    LATENCY_ONLY = "latency_only"


def estimate_cloud_latency(task: Task, profile: AppProfile, net: NetworkModel) -> int:
    """Expected end-to-end cloud latency in ms, from dispatch instant."""
    return kernels.active().cloud_latency_ms(
        task.input_kb, net.uplink_kbps, profile.cloud_exec_ms,
        net.result_size_kb, net.downlink_kbps, net.rtt_ms,
    )


def _cloud_estimate(task, profile, net, edge, latency_only):
    k = kernels.active()
    latency = k.cloud_latency_ms(
        task.input_kb, net.uplink_kbps, profile.cloud_exec_ms,
        net.result_size_kb, net.downlink_kbps, net.rtt_ms,
    )
    cost_uj = profile.cloud_energy_uj(task.input_kb)
    code = k.cloud_check(task.deadline_ms, latency, to_microjoules(edge.battery_j),
                         cost_uj, latency_only)
    return FeasibilityEstimate(
        feasible=code == 0,
        expected_latency_ms=latency,
        energy_cost_j=to_joules(cost_uj),
        memory_needed_mb=0.0,
        reason=REASON_BY_CODE[code],
    )


def cloud_feasible(task: Task, profile: AppProfile, net: NetworkModel,
                   edge: EdgeState) -> FeasibilityEstimate:
    """Can the task finish in the cloud on time, and can the battery afford
    the transfer? The energy charged to the device is upload + receive only."""
    return _cloud_estimate(task, profile, net, edge, latency_only=False)


def estimate_edge_completion(task: Task, profile: AppProfile, edge: EdgeState,
                             now: int) -> int:
    """Expected edge completion in ms measured from the task's arrival.

    Includes executor queue wait and, when the model is not resident, the
    cold-start load penalty. Requires now >= task.arrival_ms.
    """
    relative_to_now = kernels.active().edge_completion_ms(
        now, edge.busy_until, task.app in edge.resident_models,
        profile.model_load_ms, profile.edge_exec_ms,
    )
    return (now - task.arrival_ms) + relative_to_now


def _edge_estimate(task, profile, edge, now, latency_only):
    k = kernels.active()
    completion = estimate_edge_completion(task, profile, edge, now)
    code = k.edge_check(
        task.deadline_ms, completion, to_microjoules(edge.battery_j),
        to_microjoules(profile.edge_energy_j), edge.free_for_load_mb(now),
        profile.model_size_mb, latency_only,
    )
    return FeasibilityEstimate(
        feasible=code == 0,
        expected_latency_ms=completion,
        energy_cost_j=to_joules(to_microjoules(profile.edge_energy_j)),
        memory_needed_mb=profile.model_size_mb,
        reason=REASON_BY_CODE[code],
    )


def edge_feasible(task: Task, profile: AppProfile, edge: EdgeState,
                  now: int) -> FeasibilityEstimate:
    """Can the task finish on the edge before its deadline with battery and
    memory to spare? Cold-start load time counts against the deadline."""
    return _edge_estimate(task, profile, edge, now, latency_only=False)


def latency_only_feasible(task: Task, profile: AppProfile, net: NetworkModel,
                          edge: EdgeState, now: int):
    """Single-factor baseline: deadline comparisons only, resource guards
    skipped. Estimates still carry true energy/memory costs."""
    return (
        _cloud_estimate(task, profile, net, edge, latency_only=True),
        _edge_estimate(task, profile, edge, now, latency_only=True),
    )


def run_checks(task: Task, profile: AppProfile, net: NetworkModel, edge: EdgeState,
               now: int, checker: CheckerKind):
    """Both feasibility estimates under the selected checker kind."""
    if checker is CheckerKind.LATENCY_ONLY:
        return latency_only_feasible(task, profile, net, edge, now)
    return (
        cloud_feasible(task, profile, net, edge),
        edge_feasible(task, profile, edge, now),
    )
