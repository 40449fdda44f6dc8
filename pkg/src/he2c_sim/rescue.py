"""Last-chance salvage of tasks both feasibility checks rejected.

A rejected task may still run on the edge if its model happens to be
resident: the warm-start completion estimate (queue wait + execution, no
load time) is compared against the deadline, and the battery must cover
the inference. Boundary semantics differ deliberately from the edge
checker: the deadline comparison is strict (deadline > completion) and the
energy comparison is inclusive (cost <= battery), exactly as the salvage
ladder states them. No memory check: a resident model needs no load.

The verdict never mutates state; in particular it never loads a model.
"""

from __future__ import annotations

from . import kernels
from .model import AppProfile, EdgeState, Target, Task, to_microjoules


def rescue(task: Task, profile: AppProfile, edge: EdgeState, now: int) -> Target:
    """Edge if the task is salvageable under warm start, else Drop.

    Intended to be called only after both the cloud and edge checks came
    back infeasible; it is a pure function either way.
    """
    k = kernels.active()
    warm_completion = (now - task.arrival_ms) + k.edge_completion_ms(
        now, edge.busy_until, True, profile.model_load_ms, profile.edge_exec_ms,
    )
    salvageable = k.rescue_check(
        task.deadline_ms, warm_completion,
        to_microjoules(edge.battery_j), to_microjoules(profile.edge_energy_j),
        task.app in edge.resident_models,
    )
    return Target.EDGE if salvageable else Target.DROP
