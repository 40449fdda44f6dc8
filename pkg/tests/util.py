"""Shared builders for test objects with sensible defaults."""

from he2c_sim.model import AppProfile, EdgeState, NetworkModel, Task, TaskType


def make_profile(app=TaskType.FACE_RECOGNITION, **overrides) -> AppProfile:
    values = dict(
        app=app,
        edge_exec_ms=40,
        cloud_exec_ms=15,
        model_load_ms=300,
        model_size_mb=350.0,
        edge_accuracy=0.9,
        cloud_accuracy=0.96,
        edge_energy_j=0.5,
        upload_energy_j_per_kb=0.01,
        receive_energy_j=0.05,
    )
    values.update(overrides)
    return AppProfile(**values)


def make_net(**overrides) -> NetworkModel:
    values = dict(uplink_kbps=1000.0, downlink_kbps=1000.0, rtt_ms=20, result_size_kb=1.0)
    values.update(overrides)
    return NetworkModel(**values)


def make_edge(**overrides) -> EdgeState:
    values = dict(battery_j=100.0, memory_capacity_mb=1024.0, resident_models={},
                  busy_until=0, running_model=None)
    values.update(overrides)
    return EdgeState(**values)


def make_task(task_id=0, app=TaskType.FACE_RECOGNITION, arrival_ms=0,
              deadline_ms=500, input_kb=100) -> Task:
    return Task(id=task_id, app=app, arrival_ms=arrival_ms,
                deadline_ms=deadline_ms, input_kb=input_kb)
