import random

from he2c_sim.feasibility import edge_feasible
from he2c_sim.model import Target, TaskType
from he2c_sim.rescue import rescue
from oracle import random_case
from util import make_edge, make_profile, make_task


WARM = {TaskType.FACE_RECOGNITION: 350.0}


def test_rescue_salvages_warm_task_within_deadline(backend):
    profile = make_profile(edge_exec_ms=60, model_load_ms=300, edge_energy_j=2.0)
    edge = make_edge(battery_j=10.0, resident_models=dict(WARM))
    assert rescue(make_task(deadline_ms=100), profile, edge, now=0) is Target.EDGE


def test_rescue_requires_residency(backend):
    # generous everything, but the model is not loaded
    profile = make_profile(edge_exec_ms=10, edge_energy_j=0.1)
    edge = make_edge(battery_j=100.0)
    assert rescue(make_task(deadline_ms=5000), profile, edge, now=0) is Target.DROP


def test_rescue_boundaries(backend):
    profile = make_profile(edge_exec_ms=60, model_load_ms=300, edge_energy_j=2.0)
    # deadline == warm completion drops (strictly-greater comparison)
    edge = make_edge(battery_j=10.0, resident_models=dict(WARM))
    assert rescue(make_task(deadline_ms=60), profile, edge, now=0) is Target.DROP
    # energy cost == battery still dispatches (inclusive comparison)
    exact = make_edge(battery_j=2.0, resident_models=dict(WARM))
    assert rescue(make_task(deadline_ms=100), profile, exact, now=0) is Target.EDGE


def test_rescue_ignores_cold_start_but_keeps_queue_wait(backend):
    profile = make_profile(edge_exec_ms=60, model_load_ms=10_000, edge_energy_j=1.0)
    busy = make_edge(battery_j=10.0, busy_until=30, resident_models=dict(WARM))
    # warm completion = 30 queue + 60 exec = 90 < 100
    assert rescue(make_task(deadline_ms=100), profile, busy, now=0) is Target.EDGE
    assert rescue(make_task(deadline_ms=90), profile, busy, now=0) is Target.DROP


def test_rescue_never_mutates_state(backend):
    profile = make_profile()
    edge = make_edge(battery_j=10.0, resident_models=dict(WARM), busy_until=25)
    before = (edge.battery_j, dict(edge.resident_models), edge.busy_until)
    rescue(make_task(deadline_ms=300), profile, edge, now=0)
    assert (edge.battery_j, edge.resident_models, edge.busy_until) == \
        (before[0], before[1], before[2])


def test_rescue_weaker_than_edge_check_only_through_warm_start(backend):
    # whenever the full edge check already passes and the model is resident,
    # rescue must also dispatch
    rng = random.Random(23)
    checked = 0
    for _ in range(3000):
        task, profile, net, edge, now = random_case(rng)
        if task.app not in edge.resident_models:
            continue
        if edge_feasible(task, profile, edge, now).feasible:
            checked += 1
            assert rescue(task, profile, edge, now) is Target.EDGE
    assert checked > 50
