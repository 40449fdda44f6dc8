import pytest

from he2c_sim.engine import Simulation, SimulationError, run_replications, simulate
from he2c_sim.feasibility import CheckerKind
from he2c_sim.model import Target, TaskType, to_microjoules
from he2c_sim.workload import generate_trace
from util import make_edge, make_net, make_profile, make_task

FR = TaskType.FACE_RECOGNITION
TD = TaskType.TEXT_DETECTION


def profiles_for(*profiles):
    return {p.app: p for p in profiles}


def run(trace, profiles, net=None, edge=None, **kwargs):
    return Simulation(trace, profiles, net or make_net(), edge or make_edge(),
                      **kwargs).run()


def test_empty_trace_reports_vacuous_success():
    result = run([], profiles_for(make_profile()))
    assert result.report.n_tasks == 0
    assert result.report.completion_rate == 1.0
    assert result.report.mean_accuracy is None


def test_single_warm_task_bookkeeping():
    profile = make_profile(edge_exec_ms=40, edge_energy_j=0.5, model_size_mb=350.0)
    edge = make_edge(battery_j=100.0, resident_models={FR: 350.0})
    # slow network so the edge wins the allocation
    net = make_net(uplink_kbps=10.0, rtt_ms=500)
    result = run([make_task(deadline_ms=100)], profiles_for(profile), net, edge)
    outcome = result.outcomes[0]
    assert outcome.decision.target is Target.EDGE
    assert outcome.completed_ms == 40 and outcome.on_time
    assert outcome.energy_spent_uj == to_microjoules(0.5)
    assert result.report.completion_rate == 1.0
    assert result.report.total_energy_j == 0.5
    assert result.initial_battery_uj - result.final_battery_uj == to_microjoules(0.5)


def test_two_simultaneous_tasks_second_hits_queue_wait():
    profile = make_profile(edge_exec_ms=40, edge_energy_j=0.5, model_size_mb=100.0)
    net = make_net(uplink_kbps=10.0, rtt_ms=5000)  # cloud hopeless
    edge = make_edge(battery_j=100.0, resident_models={FR: 100.0})
    tasks = [make_task(task_id=0, deadline_ms=79),
             make_task(task_id=1, deadline_ms=80)]
    # second task: completion = 40 queue + 40 exec = 80 >= deadline 80 -> reject
    result = run(tasks, profiles_for(profile), net, edge, rescue_enabled=False)
    first, second = result.outcomes
    assert first.decision.target is Target.EDGE and first.completed_ms == 40
    assert second.decision.target is Target.DROP
    # with one extra millisecond of slack it queues and completes on time
    tasks[1] = make_task(task_id=1, deadline_ms=81)
    result = run(tasks, profiles_for(profile), net, edge, rescue_enabled=False)
    second = result.outcomes[1]
    assert second.decision.target is Target.EDGE
    assert second.completed_ms == 80 and second.on_time


def test_starved_battery_drops_everything_without_spending():
    profile = make_profile(edge_energy_j=0.5, upload_energy_j_per_kb=0.01,
                           receive_energy_j=0.05, model_size_mb=100.0)
    edge = make_edge(battery_j=0.1, resident_models={FR: 100.0})
    tasks = [make_task(task_id=i, arrival_ms=i * 10, deadline_ms=5000)
             for i in range(5)]
    result = run(tasks, profiles_for(profile), make_net(), edge)
    assert all(o.decision.target is Target.DROP for o in result.outcomes)
    assert result.final_battery_uj == result.initial_battery_uj
    assert result.report.dropped == 5


def test_rescue_path_salvages_memory_blocked_warm_task():
    # two warm models that exactly fill memory; a second-app task arriving
    # while the first app runs fails the conservative memory check, and with
    # a deadline too tight for the cloud only rescue can save it
    fr = make_profile(app=FR, edge_exec_ms=30, model_size_mb=340.0, edge_energy_j=0.4)
    td = make_profile(app=TD, edge_exec_ms=25, model_size_mb=300.0, edge_energy_j=0.3)
    edge = make_edge(battery_j=50.0, memory_capacity_mb=640.0,
                     resident_models={FR: 340.0, TD: 300.0})
    net = make_net(rtt_ms=200)
    tasks = [make_task(task_id=0, app=FR, arrival_ms=0, deadline_ms=100),
             make_task(task_id=1, app=TD, arrival_ms=10, deadline_ms=100)]
    with_rescue = run(tasks, profiles_for(fr, td), net, edge.copy(), rescue_enabled=True)
    saved = with_rescue.outcomes[1]
    assert saved.decision.target is Target.EDGE and saved.decision.via_rescue
    assert saved.on_time
    without = run(tasks, profiles_for(fr, td), net, edge.copy(), rescue_enabled=False)
    assert without.outcomes[1].decision.target is Target.DROP


def test_latency_only_failed_load_occupies_executor_without_mutation():
    # model larger than device memory: multi-factor sends it to the cloud,
    # latency-only tries the edge, wastes the load time, and misses
    # (insensitive app, so the handler follows the cheaper edge energy)
    big = make_profile(app=TD, model_size_mb=900.0, model_load_ms=300,
                       edge_exec_ms=30, edge_energy_j=0.4,
                       upload_energy_j_per_kb=10.0, receive_energy_j=0.1)
    edge = make_edge(battery_j=5000.0, memory_capacity_mb=640.0)
    net = make_net()
    task = make_task(task_id=0, app=TD, deadline_ms=5000, input_kb=100)
    multi = run([task], profiles_for(big), net, edge.copy(),
                checker=CheckerKind.MULTI_FACTOR)
    assert multi.outcomes[0].decision.target is Target.CLOUD
    assert multi.outcomes[0].on_time

    lat_only = run([task], profiles_for(big), net, edge.copy(),
                   checker=CheckerKind.LATENCY_ONLY)
    doomed = lat_only.outcomes[0]
    assert doomed.decision.target is Target.EDGE  # upload too costly, edge cheaper
    assert doomed.completed_ms is None and not doomed.on_time
    assert doomed.energy_spent_uj == 0
    assert lat_only.final_resident == ()  # aborted load never inserted
    assert lat_only.edge_busy_intervals == [(0, 300)]  # wasted load attempt


def test_latency_only_battery_death_drains_remaining_charge():
    profile = make_profile(upload_energy_j_per_kb=0.01, receive_energy_j=0.05,
                           model_size_mb=2000.0)
    edge = make_edge(battery_j=0.3, memory_capacity_mb=100.0)
    task = make_task(deadline_ms=500, input_kb=100)  # transfer needs 1.05 J
    result = run([task], profiles_for(profile), make_net(), edge,
                 checker=CheckerKind.LATENCY_ONLY)
    outcome = result.outcomes[0]
    assert outcome.decision.target is Target.CLOUD
    assert outcome.completed_ms is None
    assert outcome.energy_spent_uj == to_microjoules(0.3)
    assert result.final_battery_uj == 0


def test_lru_eviction_pins_running_model():
    # three models cycle through a cache that holds two; the running model
    # must survive eviction
    fr = make_profile(app=FR, model_size_mb=300.0, edge_exec_ms=500, model_load_ms=100,
                      edge_energy_j=0.1)
    td = make_profile(app=TD, model_size_mb=300.0, edge_exec_ms=30, model_load_ms=100,
                      edge_energy_j=0.1)
    tr = make_profile(app=TaskType.TEXT_RECOGNITION, model_size_mb=300.0,
                      edge_exec_ms=30, model_load_ms=100, edge_energy_j=0.1)
    edge = make_edge(battery_j=100.0, memory_capacity_mb=650.0,
                     resident_models={TD: 300.0, FR: 300.0})
    net = make_net(uplink_kbps=1.0, rtt_ms=9000)  # force everything on-edge
    tasks = [
        make_task(task_id=0, app=FR, arrival_ms=0, deadline_ms=5000),
        # arrives while fr executes; must evict td (LRU), never running fr
        make_task(task_id=1, app=TaskType.TEXT_RECOGNITION, arrival_ms=10,
                  deadline_ms=5000),
    ]
    result = run(tasks, profiles_for(fr, td, tr), net, edge)
    assert set(result.final_resident) == {FR, TaskType.TEXT_RECOGNITION}
    assert all(o.on_time for o in result.outcomes)


def test_trace_validation_errors():
    profile = make_profile()
    unsorted = [make_task(task_id=0, arrival_ms=100), make_task(task_id=1, arrival_ms=50)]
    with pytest.raises(SimulationError, match="not sorted"):
        Simulation(unsorted, profiles_for(profile), make_net(), make_edge())
    dupes = [make_task(task_id=3), make_task(task_id=3, arrival_ms=10)]
    with pytest.raises(SimulationError, match="duplicate task id 3"):
        Simulation(dupes, profiles_for(profile), make_net(), make_edge())
    missing = [make_task(app=TD)]
    with pytest.raises(SimulationError, match="no profile for app 'text_detection'"):
        Simulation(missing, profiles_for(profile), make_net(), make_edge())


def _random_workload_result(seed, example_config, n_tasks=300, **kwargs):
    trace = generate_trace(example_config.workload.with_n_tasks(n_tasks), seed)
    return Simulation(trace, example_config.profiles, example_config.net,
                      example_config.edge.copy(), checker=example_config.checker,
                      handler=example_config.handler, weights=example_config.weights,
                      rescue_enabled=True, **kwargs).run()


def test_energy_conservation_and_task_accounting(example_config, backend):
    for seed in range(5):
        result = _random_workload_result(seed, example_config)
        spent = sum(o.energy_spent_uj for o in result.outcomes)
        assert result.initial_battery_uj - result.final_battery_uj == spent
        report = result.report
        assert report.completed_on_time + report.dropped + report.missed == report.n_tasks
        for outcome in result.outcomes:
            if outcome.on_time:
                assert outcome.completed_ms <= outcome.arrival_ms + outcome.deadline_ms
            if outcome.decision.target is Target.DROP:
                assert outcome.completed_ms is None
                assert outcome.energy_spent_uj == 0
                assert outcome.accuracy is None


def test_executor_intervals_never_overlap(example_config):
    for seed in range(5):
        result = _random_workload_result(seed, example_config)
        intervals = sorted(result.edge_busy_intervals)
        for (s1, e1), (s2, e2) in zip(intervals, intervals[1:]):
            assert e1 <= s2


def test_no_infeasible_dispatch(example_config):
    result = _random_workload_result(0, example_config)
    for outcome in result.outcomes:
        if outcome.decision.target is Target.EDGE:
            assert outcome.decision.edge_check.feasible or outcome.decision.via_rescue
        elif outcome.decision.target is Target.CLOUD:
            assert outcome.decision.cloud_check.feasible


def test_events_processed_in_time_seq_order(example_config):
    result = _random_workload_result(1, example_config, record_events=True)
    keys = [(e.time, e.seq) for e in result.events]
    assert keys == sorted(keys)
    seqs = [e.seq for e in result.events]
    assert len(set(seqs)) == len(seqs)


def test_same_seed_same_everything(example_config, backend):
    a = _random_workload_result(42, example_config)
    b = _random_workload_result(42, example_config)
    assert a.outcomes == b.outcomes
    assert a.report == b.report
    assert a.final_battery_uj == b.final_battery_uj


def test_run_replications_contract(example_config, monkeypatch):
    seeds = [4, 5, 6]
    serial = run_replications(example_config, seeds, n_tasks=200)
    assert len(serial) == 3
    assert serial != [serial[0]] * 3  # disjoint seeds differ somewhere
    again = run_replications(example_config, seeds, n_tasks=200)
    assert serial == again
    monkeypatch.setenv("HE2C_SIM_THREADS", "4")
    threaded = run_replications(example_config, seeds, n_tasks=200)
    assert serial == threaded
    with pytest.raises(ValueError, match="nonempty"):
        run_replications(example_config, [])


def test_simulate_wrapper_returns_report(example_config):
    trace = generate_trace(example_config.workload.with_n_tasks(50), 9)
    report = simulate(trace, example_config.profiles, example_config.net,
                      example_config.edge.copy())
    assert report.n_tasks == 50
