"""Cross-backend agreement: the compiled and pure kernels must be
bit-for-bit interchangeable."""

import random

import pytest

from he2c_sim import kernels

needs_both = pytest.mark.skipif(
    len(kernels.available_backends()) < 2,
    reason="compiled kernel backend not built",
)


def test_backend_selection_api():
    assert kernels.backend_name() in ("python", "compiled")
    assert "python" in kernels.available_backends()
    with pytest.raises(ValueError, match="unknown kernel backend"):
        kernels.get_backend("fortran")


def _random_verdict_args(rng):
    return dict(
        deadline_ms=rng.randint(1, 900),
        input_kb=rng.choice([20.0, 77.5, 160.0, 1000.0]),
        edge_exec_ms=rng.randint(0, 120),
        model_load_ms=rng.randint(0, 700),
        model_size_mb=rng.choice([100.0, 340.0, 700.0]),
        edge_cost_uj=rng.randint(0, 3_000_000),
        upload_j_per_kb=rng.choice([0.0, 0.004, 0.02]),
        receive_uj=rng.choice([0, 50_000, 500_000]),
        cloud_exec_ms=rng.randint(0, 60),
        uplink_kbps=rng.choice([500.0, 2500.0]),
        downlink_kbps=rng.choice([1000.0, 8000.0]),
        rtt_ms=rng.randint(0, 200),
        result_size_kb=rng.choice([1.0, 4.0]),
        battery_uj=rng.randint(0, 5_000_000),
        busy_until_ms=rng.randint(0, 500),
        now_ms=rng.randint(0, 400),
        model_resident=rng.random() < 0.5,
        free_mb=rng.choice([0.0, 300.0, 640.0, 1024.0]),
        latency_only=rng.random() < 0.5,
        rescue_enabled=rng.random() < 0.5,
        handler_code=rng.randint(0, 3),
        w0=rng.uniform(-1, 1),
        w_energy=rng.uniform(-2, 2),
        w_accuracy=rng.uniform(-2, 2),
        w_sensitive=rng.uniform(-1, 1),
        accuracy_sensitive=rng.random() < 0.5,
        edge_accuracy=rng.uniform(0, 1),
        cloud_accuracy=rng.uniform(0, 1),
        floor_uj=1000,
        accuracy_scale=0.1,
    )


@needs_both
def test_admission_verdicts_identical_across_backends():
    pure = kernels.get_backend("python")
    compiled = kernels.get_backend("compiled")
    rng = random.Random(17)
    for _ in range(5000):
        args = _random_verdict_args(rng)
        assert pure.admission_verdict(**args) == compiled.admission_verdict(**args)


def test_admission_verdict_matches_public_decide(backend):
    # the combined kernel repeats the allocation ladder; it must agree with
    # the public decide() composition whenever both checks pass
    import random as random_module

    from he2c_sim.allocator import HANDLER_CODES, HandlerKind, HandlerWeights, TradeoffInputs, decide
    from he2c_sim.model import Target, TaskType

    rng = random_module.Random(31)
    impl = kernels.active()
    for _ in range(2000):
        app = rng.choice(list(TaskType))
        kind = rng.choice(list(HandlerKind))
        weights = HandlerWeights(rng.uniform(-1, 1), rng.uniform(-2, 2),
                                 rng.uniform(-2, 2), rng.uniform(-1, 1))
        edge_cost_uj = rng.randint(0, 3_000_000)
        edge_acc, cloud_acc = rng.uniform(0, 1), rng.uniform(0, 1)
        verdict = impl.admission_verdict(
            10**6, rng.choice([20.0, 80.0, 160.0]),
            rng.randint(1, 80), rng.randint(0, 300), 100.0,
            edge_cost_uj, rng.choice([0.0, 0.004, 0.02]),
            rng.choice([0, 50_000]), rng.randint(0, 60),
            2500.0, 8000.0, rng.randint(0, 200), 4.0,
            10**12, rng.randint(0, 50), 0, rng.random() < 0.5, 10**6,
            False, False,
            HANDLER_CODES[kind], weights.w0, weights.w_energy,
            weights.w_accuracy, weights.w_sensitive,
            app.accuracy_sensitive, edge_acc, cloud_acc,
            1000, 0.1)
        target_code, _, cloud_reason, latency, cloud_cost, edge_reason, completion, _ = verdict
        assert cloud_reason == 0 and edge_reason == 0
        inputs = TradeoffInputs(app, edge_cost_uj / 1e6, cloud_cost / 1e6,
                                edge_acc, cloud_acc, completion, latency)
        expected = decide(inputs, kind, weights)
        assert target_code == (1 if expected is Target.CLOUD else 0)


@needs_both
def test_primitive_kernels_identical_across_backends():
    pure = kernels.get_backend("python")
    compiled = kernels.get_backend("compiled")
    rng = random.Random(19)
    for _ in range(3000):
        joules = rng.uniform(0, 4000)
        assert pure.to_microjoules(joules) == compiled.to_microjoules(joules)
        kb = rng.uniform(1, 2000)
        per_kb = rng.choice([0.0, 0.004, 0.02, 0.3])
        assert pure.upload_cost_uj(per_kb, kb) == compiled.upload_cost_uj(per_kb, kb)
        up = rng.choice([500.0, 2500.0, 1e9])
        down = rng.choice([1000.0, 8000.0])
        assert (pure.cloud_latency_ms(kb, up, 15, 4.0, down, 40)
                == compiled.cloud_latency_ms(kb, up, 15, 4.0, down, 40))
        score_args = (rng.uniform(-1, 1), rng.uniform(-2, 2), rng.uniform(-2, 2),
                      rng.uniform(-1, 1), rng.randint(0, 4_000_000),
                      rng.randint(0, 4_000_000), rng.uniform(0, 1), rng.uniform(0, 1),
                      rng.random() < 0.5, 1000, 0.1)
        assert pure.tradeoff_score(*score_args) == compiled.tradeoff_score(*score_args)
