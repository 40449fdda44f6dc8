import json

import pytest

from he2c_sim.cli import main, parse_seeds
from he2c_sim.metrics import read_rows_csv
from he2c_sim.workload import load_trace


def test_parse_seeds_spellings():
    assert parse_seeds("0-3") == [0, 1, 2, 3]
    assert parse_seeds("7") == [7]
    assert parse_seeds("1,4,7") == [1, 4, 7]
    assert parse_seeds("0-2,9") == [0, 1, 2, 9]
    with pytest.raises(ValueError):
        parse_seeds("5-2")


def test_run_is_byte_deterministic(tmp_path, capsys):
    args = ["run", "--seed", "7", "--override", "workload.n_tasks=150"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    capsys.readouterr()
    assert (tmp_path / "a" / "run.csv").read_bytes() == (tmp_path / "b" / "run.csv").read_bytes()
    a_json = json.loads((tmp_path / "a" / "run.json").read_text())
    b_json = json.loads((tmp_path / "b" / "run.json").read_text())
    assert a_json == b_json
    rows = read_rows_csv(tmp_path / "a" / "run.csv")  # run output re-parses too
    assert len(rows) == 1 and rows[0].series == "run" and rows[0].n_tasks == 150


def test_run_prints_summary(capsys):
    assert main(["run", "--seed", "1", "--override", "workload.n_tasks=100"]) == 0
    out = capsys.readouterr().out
    assert "tasks: 100" in out
    assert "on-time:" in out
    assert "energy:" in out


def test_missing_config_exits_2(tmp_path, capsys):
    assert main(["run", "--config", str(tmp_path / "nope.cfg")]) == 2
    assert "config error" in capsys.readouterr().err


def test_bad_config_key_exits_2(tmp_path, capsys):
    assert main(["run", "--override", "edge.warp=1"]) == 2
    err = capsys.readouterr().err
    assert "edge.warp" in err


def test_bad_trace_exits_3(tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    bad.write_text("{broken\n")
    assert main(["run", "--trace", str(bad)]) == 3
    assert "trace error" in capsys.readouterr().err


def test_rescue_flag_flips_config(tmp_path, capsys):
    for mode in ("on", "off"):
        out_dir = tmp_path / mode
        assert main(["run", "--rescue", mode, "--out", str(out_dir),
                     "--override", "workload.n_tasks=50"]) == 0
    capsys.readouterr()
    on = json.loads((tmp_path / "on" / "run.json").read_text())
    off = json.loads((tmp_path / "off" / "run.json").read_text())
    assert on["settings"]["rescue_enabled"] is True
    assert off["settings"]["rescue_enabled"] is False


def test_gen_trace_and_run_from_it(tmp_path, capsys):
    trace_path = tmp_path / "trace.jsonl"
    assert main(["gen-trace", "--seed", "3", "--out", str(trace_path),
                 "--override", "workload.n_tasks=40"]) == 0
    tasks = load_trace(trace_path)
    assert len(tasks) == 40
    assert main(["run", "--trace", str(trace_path)]) == 0
    out = capsys.readouterr().out
    assert "tasks: 40" in out


def test_validate_config_ok(capsys):
    assert main(["validate-config"]) == 0
    assert capsys.readouterr().out.startswith("ok:")


def test_unknown_experiment_name_exits_2(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["experiment", "throughput", "--out", "x"])
    assert excinfo.value.code == 2


def test_experiment_outputs_land_in_out_dir_and_reparse(tmp_path, capsys):
    out_dir = tmp_path / "results"
    assert main([
        "experiment", "tradeoff", "--seeds", "0-1", "--out", str(out_dir),
        "--override", "workload.n_tasks=120",
    ]) == 0
    capsys.readouterr()
    rows = read_rows_csv(out_dir / "tradeoff.csv")
    assert len(rows) == 8  # 4 handlers x 2 seeds
    assert sorted({row.variant for row in rows}) == [
        "accuracy", "energy", "energy_accuracy", "latency"]
    summary = json.loads((out_dir / "tradeoff_summary.json").read_text())
    assert set(summary["handlers"]) == {"accuracy", "energy", "energy_accuracy", "latency"}
    outputs = {p.name for p in out_dir.iterdir()}
    assert outputs == {"tradeoff.csv", "tradeoff_summary.json"}


def test_sweep_experiment_writes_svg(tmp_path, capsys):
    out_dir = tmp_path / "sweep"
    assert main([
        "experiment", "rescue", "--seeds", "0", "--out", str(out_dir),
        "--override", "experiment.n_tasks_grid=100 200",
    ]) == 0
    capsys.readouterr()
    svg = (out_dir / "rescue.svg").read_text()
    assert svg.startswith("<svg") and "polyline" in svg
    rows = read_rows_csv(out_dir / "rescue.csv")
    assert {row.point for row in rows} == {100, 200}
    assert sorted({row.variant for row in rows}) == ["rescue_off", "rescue_on"]
