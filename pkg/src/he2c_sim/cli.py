"""Command-line harness: run, experiment, gen-trace, validate-config.

Exit codes: 0 success, 2 configuration errors (including unknown keys and
unknown experiment names), 3 trace errors. All file outputs land under the
directory given with --out.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ConfigError, example_config_path, load_config
from .engine import SimulationError, run_simulation
from .experiments import EXPERIMENT_NAMES, run_experiment, write_experiment_outputs
from .metrics import ReportRow, report_to_dict, write_rows_csv
from .workload import TraceError, generate_trace, load_trace, save_trace


def parse_seeds(spec: str) -> list[int]:
    """Seed list syntax: comma-separated integers or lo-hi ranges ("0-9,20")."""
    seeds: list[int] = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:  # allow a leading minus sign
            lo_text, hi_text = part.rsplit("-", 1)
            lo, hi = int(lo_text), int(hi_text)
            if hi < lo:
                raise ValueError(f"bad seed range '{part}'")
            seeds.extend(range(lo, hi + 1))
        else:
            seeds.append(int(part))
    if not seeds:
        raise ValueError(f"no seeds in '{spec}'")
    return seeds


def _add_config_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None,
                        help="config file (default: the shipped example config)")
    parser.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config key; repeatable")


def _load(args, extra_overrides=()) -> tuple:
    path = Path(args.config) if args.config else example_config_path()
    overrides = list(args.override) + list(extra_overrides)
    return path, load_config(path, overrides)


def _cmd_run(args) -> int:
    extra = []
    if args.rescue is not None:
        extra.append(f"rescue.enabled={args.rescue}")
    config_path, config = _load(args, extra)
    if args.trace:
        trace = load_trace(args.trace)
    else:
        trace = generate_trace(config.workload, args.seed)
    result = run_simulation(config, args.seed, trace=trace)
    report = result.report

    print(f"config: {config_path}")
    print(f"seed: {args.seed}  checker: {config.checker.value}  "
          f"handler: {config.handler.value}  "
          f"rescue: {'on' if config.rescue_enabled else 'off'}")
    rate = report.completion_rate * 100.0
    print(f"tasks: {report.n_tasks}  on-time: {report.completed_on_time} ({rate:.1f}%)  "
          f"missed: {report.missed}  dropped: {report.dropped}")
    accuracy = f"{report.mean_accuracy:.4f}" if report.mean_accuracy is not None else "n/a"
    latency = f"{report.mean_latency_ms:.1f} ms" if report.mean_latency_ms is not None else "n/a"
    print(f"energy: {report.total_energy_j:.6f} J  battery left: "
          f"{result.final_battery_j:.6f} J")
    print(f"mean accuracy: {accuracy}  mean latency: {latency}")
    for app, block in report.per_app.items():
        print(f"  {app.value:<18} on-time {block.completed_on_time}/{block.n_tasks}  "
              f"dropped {block.dropped}  missed {block.missed}")

    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        row = ReportRow.from_report("run", config.checker.value, report.n_tasks,
                                    args.seed, report)
        write_rows_csv(out_dir / "run.csv", [row])
        payload = {
            "settings": {
                "config": str(config_path),
                "seed": args.seed,
                "checker": config.checker.value,
                "handler": config.handler.value,
                "rescue_enabled": config.rescue_enabled,
                "trace": str(args.trace) if args.trace else "generated",
            },
            "report": report_to_dict(report),
            "final_battery_j": result.final_battery_j,
        }
        (out_dir / "run.json").write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n")
        print(f"wrote {out_dir / 'run.csv'} and {out_dir / 'run.json'}")
    return 0


def _cmd_experiment(args) -> int:
    _, config = _load(args)
    seeds = parse_seeds(args.seeds)
    result = run_experiment(args.name, config, seeds)
    written = write_experiment_outputs(result, args.out, svg=not args.no_svg)
    if result.name in ("feasibility", "rescue"):
        for point in result.summary["points"]:
            print(f"n_tasks={point['n_tasks']:>6}  gap={point['completion_gap_pp']:+.2f} pp")
    else:
        for handler, stats in result.summary["handlers"].items():
            accuracy = stats["mean_accuracy"]
            print(f"{handler:<16} completion={stats['mean_completion_rate']:.4f}  "
                  f"energy={stats['mean_total_energy_j']:.2f} J  "
                  f"accuracy={accuracy if accuracy is None else round(accuracy, 4)}  ")
    for path in written:
        print(f"wrote {path}")
    return 0


def _cmd_gen_trace(args) -> int:
    _, config = _load(args)
    trace = generate_trace(config.workload, args.seed)
    out = Path(args.out)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True, exist_ok=True)
    save_trace(trace, out)
    print(f"wrote {len(trace)} tasks to {out}")
    return 0


def _cmd_validate_config(args) -> int:
    config_path, config = _load(args)
    print(f"ok: {config_path} ({len(config.profiles)} app profiles, "
          f"checker={config.checker.value}, handler={config.handler.value})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="he2c-sim",
        description="Deterministic edge-cloud task allocation simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="simulate one seed and print a summary")
    _add_config_args(run_p)
    run_p.add_argument("--trace", default=None, help="task trace file (JSON lines)")
    run_p.add_argument("--seed", type=int, default=0)
    run_p.add_argument("--out", default=None, help="directory for run.csv / run.json")
    run_p.add_argument("--rescue", choices=("on", "off"), default=None,
                       help="shorthand for --override rescue.enabled=...")
    run_p.set_defaults(func=_cmd_run)

    exp_p = sub.add_parser("experiment", help="run one of the ablation experiments")
    exp_p.add_argument("name", choices=EXPERIMENT_NAMES)
    _add_config_args(exp_p)
    exp_p.add_argument("--seeds", default="0-9", help="e.g. '0-9' or '1,2,5' (default 0-9)")
    exp_p.add_argument("--out", required=True, help="output directory")
    exp_p.add_argument("--no-svg", action="store_true", help="skip the SVG chart")
    exp_p.set_defaults(func=_cmd_experiment)

    gen_p = sub.add_parser("gen-trace", help="generate a workload trace file")
    _add_config_args(gen_p)
    gen_p.add_argument("--seed", type=int, default=0)
    gen_p.add_argument("--out", required=True, help="trace file to write")
    gen_p.set_defaults(func=_cmd_gen_trace)

    val_p = sub.add_parser("validate-config", help="parse and validate a config file")
    _add_config_args(val_p)
    val_p.set_defaults(func=_cmd_validate_config)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (TraceError, SimulationError) as exc:
        print(f"trace error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
