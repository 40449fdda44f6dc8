"""Flat key-value experiment configuration.

The format is one dotted key per line (`edge.battery_j = 2000`), with `#`
comments; list values are whitespace- or comma-separated. Flat keys keep
experiment overrides diff-friendly: the CLI's repeatable
``--override key=value`` rewrites single entries before typing and
validation. Unknown or malformed keys fail naming the offending key.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .allocator import HandlerKind, HandlerWeights
from .feasibility import CheckerKind
from .model import AppProfile, EdgeState, NetworkModel, TaskType, validate_profile
from .workload import WorkloadSpec

DEFAULT_N_TASKS_GRID = (400, 800, 1200, 1600, 2000)

PROFILE_FIELDS = {
    "edge_exec_ms": int,
    "cloud_exec_ms": int,
    "model_load_ms": int,
    "model_size_mb": float,
    "edge_accuracy": float,
    "cloud_accuracy": float,
    "edge_energy_j": float,
    "upload_energy_j_per_kb": float,
    "receive_energy_j": float,
}


class ConfigError(ValueError):
    pass


def example_config_path() -> Path:
    """The example configuration shipped with the package."""
    return Path(__file__).parent / "data" / "example.cfg"


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    """Raw key -> value map; duplicate keys and junk lines are errors."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"{source}:{lineno}: empty key")
        if key in raw:
            raise ConfigError(f"{source}:{lineno}: duplicate key '{key}'")
        raw[key] = value
    return raw


_BOOL_VALUES = {"true": True, "yes": True, "on": True, "1": True,
                "false": False, "no": False, "off": False, "0": False}


class _TypedReader:
    """Pulls typed values out of the raw map, tracking consumed keys."""

    def __init__(self, raw: dict[str, str]):
        self.raw = dict(raw)
        self.consumed: set[str] = set()

    def _get(self, key: str, default):
        if key not in self.raw:
            if default is _REQUIRED:
                raise ConfigError(f"missing required config key '{key}'")
            return None, default
        self.consumed.add(key)
        return self.raw[key], None

    def string(self, key: str, default=None) -> str:
        value, fallback = self._get(key, default)
        return value if value is not None else fallback

    def integer(self, key: str, default=None) -> int:
        value, fallback = self._get(key, default)
        if value is None:
            return fallback
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"config key '{key}': expected integer, got '{value}'") from None

    def number(self, key: str, default=None) -> float:
        value, fallback = self._get(key, default)
        if value is None:
            return fallback
        try:
            return float(value)
        except ValueError:
            raise ConfigError(f"config key '{key}': expected number, got '{value}'") from None

    def boolean(self, key: str, default=None) -> bool:
        value, fallback = self._get(key, default)
        if value is None:
            return fallback
        try:
            return _BOOL_VALUES[value.lower()]
        except KeyError:
            raise ConfigError(f"config key '{key}': expected boolean, got '{value}'") from None

    def integers(self, key: str, default=None) -> tuple[int, ...]:
        value, fallback = self._get(key, default)
        if value is None:
            return fallback
        try:
            return tuple(int(part) for part in value.replace(",", " ").split())
        except ValueError:
            raise ConfigError(f"config key '{key}': expected integers, got '{value}'") from None

    def numbers(self, key: str, default=None) -> tuple[float, ...]:
        value, fallback = self._get(key, default)
        if value is None:
            return fallback
        try:
            return tuple(float(part) for part in value.replace(",", " ").split())
        except ValueError:
            raise ConfigError(f"config key '{key}': expected numbers, got '{value}'") from None

    def apps(self, key: str, default=None) -> tuple[TaskType, ...]:
        value, fallback = self._get(key, default)
        if value is None:
            return fallback
        try:
            return tuple(TaskType.from_name(name)
                         for name in value.replace(",", " ").split())
        except ValueError as exc:
            raise ConfigError(f"config key '{key}': {exc}") from None

    def unknown_keys(self) -> list[str]:
        return sorted(set(self.raw) - self.consumed)


_REQUIRED = object()


@dataclass
class SimConfig:
    """Everything one simulation or experiment needs."""

    edge: EdgeState
    net: NetworkModel
    profiles: dict[TaskType, AppProfile]
    checker: CheckerKind
    handler: HandlerKind
    weights: HandlerWeights
    rescue_enabled: bool
    workload: WorkloadSpec
    n_tasks_grid: tuple[int, ...]


def _enum_value(reader: _TypedReader, key: str, enum_cls, default=_REQUIRED):
    raw = reader.string(key, default)
    if isinstance(raw, enum_cls):
        return raw
    try:
        return enum_cls(raw)
    except ValueError:
        options = ", ".join(e.value for e in enum_cls)
        raise ConfigError(f"config key '{key}': expected one of {options}, got '{raw}'") from None


def _read_profiles(reader: _TypedReader) -> dict[TaskType, AppProfile]:
    profiles = {}
    for app in TaskType:
        prefix = f"profile.{app.value}"
        kwargs = {}
        for field_name, field_type in PROFILE_FIELDS.items():
            key = f"{prefix}.{field_name}"
            if field_type is int:
                kwargs[field_name] = reader.integer(key, _REQUIRED)
            else:
                kwargs[field_name] = reader.number(key, _REQUIRED)
        allow_inversion = reader.boolean(f"{prefix}.allow_accuracy_inversion", False)
        profile = AppProfile(app=app, **kwargs)
        violations = validate_profile(profile, allow_accuracy_inversion=allow_inversion)
        if violations:
            raise ConfigError(f"invalid profile '{prefix}': " + "; ".join(violations))
        profiles[app] = profile
    return profiles


def build_config(raw: dict[str, str]) -> SimConfig:
    reader = _TypedReader(raw)
    profiles = _read_profiles(reader)

    resident = reader.apps("edge.resident_models", ())
    try:
        edge = EdgeState(
            battery_j=reader.number("edge.battery_j", _REQUIRED),
            memory_capacity_mb=reader.number("edge.memory_capacity_mb", _REQUIRED),
            resident_models={app: profiles[app].model_size_mb for app in resident},
        )
        net = NetworkModel(
            uplink_kbps=reader.number("net.uplink_kbps", _REQUIRED),
            downlink_kbps=reader.number("net.downlink_kbps", _REQUIRED),
            rtt_ms=reader.integer("net.rtt_ms", _REQUIRED),
            result_size_kb=reader.number("net.result_size_kb", _REQUIRED),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None

    checker = _enum_value(reader, "checker.kind", CheckerKind, CheckerKind.MULTI_FACTOR)
    handler = _enum_value(reader, "handler.kind", HandlerKind, _REQUIRED)
    weights = HandlerWeights(
        w0=reader.number("handler.w0", 0.0),
        w_energy=reader.number("handler.w_energy", 1.0),
        w_accuracy=reader.number("handler.w_accuracy", 1.0),
        w_sensitive=reader.number("handler.w_sensitive", 0.5),
    )
    rescue_enabled = reader.boolean("rescue.enabled", _REQUIRED)

    mix_weights = reader.numbers("workload.app_mix", _REQUIRED)
    if len(mix_weights) != len(TaskType):
        raise ConfigError(
            f"config key 'workload.app_mix': expected {len(TaskType)} weights "
            f"(one per app in declaration order), got {len(mix_weights)}")
    deadline_range = reader.integers("workload.deadline_range_ms", _REQUIRED)
    input_range = reader.integers("workload.input_kb_range", _REQUIRED)
    for key, bounds in (("workload.deadline_range_ms", deadline_range),
                        ("workload.input_kb_range", input_range)):
        if len(bounds) != 2:
            raise ConfigError(f"config key '{key}': expected two values (lo hi)")
    try:
        workload = WorkloadSpec(
            n_tasks=reader.integer("workload.n_tasks", _REQUIRED),
            horizon_ms=reader.integer("workload.horizon_ms", _REQUIRED),
            app_mix=dict(zip(TaskType, mix_weights)),
            deadline_range_ms=(deadline_range[0], deadline_range[1]),
            input_kb_range=(input_range[0], input_range[1]),
            arrival_process=reader.string("workload.arrival_process", "uniform"),
        )
    except ValueError as exc:
        raise ConfigError(f"workload: {exc}") from None

    grid = reader.integers("experiment.n_tasks_grid", DEFAULT_N_TASKS_GRID)
    if not grid or any(n <= 0 for n in grid):
        raise ConfigError("config key 'experiment.n_tasks_grid': expected positive integers")

    unknown = reader.unknown_keys()
    if unknown:
        raise ConfigError(f"unknown config key '{unknown[0]}'")

    return SimConfig(edge=edge, net=net, profiles=profiles, checker=checker,
                     handler=handler, weights=weights, rescue_enabled=rescue_enabled,
                     workload=workload, n_tasks_grid=grid)


def apply_overrides(raw: dict[str, str], overrides: Sequence[str]) -> dict[str, str]:
    updated = dict(raw)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override '{item}' must be key=value")
        key, value = (part.strip() for part in item.split("=", 1))
        if not key:
            raise ConfigError(f"override '{item}' has an empty key")
        updated[key] = value
    return updated


def load_config(path, overrides: Sequence[str] = ()) -> SimConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config '{path}': {exc.strerror}") from None
    raw = parse_config_text(text, source=str(path))
    return build_config(apply_overrides(raw, overrides))


def format_config(config: SimConfig) -> str:
    """Render a SimConfig back to config text (parse round-trips)."""
    lines = [
        f"edge.battery_j = {config.edge.battery_j!r}",
        f"edge.memory_capacity_mb = {config.edge.memory_capacity_mb!r}",
    ]
    if config.edge.resident_models:
        names = " ".join(app.value for app in config.edge.resident_models)
        lines.append(f"edge.resident_models = {names}")
    lines += [
        f"net.uplink_kbps = {config.net.uplink_kbps!r}",
        f"net.downlink_kbps = {config.net.downlink_kbps!r}",
        f"net.rtt_ms = {config.net.rtt_ms}",
        f"net.result_size_kb = {config.net.result_size_kb!r}",
        f"checker.kind = {config.checker.value}",
        f"handler.kind = {config.handler.value}",
        f"handler.w0 = {config.weights.w0!r}",
        f"handler.w_energy = {config.weights.w_energy!r}",
        f"handler.w_accuracy = {config.weights.w_accuracy!r}",
        f"handler.w_sensitive = {config.weights.w_sensitive!r}",
        f"rescue.enabled = {'true' if config.rescue_enabled else 'false'}",
        f"workload.n_tasks = {config.workload.n_tasks}",
        f"workload.horizon_ms = {config.workload.horizon_ms}",
        "workload.app_mix = " + " ".join(
            repr(config.workload.app_mix.get(app, 0.0)) for app in TaskType),
        "workload.deadline_range_ms = {} {}".format(*config.workload.deadline_range_ms),
        "workload.input_kb_range = {} {}".format(*config.workload.input_kb_range),
        f"workload.arrival_process = {config.workload.arrival_process}",
        "experiment.n_tasks_grid = " + " ".join(str(n) for n in config.n_tasks_grid),
    ]
    for app in TaskType:
        profile = config.profiles[app]
        for field_name, field_type in PROFILE_FIELDS.items():
            value = getattr(profile, field_name)
            rendered = str(value) if field_type is int else repr(value)
            lines.append(f"profile.{app.value}.{field_name} = {rendered}")
        if profile.edge_accuracy > profile.cloud_accuracy:
            lines.append(f"profile.{app.value}.allow_accuracy_inversion = true")
    return "\n".join(lines) + "\n"
