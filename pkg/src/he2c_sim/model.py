"""Domain types for the edge-cloud allocation simulator.

Unit conventions, used everywhere in this package:

* time is integer milliseconds;
* energy is joules at the API surface but is quantized to integer
  microjoules (``to_microjoules``) before any comparison or debit, so
  battery accounting is exact and runs are reproducible bit-for-bit;
* memory is megabytes (float).

Deadlines are relative to task arrival, which makes traces shift-invariant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

UJ_PER_J = 10**6


def to_microjoules(joules: float) -> int:
    """Quantize a joule value to integer microjoules, rounding half up."""
    return math.floor(joules * 1e6 + 0.5)


def to_joules(microjoules: int) -> float:
    return microjoules / 1e6


class TaskType(Enum):
    """The four supported inference applications."""

    FACE_RECOGNITION = "face_recognition"
    TEXT_DETECTION = "text_detection"
    TEXT_RECOGNITION = "text_recognition"
    IMAGE_DETECTION = "image_detection"

    @property
    def accuracy_sensitive(self) -> bool:
        # Recognition tasks lose the most from the smaller on-device models;
        # detection tasks tolerate them.
        return self in (TaskType.FACE_RECOGNITION, TaskType.TEXT_RECOGNITION)

    @classmethod
    def from_name(cls, name: str) -> "TaskType":
        try:
            return cls(name)
        except ValueError:
            known = ", ".join(t.value for t in cls)
            raise ValueError(f"unknown app '{name}' (known apps: {known})") from None


class Reason(Enum):
    """Why a feasibility check passed or failed."""

    OK = "ok"
    DEADLINE_MISS = "deadline_miss"
    INSUFFICIENT_ENERGY = "insufficient_energy"
    INSUFFICIENT_MEMORY = "insufficient_memory"


class Target(Enum):
    """Where a task ends up."""

    EDGE = "edge"
    CLOUD = "cloud"
    DROP = "drop"


@dataclass(frozen=True)
class Task:
    """One inference request.

    ``deadline_ms`` is relative to ``arrival_ms``; ``input_kb`` is the size
    of the payload that would be uploaded for cloud execution.
    """

    id: int
    app: TaskType
    arrival_ms: int
    deadline_ms: int
    input_kb: float

    def __post_init__(self) -> None:
        if self.id < 0:
            raise ValueError(f"task id must be >= 0, got {self.id}")
        if self.arrival_ms < 0:
            raise ValueError(f"task {self.id}: arrival_ms must be >= 0")
        if self.deadline_ms <= 0:
            raise ValueError(f"task {self.id}: deadline_ms must be > 0")
        if self.input_kb <= 0:
            raise ValueError(f"task {self.id}: input_kb must be > 0")

    @property
    def absolute_deadline_ms(self) -> int:
        return self.arrival_ms + self.deadline_ms


@dataclass(frozen=True)
class AppProfile:
    """Per-application estimates used by the checkers and the allocator.

    ``edge_exec_ms`` assumes the model is already resident (warm);
    ``model_load_ms`` is the extra cold-start penalty when it is not.
    Upload energy scales linearly with the task's input size.
    """

    app: TaskType
    edge_exec_ms: int
    cloud_exec_ms: int
    model_load_ms: int
    model_size_mb: float
    edge_accuracy: float
    cloud_accuracy: float
    edge_energy_j: float
    upload_energy_j_per_kb: float
    receive_energy_j: float

    def cloud_energy_j(self, input_kb: float) -> float:
        """Edge-side battery cost of a cloud round trip (radio only)."""
        return to_joules(self.cloud_energy_uj(input_kb))

    def cloud_energy_uj(self, input_kb: float) -> int:
        upload = to_microjoules(self.upload_energy_j_per_kb * input_kb)
        return upload + to_microjoules(self.receive_energy_j)


_NONNEGATIVE_FIELDS = (
    "edge_exec_ms",
    "cloud_exec_ms",
    "model_load_ms",
    "model_size_mb",
    "edge_energy_j",
    "upload_energy_j_per_kb",
    "receive_energy_j",
)


def validate_profile(profile: AppProfile, allow_accuracy_inversion: bool = False) -> list[str]:
    """Return every violated profile invariant (empty list means valid).

    Total function: never raises. The cloud>=edge accuracy ordering can be
    waived with ``allow_accuracy_inversion`` for deliberately inverted
    profiles.
    """
    violations = []
    for name in _NONNEGATIVE_FIELDS:
        if getattr(profile, name) < 0:
            violations.append(f"{name} negative")
    for name in ("edge_accuracy", "cloud_accuracy"):
        value = getattr(profile, name)
        if not 0.0 <= value <= 1.0:
            violations.append(f"{name} out of [0,1]")
    if not allow_accuracy_inversion and profile.edge_accuracy > profile.cloud_accuracy:
        violations.append("edge exceeds cloud accuracy")
    return violations


@dataclass(frozen=True)
class NetworkModel:
    """Deterministic link model between the edge device and the cloud."""

    uplink_kbps: float
    downlink_kbps: float
    rtt_ms: int
    result_size_kb: float

    def __post_init__(self) -> None:
        for name in ("uplink_kbps", "downlink_kbps", "rtt_ms", "result_size_kb"):
            if getattr(self, name) <= 0:
                raise ValueError(f"network {name} must be > 0")


@dataclass
class EdgeState:
    """Mutable state of the single-executor edge device.

    ``resident_models`` maps each cached model to its size in MB and is
    ordered least- to most-recently used. ``running_model`` names the model
    pinned by an in-flight execution; it is only meaningful while
    ``busy_until`` lies in the future.
    """

    battery_j: float
    memory_capacity_mb: float
    resident_models: dict[TaskType, float] = field(default_factory=dict)
    busy_until: int = 0
    running_model: TaskType | None = None

    def __post_init__(self) -> None:
        if self.battery_j < 0:
            raise ValueError("battery_j must be >= 0")
        if self.memory_capacity_mb < 0:
            raise ValueError("memory_capacity_mb must be >= 0")
        if self.busy_until < 0:
            raise ValueError("busy_until must be >= 0")
        if self.resident_total_mb() > self.memory_capacity_mb:
            raise ValueError("resident models exceed memory capacity")

    def resident_total_mb(self) -> float:
        return sum(self.resident_models.values())

    def pinned_mb(self, now: int) -> float:
        """Size of the model held by the currently executing task, if any."""
        if self.running_model is None or self.busy_until <= now:
            return 0.0
        return self.resident_models.get(self.running_model, 0.0)

    def free_for_load_mb(self, now: int) -> float:
        """Memory available to a new model after evicting every unpinned one."""
        return self.memory_capacity_mb - self.pinned_mb(now)

    def copy(self) -> "EdgeState":
        return EdgeState(
            battery_j=self.battery_j,
            memory_capacity_mb=self.memory_capacity_mb,
            resident_models=dict(self.resident_models),
            busy_until=self.busy_until,
            running_model=self.running_model,
        )


@dataclass(frozen=True)
class FeasibilityEstimate:
    """Outcome of one feasibility check, with its cost estimates.

    The estimate fields are always populated, even when infeasible, so the
    latency-only baseline checker can still account for true costs.
    ``memory_needed_mb`` is zero for the cloud path.
    """

    feasible: bool
    expected_latency_ms: int
    energy_cost_j: float
    memory_needed_mb: float
    reason: Reason

    def __post_init__(self) -> None:
        if self.feasible != (self.reason is Reason.OK):
            raise ValueError("feasible must hold exactly when reason is OK")


@dataclass(frozen=True)
class Decision:
    """Allocation outcome for one task, with the reason chain.

    ``via_rescue`` marks decisions made by the rescue module: a salvaged
    Edge dispatch or a rescue-declined Drop. A Drop with ``via_rescue``
    False means rescue was disabled.
    """

    target: Target
    via_rescue: bool
    cloud_check: FeasibilityEstimate
    edge_check: FeasibilityEstimate

    def __post_init__(self) -> None:
        if self.via_rescue and self.target is Target.CLOUD:
            raise ValueError("rescue can only send a task to edge or drop it")
        if self.target is Target.DROP and (self.cloud_check.feasible or self.edge_check.feasible):
            raise ValueError("drop requires both checks infeasible")
