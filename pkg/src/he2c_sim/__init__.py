"""Deterministic edge-cloud allocation simulator and policy library.

Feasibility checking for cloud and edge execution, an energy-accuracy
trade-off allocator with pluggable handlers, a warm-start rescue path for
otherwise-dropped tasks, and a discrete-event engine plus experiment
harness that compares the policies under reproducible seeded workloads.
"""

from .allocator import (
    DEFAULT_WEIGHTS,
    HandlerKind,
    HandlerWeights,
    TradeoffInputs,
    decide,
    fit_weights,
    handler_accuracy_based,
    handler_energy_accuracy,
    handler_energy_based,
    handler_latency_based,
)
from .config import ConfigError, SimConfig, example_config_path, load_config
from .engine import (
    Event,
    EventKind,
    SimResult,
    Simulation,
    SimulationError,
    TaskOutcome,
    run_replications,
    run_simulation,
    simulate,
)
from .feasibility import (
    CheckerKind,
    cloud_feasible,
    edge_feasible,
    estimate_cloud_latency,
    estimate_edge_completion,
    latency_only_feasible,
)
from .metrics import GroupMetrics, RunReport, aggregate, compare
from .model import (
    AppProfile,
    Decision,
    EdgeState,
    FeasibilityEstimate,
    NetworkModel,
    Reason,
    Target,
    Task,
    TaskType,
    to_joules,
    to_microjoules,
    validate_profile,
)
from .rescue import rescue
from .workload import TraceError, WorkloadSpec, generate_trace, load_trace, save_trace

__version__ = "0.1.0"

__all__ = [
    "AppProfile", "CheckerKind", "ConfigError", "Decision", "DEFAULT_WEIGHTS",
    "EdgeState", "Event", "EventKind", "FeasibilityEstimate", "GroupMetrics",
    "HandlerKind", "HandlerWeights", "NetworkModel", "Reason", "RunReport",
    "SimConfig", "SimResult", "Simulation", "SimulationError", "Target", "Task",
    "TaskOutcome", "TaskType", "TradeoffInputs", "TraceError", "WorkloadSpec",
    "aggregate", "cloud_feasible", "compare", "decide", "edge_feasible",
    "estimate_cloud_latency", "estimate_edge_completion", "example_config_path",
    "fit_weights", "generate_trace", "handler_accuracy_based",
    "handler_energy_accuracy", "handler_energy_based", "handler_latency_based",
    "latency_only_feasible", "load_config", "load_trace", "rescue",
    "run_replications", "run_simulation", "save_trace", "simulate",
    "to_joules", "to_microjoules", "validate_profile",
]
