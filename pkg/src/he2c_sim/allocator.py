"""Task placement when both environments are feasible.

`decide` implements the two-stage ladder: cloud wins outright when its
edge-side energy cost is no higher than local execution; otherwise one of
four trade-off handlers arbitrates. Ties resolve to the edge everywhere
(it avoids the network round trip, and the cloud-cheaper case was already
taken by the first stage).

The energy-accuracy handler scores a task with a linear model over a
normalized energy delta, a normalized accuracy delta, and an
accuracy-sensitivity flag; positive score sends the task to the cloud.
`fit_weights` recovers such weights from labeled examples by ordinary
least squares.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .model import AppProfile, FeasibilityEstimate, Target, TaskType, to_microjoules

# Normalization constants for the energy-accuracy score. The energy floor
# guards the division when both costs are near zero; the accuracy scale maps
# typical cloud-vs-edge accuracy gaps (a few percent) onto order one.
ENERGY_FLOOR_J = 1e-3
ENERGY_FLOOR_UJ = to_microjoules(ENERGY_FLOOR_J)
ACCURACY_SCALE = 0.1


class HandlerKind(Enum):
    ENERGY_ACCURACY = "energy_accuracy"
    LATENCY_BASED = "latency"
    ENERGY_BASED = "energy"
    ACCURACY_BASED = "accuracy"


HANDLER_CODES = {
    HandlerKind.ENERGY_ACCURACY: 0,
    HandlerKind.LATENCY_BASED: 1,
    HandlerKind.ENERGY_BASED: 2,
    HandlerKind.ACCURACY_BASED: 3,
}


@dataclass(frozen=True)
class HandlerWeights:
    """Linear weights of the energy-accuracy handler."""

    w0: float = 0.0
    w_energy: float = 1.0
    w_accuracy: float = 1.0
    w_sensitive: float = 0.5


DEFAULT_WEIGHTS = HandlerWeights()


@dataclass(frozen=True)
class TradeoffInputs:
    """Per-task quantities the trade-off handlers compare.

    ``cloud_energy_j`` is the edge-side battery cost of the cloud round
    trip (upload + receive), not the cloud's own consumption.
    """

    task_type: TaskType
    edge_energy_j: float
    cloud_energy_j: float
    edge_accuracy: float
    cloud_accuracy: float
    edge_latency_ms: int
    cloud_latency_ms: int

    @classmethod
    def from_estimates(cls, app: TaskType, profile: AppProfile,
                       cloud_check: FeasibilityEstimate,
                       edge_check: FeasibilityEstimate) -> "TradeoffInputs":
        return cls(
            task_type=app,
            edge_energy_j=edge_check.energy_cost_j,
            cloud_energy_j=cloud_check.energy_cost_j,
            edge_accuracy=profile.edge_accuracy,
            cloud_accuracy=profile.cloud_accuracy,
            edge_latency_ms=edge_check.expected_latency_ms,
            cloud_latency_ms=cloud_check.expected_latency_ms,
        )


def tradeoff_score(inputs: TradeoffInputs, weights: HandlerWeights) -> float:
    """Signed score of the energy-accuracy handler (> 0 means cloud)."""
    return kernels.active().tradeoff_score(
        weights.w0, weights.w_energy, weights.w_accuracy, weights.w_sensitive,
        to_microjoules(inputs.edge_energy_j), to_microjoules(inputs.cloud_energy_j),
        inputs.edge_accuracy, inputs.cloud_accuracy,
        inputs.task_type.accuracy_sensitive,
        ENERGY_FLOOR_UJ, ACCURACY_SCALE,
    )


def handler_energy_accuracy(inputs: TradeoffInputs,
                            weights: HandlerWeights = DEFAULT_WEIGHTS) -> Target:
    return Target.CLOUD if tradeoff_score(inputs, weights) > 0.0 else Target.EDGE


def handler_latency_based(inputs: TradeoffInputs) -> Target:
    return Target.CLOUD if inputs.cloud_latency_ms < inputs.edge_latency_ms else Target.EDGE


def handler_energy_based(inputs: TradeoffInputs) -> Target:
    # Under `decide` this is only reached when the cloud is strictly more
    # expensive, so in-system it always picks the edge; it stays
    # independently callable.
    cloud_uj = to_microjoules(inputs.cloud_energy_j)
    edge_uj = to_microjoules(inputs.edge_energy_j)
    return Target.CLOUD if cloud_uj < edge_uj else Target.EDGE


def handler_accuracy_based(inputs: TradeoffInputs) -> Target:
    return Target.CLOUD if inputs.cloud_accuracy > inputs.edge_accuracy else Target.EDGE


def decide(inputs: TradeoffInputs,
           handler: HandlerKind = HandlerKind.ENERGY_ACCURACY,
           weights: HandlerWeights = DEFAULT_WEIGHTS) -> Target:
    """Pick Edge or Cloud for a task both checks found feasible."""
    if kernels.active().cloud_preferred(to_microjoules(inputs.cloud_energy_j),
                                        to_microjoules(inputs.edge_energy_j)):
        return Target.CLOUD
    if handler is HandlerKind.ENERGY_ACCURACY:
        return handler_energy_accuracy(inputs, weights)
    if handler is HandlerKind.LATENCY_BASED:
        return handler_latency_based(inputs)
    if handler is HandlerKind.ENERGY_BASED:
        return handler_energy_based(inputs)
    return handler_accuracy_based(inputs)


def _features(inputs: TradeoffInputs) -> tuple[float, float, float, float]:
    # Same normalization as the scoring kernel.
    edge_uj = to_microjoules(inputs.edge_energy_j)
    cloud_uj = to_microjoules(inputs.cloud_energy_j)
    denom = max(edge_uj, cloud_uj, ENERGY_FLOOR_UJ)
    return (
        1.0,
        (edge_uj - cloud_uj) / denom,
        (inputs.cloud_accuracy - inputs.edge_accuracy) / ACCURACY_SCALE,
        1.0 if inputs.task_type.accuracy_sensitive else 0.0,
    )


def fit_weights(samples: list[tuple[TradeoffInputs, Target]]) -> HandlerWeights:
    """Least-squares fit of handler weights from (inputs, Edge|Cloud) pairs.

    Labels are encoded Cloud=+1, Edge=-1. Feature columns that carry no
    signal are fine (the minimum-norm solution is returned), but a training
    set that maps identical feature vectors to conflicting labels cannot be
    fit and raises ValueError.
    """
    if len(samples) < 4:
        raise ValueError("need at least 4 training samples")
    rows = [(_features(inputs), label) for inputs, label in samples]
    first_label: dict[tuple, Target] = {}
    for features, label in rows:
        if first_label.setdefault(features, label) is not label:
            raise ValueError("degenerate training set")
    design = np.array([features for features, _ in rows], dtype=float)
    labels = np.array([1.0 if label is Target.CLOUD else -1.0 for _, label in rows])
    solution, _, _, _ = np.linalg.lstsq(design, labels, rcond=None)
    w0, w_energy, w_accuracy, w_sensitive = (float(v) for v in solution)
    return HandlerWeights(w0=w0, w_energy=w_energy, w_accuracy=w_accuracy,
                          w_sensitive=w_sensitive)
