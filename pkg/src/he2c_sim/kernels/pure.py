"""Pure-Python admission kernels (fallback backend).

Mirror of the compiled backend in ``_core.pyx``. Every arithmetic
expression here matches the compiled one operation for operation, so the
two backends produce bit-identical results; the cross-backend tests assert
that. Keep the two files in lockstep when changing either.

Reason codes: 0 ok, 1 deadline miss, 2 insufficient energy,
3 insufficient memory. Target codes: 0 edge, 1 cloud, 2 drop.
Handler codes: 0 energy-accuracy, 1 latency, 2 energy, 3 accuracy.
"""

from __future__ import annotations

import math

BACKEND = "python"


def to_microjoules(joules):
    return math.floor(joules * 1e6 + 0.5)


def upload_cost_uj(upload_j_per_kb, input_kb):
    return math.floor(upload_j_per_kb * input_kb * 1e6 + 0.5)


def cloud_latency_ms(input_kb, uplink_kbps, cloud_exec_ms, result_size_kb, downlink_kbps, rtt_ms):
    # end-to-end: upload + remote inference + result download + round trip
    up = math.ceil(input_kb / uplink_kbps * 1000.0)
    down = math.ceil(result_size_kb / downlink_kbps * 1000.0)
    return up + cloud_exec_ms + down + rtt_ms


def cloud_check(deadline_ms, latency_ms, battery_uj, transfer_uj, latency_only):
    # deadline guard first, then the transfer-energy guard (E >= eps_t passes)
    if deadline_ms < latency_ms:
        return 1
    if latency_only:
        return 0
    if battery_uj >= transfer_uj:
        return 0
    return 2


def edge_completion_ms(now_ms, busy_until_ms, model_resident, model_load_ms, edge_exec_ms):
    wait = busy_until_ms - now_ms
    if wait < 0:
        wait = 0
    cold = 0 if model_resident else model_load_ms
    return wait + cold + edge_exec_ms


def edge_check(deadline_ms, completion_ms, battery_uj, edge_cost_uj, free_mb, model_size_mb, latency_only):
    # completion >= deadline misses; both resource guards are strict (>);
    # energy is reported before memory when both fail
    if completion_ms >= deadline_ms:
        return 1
    if latency_only:
        return 0
    if not battery_uj > edge_cost_uj:
        return 2
    if not free_mb > model_size_mb:
        return 3
    return 0


def cloud_preferred(cloud_cost_uj, edge_cost_uj):
    # inclusive: an energy tie goes to the cloud
    return cloud_cost_uj <= edge_cost_uj


def tradeoff_score(w0, w_energy, w_accuracy, w_sensitive, edge_cost_uj, cloud_cost_uj,
                   edge_accuracy, cloud_accuracy, accuracy_sensitive, floor_uj, accuracy_scale):
    denom = edge_cost_uj if edge_cost_uj > cloud_cost_uj else cloud_cost_uj
    if denom < floor_uj:
        denom = floor_uj
    s = w0 + w_energy * ((edge_cost_uj - cloud_cost_uj) / denom) \
        + w_accuracy * ((cloud_accuracy - edge_accuracy) / accuracy_scale)
    if accuracy_sensitive:
        s = s + w_sensitive
    return s


def rescue_check(deadline_ms, warm_completion_ms, battery_uj, edge_cost_uj, model_resident):
    # strict deadline (delta > c), inclusive energy (eps <= E), warm only
    return deadline_ms > warm_completion_ms and edge_cost_uj <= battery_uj and model_resident


def admission_verdict(deadline_ms, input_kb,
                      edge_exec_ms, model_load_ms, model_size_mb,
                      edge_cost_uj, upload_j_per_kb, receive_uj, cloud_exec_ms,
                      uplink_kbps, downlink_kbps, rtt_ms, result_size_kb,
                      battery_uj, busy_until_ms, now_ms, model_resident, free_mb,
                      latency_only, rescue_enabled,
                      handler_code, w0, w_energy, w_accuracy, w_sensitive,
                      accuracy_sensitive, edge_accuracy, cloud_accuracy,
                      floor_uj, accuracy_scale):
    """Full per-task admission: both checks, the decision ladder, rescue.

    Returns (target_code, via_rescue, cloud_reason, cloud_latency_ms,
    cloud_cost_uj, edge_reason, edge_completion_ms, warm_completion_ms).
    """
    latency = cloud_latency_ms(input_kb, uplink_kbps, cloud_exec_ms,
                               result_size_kb, downlink_kbps, rtt_ms)
    cloud_cost = upload_cost_uj(upload_j_per_kb, input_kb) + receive_uj
    cloud_reason = cloud_check(deadline_ms, latency, battery_uj, cloud_cost, latency_only)
    completion = edge_completion_ms(now_ms, busy_until_ms, model_resident,
                                    model_load_ms, edge_exec_ms)
    edge_reason = edge_check(deadline_ms, completion, battery_uj, edge_cost_uj,
                             free_mb, model_size_mb, latency_only)
    warm_completion = edge_completion_ms(now_ms, busy_until_ms, True,
                                         model_load_ms, edge_exec_ms)
    via_rescue = False
    if cloud_reason == 0 and edge_reason == 0:
        if cloud_preferred(cloud_cost, edge_cost_uj):
            target = 1
        elif handler_code == 0:
            s = tradeoff_score(w0, w_energy, w_accuracy, w_sensitive,
                               edge_cost_uj, cloud_cost, edge_accuracy,
                               cloud_accuracy, accuracy_sensitive,
                               floor_uj, accuracy_scale)
            target = 1 if s > 0.0 else 0
        elif handler_code == 1:
            target = 1 if latency < completion else 0
        elif handler_code == 2:
            target = 1 if cloud_cost < edge_cost_uj else 0
        else:
            target = 1 if cloud_accuracy > edge_accuracy else 0
    elif cloud_reason == 0:
        target = 1
    elif edge_reason == 0:
        target = 0
    else:
        via_rescue = rescue_enabled
        if rescue_enabled and rescue_check(deadline_ms, warm_completion,
                                           battery_uj, edge_cost_uj, model_resident):
            target = 0
        else:
            target = 2
    return (target, via_rescue, cloud_reason, latency, cloud_cost,
            edge_reason, completion, warm_completion)
