# cython: language_level=3, boundscheck=False, cdivision=False
"""Compiled admission kernels (hot path of the simulation loop).

Mirror of ``pure.py``; the arithmetic must stay operation-for-operation
identical so both backends are bit-for-bit interchangeable. Compiled with
-ffp-contract=off so doubles behave exactly like CPython floats.
"""

from libc.math cimport ceil, floor

BACKEND = "compiled"


cpdef long long to_microjoules(double joules):
    return <long long>floor(joules * 1e6 + 0.5)


cpdef long long upload_cost_uj(double upload_j_per_kb, double input_kb):
    return <long long>floor(upload_j_per_kb * input_kb * 1e6 + 0.5)


cpdef long long cloud_latency_ms(double input_kb, double uplink_kbps, long long cloud_exec_ms,
                                 double result_size_kb, double downlink_kbps, long long rtt_ms):
    cdef double up = ceil(input_kb / uplink_kbps * 1000.0)
    cdef double down = ceil(result_size_kb / downlink_kbps * 1000.0)
    return <long long>up + cloud_exec_ms + <long long>down + rtt_ms


cpdef int cloud_check(long long deadline_ms, long long latency_ms, long long battery_uj,
                      long long transfer_uj, bint latency_only):
    if deadline_ms < latency_ms:
        return 1
    if latency_only:
        return 0
    if battery_uj >= transfer_uj:
        return 0
    return 2


cpdef long long edge_completion_ms(long long now_ms, long long busy_until_ms, bint model_resident,
                                   long long model_load_ms, long long edge_exec_ms):
    cdef long long wait = busy_until_ms - now_ms
    if wait < 0:
        wait = 0
    cdef long long cold = 0 if model_resident else model_load_ms
    return wait + cold + edge_exec_ms


cpdef int edge_check(long long deadline_ms, long long completion_ms, long long battery_uj,
                     long long edge_cost_uj, double free_mb, double model_size_mb,
                     bint latency_only):
    if completion_ms >= deadline_ms:
        return 1
    if latency_only:
        return 0
    if not battery_uj > edge_cost_uj:
        return 2
    if not free_mb > model_size_mb:
        return 3
    return 0


cpdef bint cloud_preferred(long long cloud_cost_uj, long long edge_cost_uj):
    return cloud_cost_uj <= edge_cost_uj


cpdef double tradeoff_score(double w0, double w_energy, double w_accuracy, double w_sensitive,
                            long long edge_cost_uj, long long cloud_cost_uj,
                            double edge_accuracy, double cloud_accuracy,
                            bint accuracy_sensitive, long long floor_uj, double accuracy_scale):
    cdef long long denom = edge_cost_uj if edge_cost_uj > cloud_cost_uj else cloud_cost_uj
    if denom < floor_uj:
        denom = floor_uj
    cdef double s = w0 + w_energy * (<double>(edge_cost_uj - cloud_cost_uj) / <double>denom) \
        + w_accuracy * ((cloud_accuracy - edge_accuracy) / accuracy_scale)
    if accuracy_sensitive:
        s = s + w_sensitive
    return s


cpdef bint rescue_check(long long deadline_ms, long long warm_completion_ms, long long battery_uj,
                        long long edge_cost_uj, bint model_resident):
    return deadline_ms > warm_completion_ms and edge_cost_uj <= battery_uj and model_resident


cpdef tuple admission_verdict(long long deadline_ms, double input_kb,
                              long long edge_exec_ms, long long model_load_ms, double model_size_mb,
                              long long edge_cost_uj, double upload_j_per_kb, long long receive_uj,
                              long long cloud_exec_ms,
                              double uplink_kbps, double downlink_kbps, long long rtt_ms,
                              double result_size_kb,
                              long long battery_uj, long long busy_until_ms, long long now_ms,
                              bint model_resident, double free_mb,
                              bint latency_only, bint rescue_enabled,
                              int handler_code, double w0, double w_energy, double w_accuracy,
                              double w_sensitive,
                              bint accuracy_sensitive, double edge_accuracy, double cloud_accuracy,
                              long long floor_uj, double accuracy_scale):
    cdef long long latency = cloud_latency_ms(input_kb, uplink_kbps, cloud_exec_ms,
                                              result_size_kb, downlink_kbps, rtt_ms)
    cdef long long cloud_cost = upload_cost_uj(upload_j_per_kb, input_kb) + receive_uj
    cdef int cloud_reason = cloud_check(deadline_ms, latency, battery_uj, cloud_cost, latency_only)
    cdef long long completion = edge_completion_ms(now_ms, busy_until_ms, model_resident,
                                                   model_load_ms, edge_exec_ms)
    cdef int edge_reason = edge_check(deadline_ms, completion, battery_uj, edge_cost_uj,
                                      free_mb, model_size_mb, latency_only)
    cdef long long warm_completion = edge_completion_ms(now_ms, busy_until_ms, True,
                                                        model_load_ms, edge_exec_ms)
    cdef bint via_rescue = False
    cdef int target
    cdef double s
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
