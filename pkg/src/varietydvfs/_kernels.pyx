# cython: language_level=3
"""Compiled kernels; see ``_kernels_py`` for the reference semantics."""
import numpy as np

cimport numpy as cnp

cnp.import_array()


def select_frequencies(work, double budget, double ts, freqs_hz, pfull,
                       double p_idle, double u_full, bint slot_average):
    cdef double[::1] w = np.ascontiguousarray(work, dtype=np.float64)
    cdef double[::1] fz = np.ascontiguousarray(freqs_hz, dtype=np.float64)
    cdef double[::1] pf = np.ascontiguousarray(pfull, dtype=np.float64)
    cdef Py_ssize_t n = w.shape[0], nf = fz.shape[0], i, j, best
    cdef double pt, e, best_e, best_pt, span
    out_idx = np.empty(n, dtype=np.int64)
    out_pt = np.empty(n, dtype=np.float64)
    out_e = np.empty(n, dtype=np.float64)
    out_risk = np.empty(n, dtype=bool)
    cdef cnp.int64_t[::1] oi = out_idx
    cdef double[::1] op = out_pt
    cdef double[::1] oe = out_e
    cdef cnp.npy_bool[::1] orisk = out_risk.view(np.uint8)
    for i in range(n):
        best = -1
        best_e = 0.0
        best_pt = 0.0
        for j in range(nf):
            pt = w[i] / fz[j]
            if pt <= budget:
                span = pt if pt > ts else ts
                if slot_average:
                    e = pt * (pf[j] - p_idle) * u_full + span * p_idle
                else:
                    e = pt * ((pf[j] - p_idle) * u_full + p_idle)
                if best < 0 or e < best_e:
                    best = j
                    best_e = e
                    best_pt = pt
        if best < 0:
            best = nf - 1
            best_pt = w[i] / fz[best]
            span = best_pt if best_pt > ts else ts
            if slot_average:
                best_e = best_pt * (pf[best] - p_idle) * u_full + span * p_idle
            else:
                best_e = best_pt * ((pf[best] - p_idle) * u_full + p_idle)
            orisk[i] = 1
        else:
            orisk[i] = 0
        oi[i] = best
        op[i] = best_pt
        oe[i] = best_e
    return out_idx, out_pt, out_e, out_risk


def run_timeline(cycles, freqs_hz, pfull, double ts, double deadline,
                 double p_idle, double u_full, bint slot_average):
    cdef double[::1] c = np.ascontiguousarray(cycles, dtype=np.float64)
    cdef double[::1] fz = np.ascontiguousarray(freqs_hz, dtype=np.float64)
    cdef double[::1] pf = np.ascontiguousarray(pfull, dtype=np.float64)
    cdef Py_ssize_t n = c.shape[0], i
    cdef double prev_end = 0.0, horizon = 0.0
    cdef double slot_start, slot_end, start, pt, end, reach, idle_span
    starts = np.empty(n, dtype=np.float64)
    pts = np.empty(n, dtype=np.float64)
    ends = np.empty(n, dtype=np.float64)
    overruns = np.empty(n, dtype=np.float64)
    energies = np.empty(n, dtype=np.float64)
    cdef double[::1] os_ = starts
    cdef double[::1] op = pts
    cdef double[::1] oe = ends
    cdef double[::1] oo = overruns
    cdef double[::1] oen = energies
    for i in range(n):
        slot_start = i * ts
        slot_end = deadline if i == n - 1 else (i + 1) * ts
        start = prev_end if prev_end > slot_start else slot_start
        pt = c[i] / fz[i]
        end = start + pt
        oo[i] = end - slot_end if end > slot_end else 0.0
        if slot_average:
            reach = end if end > slot_end else slot_end
            idle_span = reach - horizon if reach > horizon else 0.0
            if reach > horizon:
                horizon = reach
            oen[i] = pt * (pf[i] - p_idle) * u_full + idle_span * p_idle
        else:
            oen[i] = pt * ((pf[i] - p_idle) * u_full + p_idle)
        os_[i] = start
        op[i] = pt
        oe[i] = end
        prev_end = end
    return starts, pts, ends, overruns, energies
