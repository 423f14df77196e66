"""Pure-Python kernels. Reference semantics for ``_kernels.pyx``.

Both implementations evaluate the same expressions in the same order, so
their outputs agree bit for bit (the extension is built without fast-math
or FMA contraction).
"""
import numpy as np


def select_frequencies(work, budget, ts, freqs_hz, pfull, p_idle, u_full, slot_average):
    """Minimum-energy feasible frequency index per block.

    Returns ``(index, pt, energy, at_risk)`` arrays. Ties go to the lower
    frequency; a block with no feasible frequency gets the highest one and
    ``at_risk`` set.
    """
    freqs_hz = [float(f) for f in freqs_hz]
    pfull = [float(p) for p in pfull]
    nf = len(freqs_hz)
    out_idx, out_pt, out_e, out_risk = [], [], [], []
    for w in work:
        w = float(w)
        best = -1
        best_e = 0.0
        best_pt = 0.0
        for j in range(nf):
            pt = w / freqs_hz[j]
            if pt <= budget:
                if slot_average:
                    e = pt * (pfull[j] - p_idle) * u_full + max(pt, ts) * p_idle
                else:
                    e = pt * ((pfull[j] - p_idle) * u_full + p_idle)
                if best < 0 or e < best_e:
                    best, best_e, best_pt = j, e, pt
        risk = best < 0
        if risk:
            best = nf - 1
            best_pt = w / freqs_hz[best]
            if slot_average:
                best_e = best_pt * (pfull[best] - p_idle) * u_full + max(best_pt, ts) * p_idle
            else:
                best_e = best_pt * ((pfull[best] - p_idle) * u_full + p_idle)
        out_idx.append(best)
        out_pt.append(best_pt)
        out_e.append(best_e)
        out_risk.append(risk)
    return (
        np.array(out_idx, dtype=np.int64),
        np.array(out_pt, dtype=np.float64),
        np.array(out_e, dtype=np.float64),
        np.array(out_risk, dtype=bool),
    )


def run_timeline(cycles, freqs_hz, pfull, ts, deadline, p_idle, u_full, slot_average):
    """Sequential single-server execution over equal slots.

    Block i starts at ``max(previous end, slot start)``; overruns delay the
    successors. In slot-average mode idle power is charged once over the
    wall-clock horizon ``[0, max(deadline, finish)]``, split across blocks
    by how far each one extends that horizon.

    Returns ``(start, pt, end, overrun, energy)`` arrays.
    """
    n = len(cycles)
    starts, pts, ends, overruns, energies = [], [], [], [], []
    prev_end = 0.0
    horizon = 0.0
    for i in range(n):
        slot_start = i * ts
        slot_end = deadline if i == n - 1 else (i + 1) * ts
        start = prev_end if prev_end > slot_start else slot_start
        pt = float(cycles[i]) / float(freqs_hz[i])
        end = start + pt
        overrun = end - slot_end if end > slot_end else 0.0
        pf = float(pfull[i])
        if slot_average:
            reach = end if end > slot_end else slot_end
            idle_span = reach - horizon if reach > horizon else 0.0
            if reach > horizon:
                horizon = reach
            e = pt * (pf - p_idle) * u_full + idle_span * p_idle
        else:
            e = pt * ((pf - p_idle) * u_full + p_idle)
        starts.append(start)
        pts.append(pt)
        ends.append(end)
        overruns.append(overrun)
        energies.append(e)
        prev_end = end
    return tuple(np.array(a, dtype=np.float64) for a in (starts, pts, ends, overruns, energies))
