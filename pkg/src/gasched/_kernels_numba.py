"""Compiled schedule-evaluation kernel.

nogil lets several evaluator threads run slices of the same population
concurrently; cache=True keeps the compile cost to the first process.
"""

import numpy as np
from numba import njit

NAME = "numba"


@njit(cache=True, nogil=True)
def evaluate_slice(seq, proc, lo, hi, times, pred_ptr, pred_flat, n_procs, out):
    """Makespan of chromosome rows lo..hi-1, written to out[lo:hi].

    seq rows are height sorted, so every predecessor's finish time is
    already in ``finish`` when a task is placed; one left-to-right pass per
    row suffices. A task starts at the later of its processor's previous
    finish and its predecessors' finishes.
    """
    n = seq.shape[1]
    finish = np.empty(n, dtype=np.int64)
    avail = np.empty(n_procs, dtype=np.int64)
    for r in range(lo, hi):
        avail[:] = 0
        makespan = 0
        for s in range(n):
            t = seq[r, s]
            p = proc[r, s]
            start = avail[p]
            for e in range(pred_ptr[t], pred_ptr[t + 1]):
                pf = finish[pred_flat[e]]
                if pf > start:
                    start = pf
            done = start + times[t]
            finish[t] = done
            avail[p] = done
            if done > makespan:
                makespan = done
        out[r] = makespan


def warmup():
    """Force compilation outside any timed section."""
    seq = np.array([[0, 1]], dtype=np.int64)
    proc = np.array([[0, 0]], dtype=np.int64)
    times = np.array([1, 1], dtype=np.int64)
    pred_ptr = np.array([0, 0, 1], dtype=np.int64)
    pred_flat = np.array([0], dtype=np.int64)
    out = np.empty(1, dtype=np.int64)
    evaluate_slice(seq, proc, 0, 1, times, pred_ptr, pred_flat, 1, out)
