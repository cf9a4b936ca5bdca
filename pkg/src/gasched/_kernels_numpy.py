"""Pure-numpy schedule-evaluation kernel.

Same contract as the compiled kernel: rows are independent, each is decoded
in one height-ordered pass. Here the pass runs slot by slot but vectorized
across all rows of the slice, with predecessors padded to a rectangle so the
finish-time gather is a single fancy index per slot.
"""

import numpy as np

NAME = "numpy"


def _padded_preds(pred_ptr, pred_flat):
    n = len(pred_ptr) - 1
    widths = pred_ptr[1:] - pred_ptr[:-1]
    maxp = int(widths.max()) if n else 0
    mat = np.full((n, maxp), -1, dtype=np.int64)
    for t in range(n):
        lo, hi = pred_ptr[t], pred_ptr[t + 1]
        mat[t, : hi - lo] = pred_flat[lo:hi]
    return mat


def evaluate_slice(seq, proc, lo, hi, times, pred_ptr, pred_flat, n_procs, out):
    """Makespan of chromosome rows lo..hi-1, written to out[lo:hi]."""
    sq = seq[lo:hi]
    pr = proc[lo:hi]
    rows_n, n = sq.shape
    pmat = _padded_preds(pred_ptr, pred_flat)
    maxp = pmat.shape[1]
    finish = np.zeros((rows_n, n), dtype=np.int64)
    avail = np.zeros((rows_n, n_procs), dtype=np.int64)
    rows = np.arange(rows_n)
    for s in range(n):
        t = sq[:, s]
        p = pr[:, s]
        start = avail[rows, p]
        if maxp:
            preds = pmat[t]  # (rows, maxp), -1 padded
            pf = finish[rows[:, None], np.maximum(preds, 0)]
            pf = np.where(preds >= 0, pf, 0)
            start = np.maximum(start, pf.max(axis=1))
        done = start + times[t]
        finish[rows, t] = done
        avail[rows, p] = done
    out[lo:hi] = avail.max(axis=1)


def warmup():
    pass
