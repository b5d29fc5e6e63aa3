"""Vectorised golden-section search.

Acts row-wise on aligned numpy arrays so that many independent problems can
be pushed through a single search; scalar problems pass shape-(1,) arrays.
"""

from __future__ import annotations

import numpy as np

INVPHI = 0.6180339887498949  # (sqrt(5) - 1) / 2


def golden_min(f, lo, hi, iters=64):
    """Minimise convex f row-wise over [lo, hi] by golden-section search.

    f maps a (m,) point vector to a (m,) value vector.  Tracks the best
    probe ever seen, so monotone rows converge to the boundary value.
    Returns (x_best, f_best).
    """
    a = np.array(lo, dtype=float, copy=True)
    b = np.array(hi, dtype=float, copy=True)
    h = b - a
    c = b - INVPHI * h
    d = a + INVPHI * h
    fc = f(c)
    fd = f(d)
    best_x = np.where(fc <= fd, c, d)
    best_f = np.minimum(fc, fd)
    for _ in range(iters):
        left = fc <= fd
        a = np.where(left, a, c)
        b = np.where(left, d, b)
        h = b - a
        c = b - INVPHI * h
        d = a + INVPHI * h
        probe = np.where(left, c, d)
        fp = f(probe)
        # the other interior point is inherited from the previous iteration
        fc, fd = np.where(left, fp, fd), np.where(left, fc, fp)
        upd = fp < best_f
        best_x = np.where(upd, probe, best_x)
        best_f = np.where(upd, fp, best_f)
    mid = 0.5 * (a + b)
    fm = f(mid)
    upd = fm < best_f
    return np.where(upd, mid, best_x), np.where(upd, fm, best_f)
