"""Pure numpy fallback for the batched recursion.

Loops over time with vectorized row updates. Per element, the accumulation
order matches the compiled kernel exactly, so the two backends produce
bit-identical output.
"""

from __future__ import annotations

import numpy as np

_CHECK_STRIDE = 256


def recursion(y: np.ndarray, eps: np.ndarray,
              ar: np.ndarray, ma: np.ndarray,
              sar: np.ndarray, sma: np.ndarray,
              season: int, start: int, clip: float) -> int:
    n = y.shape[1]
    for t in range(start, n):
        acc = eps[:, t].copy()
        for i in range(len(ar)):
            acc += ar[i] * y[:, t - 1 - i]
        for j in range(len(sar)):
            acc += sar[j] * y[:, t - (j + 1) * season]
        for i in range(len(ma)):
            acc += ma[i] * eps[:, t - 1 - i]
        for j in range(len(sma)):
            acc += sma[j] * eps[:, t - (j + 1) * season]
        y[:, t] = acc
        # Early abort so runaway recursions do not overflow for thousands of
        # steps before the final sweep notices.
        if t % _CHECK_STRIDE == 0:
            block = y[:, max(start, t - _CHECK_STRIDE) : t + 1]
            if not np.isfinite(block).all() or np.abs(block).max() > clip:
                return 1
    tail = y[:, start:n]
    if tail.size and (not np.isfinite(tail).all() or np.abs(tail).max() > clip):
        return 1
    return 0
