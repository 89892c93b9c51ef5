# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loop: the batched time-domain recursion.

The recursion is sequential in t and cannot be vectorized across time, so it
dominates generation cost in pure Python. Accumulation order per element is
fixed (innovation, AR, seasonal AR, MA, seasonal MA) and the module is built
with FP contraction disabled, so output is bit-identical to the numpy
fallback and to a scalar per-trajectory loop.
"""

from libc.math cimport fabs, isfinite


def recursion(double[:, ::1] y, double[:, ::1] eps,
              double[::1] ar, double[::1] ma,
              double[::1] sar, double[::1] sma,
              Py_ssize_t season, Py_ssize_t start, double clip):
    """Fill y[:, start:] in place; returns 0, or 1 on divergence."""
    cdef Py_ssize_t nrows = y.shape[0]
    cdef Py_ssize_t n = y.shape[1]
    cdef Py_ssize_t p = ar.shape[0]
    cdef Py_ssize_t q = ma.shape[0]
    cdef Py_ssize_t sp = sar.shape[0]
    cdef Py_ssize_t sq = sma.shape[0]
    cdef Py_ssize_t b, t, i, j
    cdef double acc
    cdef int diverged = 0
    with nogil:
        for b in range(nrows):
            if diverged:
                break
            for t in range(start, n):
                acc = eps[b, t]
                for i in range(p):
                    acc = acc + ar[i] * y[b, t - 1 - i]
                for j in range(sp):
                    acc = acc + sar[j] * y[b, t - (j + 1) * season]
                for i in range(q):
                    acc = acc + ma[i] * eps[b, t - 1 - i]
                for j in range(sq):
                    acc = acc + sma[j] * eps[b, t - (j + 1) * season]
                if not isfinite(acc) or fabs(acc) > clip:
                    diverged = 1
                    break
                y[b, t] = acc
    return diverged
