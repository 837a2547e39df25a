# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: Haar coefficient rows and ragged pairwise distances."""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()


def haar_row(double[::1] padded, Py_ssize_t pad, Py_ssize_t out_len, Py_ssize_t scale):
    """Inner products of a unit-energy Haar kernel with the padded signal.

    Position u places the kernel's left edge at sample u of the original
    frame, i.e. at index pad + u of the padded signal.
    """
    cdef Py_ssize_t half = scale // 2
    cdef double amp = 1.0 / sqrt(<double> scale)
    out = np.empty(out_len, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t u, i, base
    cdef double pos, neg
    for u in range(out_len):
        base = pad + u
        pos = 0.0
        neg = 0.0
        for i in range(half):
            pos += padded[base + i]
        for i in range(half, scale):
            neg += padded[base + i]
        o[u] = (pos - neg) * amp
    return out


def pairwise_ragged(
    double[::1] flat_a,
    cnp.int64_t[::1] off_a,
    double[::1] flat_b,
    cnp.int64_t[::1] off_b,
    int metric,
):
    """Zero-padded cityblock (0) or Euclidean (1) distances, pair by pair.

    Tail padding contributes |x - 0| terms, so only max(len_a, len_b)
    positions are ever touched.
    """
    cdef Py_ssize_t na = off_a.shape[0] - 1
    cdef Py_ssize_t nb = off_b.shape[0] - 1
    out = np.empty((na, nb), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j, t, sa, ea, sb, eb, la, lb, m
    cdef double acc, d
    for i in range(na):
        sa = off_a[i]
        ea = off_a[i + 1]
        la = ea - sa
        for j in range(nb):
            sb = off_b[j]
            eb = off_b[j + 1]
            lb = eb - sb
            m = la if la < lb else lb
            acc = 0.0
            if metric == 0:
                for t in range(m):
                    acc += fabs(flat_a[sa + t] - flat_b[sb + t])
                for t in range(m, la):
                    acc += fabs(flat_a[sa + t])
                for t in range(m, lb):
                    acc += fabs(flat_b[sb + t])
                o[i, j] = acc
            else:
                for t in range(m):
                    d = flat_a[sa + t] - flat_b[sb + t]
                    acc += d * d
                for t in range(m, la):
                    d = flat_a[sa + t]
                    acc += d * d
                for t in range(m, lb):
                    d = flat_b[sb + t]
                    acc += d * d
                o[i, j] = sqrt(acc)
    return out
