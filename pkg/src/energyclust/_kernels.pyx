# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled pairwise-sum kernels.

Both kernels walk the double sum row-major (j outer, k inner), accumulate
each row with Neumaier compensation and then fold the row totals in index
order, so the result does not depend on anything but the inputs.  The GIL is
released for the whole loop; callers may run several kernels concurrently.
"""
from libc.math cimport exp, fabs, sqrt


cdef inline void _add(double *s, double *c, double x) noexcept nogil:
    cdef double t = s[0] + x
    if fabs(s[0]) >= fabs(x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


def distance_sum(const double[:, ::1] a, const double[:, ::1] b):
    """Return sum_{j,k} |a_j - b_k| with Euclidean norm over rows."""
    cdef Py_ssize_t na = a.shape[0]
    cdef Py_ssize_t nb = b.shape[0]
    cdef Py_ssize_t p = a.shape[1]
    cdef Py_ssize_t j, k, m
    cdef double rs, rc, ts = 0.0, tc = 0.0, acc, diff, aj
    if b.shape[1] != p:
        raise ValueError("dimension mismatch")
    with nogil:
        if p == 1:
            for j in range(na):
                aj = a[j, 0]
                rs = 0.0
                rc = 0.0
                for k in range(nb):
                    _add(&rs, &rc, fabs(aj - b[k, 0]))
                _add(&ts, &tc, rs + rc)
        else:
            for j in range(na):
                rs = 0.0
                rc = 0.0
                for k in range(nb):
                    acc = 0.0
                    for m in range(p):
                        diff = a[j, m] - b[k, m]
                        acc = acc + diff * diff
                    _add(&rs, &rc, sqrt(acc))
                _add(&ts, &tc, rs + rc)
    return ts + tc


def gaussian_kernel_sum(const double[::1] a, const double[::1] b, double sigma):
    """Return sum_{j,k} exp(-sigma^2 (a_j - b_k)^2 / 2) for scalar samples."""
    cdef Py_ssize_t na = a.shape[0]
    cdef Py_ssize_t nb = b.shape[0]
    cdef Py_ssize_t j, k
    cdef double rs, rc, ts = 0.0, tc = 0.0, diff, aj
    cdef double half_s2 = 0.5 * sigma * sigma
    with nogil:
        for j in range(na):
            aj = a[j]
            rs = 0.0
            rc = 0.0
            for k in range(nb):
                diff = aj - b[k]
                _add(&rs, &rc, exp(-half_s2 * diff * diff))
            _add(&ts, &tc, rs + rc)
    return ts + tc
