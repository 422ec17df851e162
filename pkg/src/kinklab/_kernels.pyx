# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled tridiagonal and 2x2 block-tridiagonal elimination.

Both routines return 0 on success, or ``i + 1`` when the pivot of row ``i``
vanishes.  Inputs are not modified.
"""
from libc.stdlib cimport malloc, free


def thomas(const double[::1] sub, const double[::1] diag, const double[::1] sup,
           const double[::1] rhs, double[::1] out):
    cdef Py_ssize_t n = diag.shape[0]
    cdef Py_ssize_t i
    cdef double piv
    cdef double *cp = <double *> malloc(n * sizeof(double))
    if cp == NULL:
        raise MemoryError()
    try:
        piv = diag[0]
        if piv == 0.0:
            return 1
        cp[0] = sup[0] / piv if n > 1 else 0.0
        out[0] = rhs[0] / piv
        for i in range(1, n):
            piv = diag[i] - sub[i - 1] * cp[i - 1]
            if piv == 0.0:
                return i + 1
            if i < n - 1:
                cp[i] = sup[i] / piv
            out[i] = (rhs[i] - sub[i - 1] * out[i - 1]) / piv
        for i in range(n - 2, -1, -1):
            out[i] -= cp[i] * out[i + 1]
        return 0
    finally:
        free(cp)


def block_thomas2(const double[:, :, ::1] sub, const double[:, :, ::1] diag,
                  const double[:, :, ::1] sup, const double[:, ::1] rhs, double[:, ::1] out):
    """Solve with 2x2 blocks; ``sub[i]`` couples row ``i+1`` to ``i``."""
    cdef Py_ssize_t n = diag.shape[0]
    cdef Py_ssize_t i
    cdef double m00, m01, m10, m11, det, i00, i01, i10, i11
    cdef double r0, r1, a00, a01, a10, a11, c00, c01, c10, c11
    cdef double *cp = <double *> malloc(4 * n * sizeof(double))
    if cp == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            m00 = diag[i, 0, 0]
            m01 = diag[i, 0, 1]
            m10 = diag[i, 1, 0]
            m11 = diag[i, 1, 1]
            r0 = rhs[i, 0]
            r1 = rhs[i, 1]
            if i > 0:
                a00 = sub[i - 1, 0, 0]
                a01 = sub[i - 1, 0, 1]
                a10 = sub[i - 1, 1, 0]
                a11 = sub[i - 1, 1, 1]
                c00 = cp[4 * (i - 1)]
                c01 = cp[4 * (i - 1) + 1]
                c10 = cp[4 * (i - 1) + 2]
                c11 = cp[4 * (i - 1) + 3]
                m00 -= a00 * c00 + a01 * c10
                m01 -= a00 * c01 + a01 * c11
                m10 -= a10 * c00 + a11 * c10
                m11 -= a10 * c01 + a11 * c11
                r0 -= a00 * out[i - 1, 0] + a01 * out[i - 1, 1]
                r1 -= a10 * out[i - 1, 0] + a11 * out[i - 1, 1]
            det = m00 * m11 - m01 * m10
            if det == 0.0:
                return i + 1
            i00 = m11 / det
            i01 = -m01 / det
            i10 = -m10 / det
            i11 = m00 / det
            if i < n - 1:
                c00 = sup[i, 0, 0]
                c01 = sup[i, 0, 1]
                c10 = sup[i, 1, 0]
                c11 = sup[i, 1, 1]
                cp[4 * i] = i00 * c00 + i01 * c10
                cp[4 * i + 1] = i00 * c01 + i01 * c11
                cp[4 * i + 2] = i10 * c00 + i11 * c10
                cp[4 * i + 3] = i10 * c01 + i11 * c11
            out[i, 0] = i00 * r0 + i01 * r1
            out[i, 1] = i10 * r0 + i11 * r1
        for i in range(n - 2, -1, -1):
            r0 = out[i + 1, 0]
            r1 = out[i + 1, 1]
            out[i, 0] -= cp[4 * i] * r0 + cp[4 * i + 1] * r1
            out[i, 1] -= cp[4 * i + 2] * r0 + cp[4 * i + 3] * r1
        return 0
    finally:
        free(cp)
