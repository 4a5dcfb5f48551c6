# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the ragged sparse-row hot loops.

Dense matrix products and pairwise distances go through BLAS either way,
so only the per-row index walks live here; everything has a numpy
fallback in ``_fallback`` with identical signatures.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def retained_counts(const cnp.int64_t[::1] indices, const cnp.int64_t[::1] indptr,
                    const cnp.uint8_t[::1] member):
    """Per-row count of column indices with member[j] == 1."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    out = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] o = out
    cdef Py_ssize_t i, p
    cdef cnp.int64_t acc
    for i in range(n):
        acc = 0
        for p in range(indptr[i], indptr[i + 1]):
            acc += member[indices[p]]
        o[i] = acc
    return out


def pairwise_intersections(const cnp.int64_t[::1] indices, const cnp.int64_t[::1] indptr):
    """|support_i & support_j| for all row pairs i < j, condensed order.

    Row index lists must be strictly increasing.
    """
    cdef Py_ssize_t n = indptr.shape[0] - 1
    out = np.zeros(n * (n - 1) // 2, dtype=np.int64)
    cdef cnp.int64_t[::1] o = out
    cdef Py_ssize_t i, j, m = 0
    cdef cnp.int64_t a, b, ea, eb, acc
    for i in range(n):
        for j in range(i + 1, n):
            a = indptr[i]
            ea = indptr[i + 1]
            b = indptr[j]
            eb = indptr[j + 1]
            acc = 0
            while a < ea and b < eb:
                if indices[a] == indices[b]:
                    acc += 1
                    a += 1
                    b += 1
                elif indices[a] < indices[b]:
                    a += 1
                else:
                    b += 1
            o[m] = acc
            m += 1
    return out


def subset_select_binary(const cnp.int64_t[::1] indices, const cnp.int64_t[::1] indptr,
                         const cnp.int64_t[::1] position, Py_ssize_t k):
    """Dense n x k 0/1 matrix keeping the columns mapped by ``position``.

    ``position[j]`` is the output column for ambient column j, or -1 when
    j is not in the retained subset.
    """
    cdef Py_ssize_t n = indptr.shape[0] - 1
    out = np.zeros((n, k), dtype=np.float64)
    cdef cnp.float64_t[:, ::1] o = out
    cdef Py_ssize_t i, p
    cdef cnp.int64_t pos
    for i in range(n):
        for p in range(indptr[i], indptr[i + 1]):
            pos = position[indices[p]]
            if pos >= 0:
                o[i, pos] = 1.0
    return out


def expand_two_valued(const cnp.int64_t[::1] indices, const cnp.int64_t[::1] indptr,
                      const cnp.float64_t[::1] on_values, const cnp.float64_t[::1] off_values,
                      Py_ssize_t d):
    """Dense n x d matrix with row i equal to off_values[i] everywhere
    except on_values[i] at the row's support columns."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    out = np.empty((n, d), dtype=np.float64)
    cdef cnp.float64_t[:, ::1] o = out
    cdef Py_ssize_t i, t, p
    cdef cnp.float64_t off
    for i in range(n):
        off = off_values[i]
        for t in range(d):
            o[i, t] = off
        for p in range(indptr[i], indptr[i + 1]):
            o[i, indices[p]] = on_values[i]
    return out
