# cython: language_level=3
"""Compiled hot loops: atom merging, multinomial spectrum atoms, multiset search.

Each routine mirrors ``_core_py`` operation for operation so that both
backends round identically.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()


def merge_sorted_atoms(const double[::1] values, const double[::1] probs, double tol):
    """Merge ascending atoms whose values lie within ``tol`` of the group anchor."""
    cdef Py_ssize_t n = values.shape[0]
    out_v = np.empty(n, dtype=np.float64)
    out_p = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out_v
    cdef double[::1] op = out_p
    cdef Py_ssize_t i, m = 0
    cdef double anchor
    if n == 0:
        return out_v, out_p
    anchor = values[0]
    ov[0] = anchor
    op[0] = probs[0]
    for i in range(1, n):
        if values[i] - anchor <= tol:
            op[m] += probs[i]
        else:
            m += 1
            anchor = values[i]
            ov[m] = anchor
            op[m] = probs[i]
    return out_v[:m + 1].copy(), out_p[:m + 1].copy()


def multinomial_atoms(const double[::1] values, const double[::1] logp,
                      const double[::1] lgfact, Py_ssize_t n, Py_ssize_t count):
    """Sum value and log-probability for every composition of ``n`` into ``k`` parts.

    Compositions are visited with the first count descending from ``n``,
    then the second, and so on; the last part takes the remainder.
    ``lgfact[c]`` must hold ``log(c!)`` for ``c = 0..n``.
    """
    cdef Py_ssize_t k = values.shape[0]
    sums = np.empty(count, dtype=np.float64)
    logprobs = np.empty(count, dtype=np.float64)
    cdef double[::1] s = sums
    cdef double[::1] lp = logprobs
    cdef cnp.ndarray[cnp.int64_t, ndim=1] cnt_arr = np.zeros(k, dtype=np.int64)
    cdef cnp.int64_t[::1] c = cnt_arr
    cdef Py_ssize_t idx = 0, i, j, rem
    cdef double acc_s, acc_l

    if k == 0:
        raise ValueError("need at least one atom")
    # first composition: everything in part 0
    c[0] = n
    while True:
        acc_s = 0.0
        acc_l = lgfact[n]
        for i in range(k):
            acc_s += c[i] * values[i]
            acc_l += c[i] * logp[i] - lgfact[c[i]]
        s[idx] = acc_s
        lp[idx] = acc_l
        idx += 1
        # advance: find the rightmost non-last part with a positive count
        j = k - 2
        while j >= 0 and c[j] == 0:
            j -= 1
        if j < 0:
            break
        # parts j+1..k-2 are zero here, so the freed mass moves to part j+1
        rem = c[k - 1] + 1
        c[j] -= 1
        c[k - 1] = 0
        c[j + 1] = rem
    if idx != count:
        raise RuntimeError("composition count mismatch")
    return sums, logprobs


def multiset_distances(const double[:, ::1] rows, const double[::1] target, Py_ssize_t m,
                       Py_ssize_t count):
    """Variational distance of every size-``m`` multiset mixture of ``rows`` to ``target``.

    Multisets are visited in the order of
    ``itertools.combinations_with_replacement(range(K), m)``.
    """
    cdef Py_ssize_t K = rows.shape[0], Y = rows.shape[1]
    out = np.empty(count, dtype=np.float64)
    cdef double[::1] d = out
    acc_arr = np.zeros((m, Y), dtype=np.float64)
    cdef double[:, ::1] acc = acc_arr
    cdef cnp.ndarray[cnp.int64_t, ndim=1] idx_arr = np.zeros(m, dtype=np.int64)
    cdef cnp.int64_t[::1] idx = idx_arr
    cdef Py_ssize_t pos = 0, level, y, start, i
    cdef double total, fm = <double>m

    # prefix sums for levels 0..m-1 of the initial multiset (all zeros)
    start = 0
    while True:
        for level in range(start, m):
            if level == 0:
                for y in range(Y):
                    acc[0, y] = rows[idx[0], y]
            else:
                for y in range(Y):
                    acc[level, y] = acc[level - 1, y] + rows[idx[level], y]
        total = 0.0
        for y in range(Y):
            total += fabs(acc[m - 1, y] / fm - target[y])
        d[pos] = 0.5 * total
        pos += 1
        # next multiset in lexicographic order
        i = m - 1
        while i >= 0 and idx[i] == K - 1:
            i -= 1
        if i < 0:
            break
        idx[i] += 1
        for level in range(i + 1, m):
            idx[level] = idx[i]
        start = i
    if pos != count:
        raise RuntimeError("multiset count mismatch")
    return out
