# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
# distutils: language = c++
"""Compiled counting kernels; see ``_pykernels`` for the reference semantics.

Label sets use a direct table when the value range is small (the usual case
for radix block codes).  Wide ranges go to numpy's vectorised sort, which
beats a cache-missing hash table at every size we measured.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint8_t
from libc.string cimport memcmp, memset
from libcpp.vector cimport vector

from . import _pykernels

cnp.import_array()

cdef int64_t _INT_LIMIT = (<int64_t>1) << 62
# a direct table is used while the value range is below this many slots per item (and an absolute cap)
cdef int64_t _DIRECT_FACTOR = 8
cdef int64_t _DIRECT_CAP = (<int64_t>1) << 27


cdef inline bint _range(const int64_t[::1] v, int64_t* lo, int64_t* hi) nogil:
    cdef Py_ssize_t t
    cdef int64_t a = v[0], b = v[0]
    for t in range(1, v.shape[0]):
        if v[t] < a:
            a = v[t]
        elif v[t] > b:
            b = v[t]
    lo[0] = a
    hi[0] = b
    return True


cdef inline bint _use_direct(int64_t lo, int64_t hi, Py_ssize_t n) nogil:
    cdef int64_t span = hi - lo
    return span >= 0 and span < _DIRECT_CAP and span < _DIRECT_FACTOR * n + 65536


def occurrences(grid, pattern):
    cdef const uint8_t[:, ::1] g = np.ascontiguousarray(grid, dtype=np.uint8)
    cdef const uint8_t[:, ::1] p = np.ascontiguousarray(pattern, dtype=np.uint8)
    cdef Py_ssize_t h = g.shape[0], w = g.shape[1]
    cdef Py_ssize_t k = p.shape[0], n = p.shape[1]
    cdef Py_ssize_t y, x, dy, dx, cols
    cdef int64_t count = 0
    cdef uint8_t sym
    cdef const uint8_t* row
    cdef uint8_t* m
    if k > h or n > w:
        return 0
    cols = w - n + 1
    cdef vector[uint8_t] mask
    mask.resize(cols)
    m = &mask[0]
    with nogil:
        for y in range(h - k + 1):
            memset(m, 1, cols)
            for dy in range(k):
                for dx in range(n):
                    row = &g[y + dy, dx]
                    sym = p[dy, dx]
                    for x in range(cols):
                        m[x] &= row[x] == sym
            for x in range(cols):
                count += m[x]
    return count


def count_distinct(labels):
    arr = np.ascontiguousarray(labels, dtype=np.int64).ravel()
    cdef const int64_t[::1] v = arr
    cdef Py_ssize_t t, size = v.shape[0]
    cdef int64_t lo, hi, distinct = 0
    cdef vector[uint8_t] seen
    if size == 0:
        return 0
    with nogil:
        _range(v, &lo, &hi)
        if lo >= 0 and _use_direct(lo, hi, size):
            seen.resize(hi - lo + 1, 0)
            for t in range(size):
                distinct += 1 - seen[v[t] - lo]
                seen[v[t] - lo] = 1
        else:
            distinct = -1
    if distinct < 0:
        return _pykernels.count_distinct(arr)
    return int(distinct)


def label_counts(labels):
    arr = np.ascontiguousarray(labels, dtype=np.int64).ravel()
    cdef const int64_t[::1] v = arr
    cdef Py_ssize_t t, size = v.shape[0]
    cdef int64_t lo, hi
    if size == 0:
        return np.zeros(0, dtype=np.int64)
    with nogil:
        _range(v, &lo, &hi)
    if lo < 0 or not _use_direct(lo, hi, size):
        return _pykernels.label_counts(arr)
    cdef vector[int64_t] counts
    counts.resize(hi - lo + 1, 0)
    with nogil:
        for t in range(size):
            counts[v[t] - lo] += 1
    out = np.asarray(<int64_t[:counts.size()]> &counts[0])
    return out[out > 0].copy()


def dense_labels(a, b):
    """Labels ``0, 1, ...`` in order of first appearance of each pair (small key ranges)."""
    a_arr = np.ascontiguousarray(a, dtype=np.int64)
    b_arr = np.ascontiguousarray(b, dtype=np.int64)
    shape = a_arr.shape
    if a_arr.size == 0:
        return np.zeros(shape, dtype=np.int64), 0
    if int(a_arr.min()) < 0 or int(b_arr.min()) < 0:
        return _pykernels.dense_labels(a_arr, b_arr)
    cdef int64_t base = int(b_arr.max()) + 1
    cdef Py_ssize_t size = a_arr.size
    span = (int(a_arr.max()) + 1) * base
    if span >= _INT_LIMIT or not _use_direct(0, span - 1, size):
        return _pykernels.dense_labels(a_arr, b_arr)
    cdef const int64_t[::1] av = a_arr.ravel()
    cdef const int64_t[::1] bv = b_arr.ravel()
    out = np.empty(size, dtype=np.int64)
    cdef int64_t[::1] ov = out
    cdef Py_ssize_t t
    cdef int64_t key, nxt = 0
    cdef vector[int64_t] table
    table.resize(span, -1)
    with nogil:
        for t in range(size):
            key = av[t] * base + bv[t]
            if table[key] < 0:
                table[key] = nxt
                nxt += 1
            ov[t] = table[key]
    return out.reshape(shape), int(nxt)


def shift_agrees(grid, Py_ssize_t di, Py_ssize_t dj):
    cdef const uint8_t[:, ::1] g = np.ascontiguousarray(grid, dtype=np.uint8)
    cdef Py_ssize_t h = g.shape[0], w = g.shape[1]
    cdef Py_ssize_t y
    cdef Py_ssize_t y0 = max(0, -dj), y1 = h - max(0, dj)
    cdef Py_ssize_t x0 = max(0, -di), x1 = w - max(0, di)
    cdef bint ok = True
    if x1 <= x0 or y1 <= y0:
        return True
    with nogil:
        for y in range(y0, y1):
            if memcmp(&g[y + dj, x0 + di], &g[y, x0], x1 - x0) != 0:
                ok = False
                break
    return bool(ok)
