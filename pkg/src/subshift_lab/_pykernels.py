"""Pure numpy implementations of the counting kernels.

Used when the compiled extension is unavailable or when
``SUBSHIFT_LAB_PURE=1`` is set. Semantics match ``_ckernels`` exactly except
for the numeric values of dense labels, which only promise that equal pairs
get equal labels.
"""
import numpy as np

_INT_LIMIT = 1 << 62


def occurrences(grid, pattern):
    grid = np.asarray(grid, dtype=np.uint8)
    pattern = np.asarray(pattern, dtype=np.uint8)
    h, w = grid.shape
    k, n = pattern.shape
    if k > h or n > w:
        return 0
    rows, cols = h - k + 1, w - n + 1
    mask = np.ones((rows, cols), dtype=bool)
    for dj in range(k):
        for di in range(n):
            mask &= grid[dj:dj + rows, di:di + cols] == pattern[dj, di]
    return int(mask.sum())


def dense_labels(a, b):
    """Map each pair ``(a[t], b[t])`` to an int64 label, equal iff pairs are equal."""
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    shape = a.shape
    a = a.ravel()
    b = b.ravel()
    if a.size == 0:
        return np.zeros(shape, dtype=np.int64), 0
    base = int(b.max()) + 1
    if (int(a.max()) + 1) * base < _INT_LIMIT:
        uniq, inv = np.unique(a * base + b, return_inverse=True)
    else:
        uniq, inv = np.unique(np.stack([a, b], axis=1), axis=0, return_inverse=True)
    return inv.reshape(shape).astype(np.int64, copy=False), int(len(uniq))


def count_distinct(labels):
    labels = np.asarray(labels)
    if labels.size == 0:
        return 0
    return int(np.unique(labels).size)


def shift_agrees(grid, di, dj):
    """True iff ``grid[j + dj, i + di] == grid[j, i]`` wherever both are defined."""
    grid = np.asarray(grid)
    h, w = grid.shape
    if abs(di) >= w or abs(dj) >= h:
        return True
    a = grid[max(0, -dj):h - max(0, dj), max(0, -di):w - max(0, di)]
    b = grid[max(0, dj):h - max(0, -dj), max(0, di):w - max(0, -di)]
    return bool(np.array_equal(a, b))


def label_counts(labels):
    """Multiplicities of the distinct values in ``labels`` (order unspecified)."""
    labels = np.asarray(labels).ravel()
    if labels.size == 0:
        return np.zeros(0, dtype=np.int64)
    return np.unique(labels, return_counts=True)[1].astype(np.int64)
