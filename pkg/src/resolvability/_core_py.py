"""Pure-Python/numpy twins of the compiled kernels in ``_core.pyx``.

Operation order matches the compiled loops so both backends round the same way.
"""
from __future__ import annotations

import itertools

import numpy as np


def merge_sorted_atoms(values: np.ndarray, probs: np.ndarray, tol: float):
    values = np.asarray(values, dtype=np.float64)
    probs = np.asarray(probs, dtype=np.float64)
    n = len(values)
    if n == 0:
        return np.empty(0), np.empty(0)
    # a gap > tol always opens a new group; only runs of close values need the
    # anchor scan, since anchors there depend on earlier merges
    close = np.diff(values) <= tol
    if not close.any():
        return values.copy(), probs.copy()
    out_v = []
    out_p = []
    run_starts = np.flatnonzero(np.concatenate(([True], ~close)))
    run_ends = np.append(run_starts[1:], n)
    for a, b in zip(run_starts.tolist(), run_ends.tolist()):
        if b - a == 1:
            out_v.append(values[a])
            out_p.append(probs[a])
            continue
        anchor = values[a]
        acc = probs[a]
        for i in range(a + 1, b):
            if values[i] - anchor <= tol:
                acc += probs[i]
            else:
                out_v.append(anchor)
                out_p.append(acc)
                anchor = values[i]
                acc = probs[i]
        out_v.append(anchor)
        out_p.append(acc)
    return np.array(out_v, dtype=np.float64), np.array(out_p, dtype=np.float64)


def compositions(n: int, k: int) -> np.ndarray:
    """All compositions of n into k nonnegative parts, first part descending."""
    if k == 1:
        return np.array([[n]], dtype=np.int64)
    if k == 2:
        c0 = np.arange(n, -1, -1, dtype=np.int64)
        return np.stack([c0, n - c0], axis=1)
    blocks = []
    for c0 in range(n, -1, -1):
        tail = compositions(n - c0, k - 1)
        head = np.full((tail.shape[0], 1), c0, dtype=np.int64)
        blocks.append(np.hstack([head, tail]))
    return np.vstack(blocks)


def multinomial_atoms(values, logp, lgfact, n: int, count: int):
    values = np.asarray(values, dtype=np.float64)
    logp = np.asarray(logp, dtype=np.float64)
    lgfact = np.asarray(lgfact, dtype=np.float64)
    k = len(values)
    if k == 0:
        raise ValueError("need at least one atom")
    c = compositions(n, k)
    if c.shape[0] != count:
        raise RuntimeError("composition count mismatch")
    sums = np.zeros(count)
    logprobs = np.full(count, lgfact[n])
    for i in range(k):
        ci = c[:, i]
        sums = sums + ci * values[i]
        logprobs = logprobs + (ci * logp[i] - lgfact[ci])
    return sums, logprobs


def multiset_distances(rows, target, m: int, count: int, chunk: int = 1 << 16):
    rows = np.asarray(rows, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    K, Y = rows.shape
    out = np.empty(count)
    combos = itertools.combinations_with_replacement(range(K), m)
    pos = 0
    while pos < count:
        block = np.fromiter(
            itertools.chain.from_iterable(itertools.islice(combos, chunk)),
            dtype=np.int64,
        ).reshape(-1, m)
        mix = rows[block[:, 0]]
        for j in range(1, m):
            mix = mix + rows[block[:, j]]
        dev = np.abs(mix / float(m) - target)
        total = np.zeros(block.shape[0])
        for y in range(Y):
            total = total + dev[:, y]
        out[pos:pos + block.shape[0]] = 0.5 * total
        pos += block.shape[0]
    return out
