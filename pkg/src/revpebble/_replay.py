"""Compiled replay loop over encoded move chunks.

A move is an int32 code: ``+(i + 1)`` places a pebble on node index ``i``,
``-(i + 1)`` removes it.
"""

import numba
import numpy as np

OK = 0
ERR_ALREADY_PEBBLED = 1
ERR_NOT_PEBBLED = 2
ERR_MISSING_PRED = 3


@numba.njit(cache=True)
def replay_chunk(codes, indptr, preds, state, root, counters):
    """Replay ``codes`` in place on ``state``.

    ``counters`` holds ``[count, space, visited]`` and is updated. Returns
    ``(t, kind, node)`` for the first illegal move, or ``(-1, 0, -1)``.
    """
    count = counters[0]
    space = counters[1]
    visited = counters[2]
    for t in range(codes.shape[0]):
        c = codes[t]
        if c > 0:
            x = c - 1
            if state[x]:
                counters[0] = count
                counters[1] = space
                counters[2] = visited
                return t, ERR_ALREADY_PEBBLED, x
        else:
            x = -c - 1
            if not state[x]:
                counters[0] = count
                counters[1] = space
                counters[2] = visited
                return t, ERR_NOT_PEBBLED, x
        for j in range(indptr[x], indptr[x + 1]):
            y = preds[j]
            if not state[y]:
                counters[0] = count
                counters[1] = space
                counters[2] = visited
                return t, ERR_MISSING_PRED, y
        if c > 0:
            state[x] = 1
            count += 1
            if count > space:
                space = count
            if x == root:
                visited = 1
        else:
            state[x] = 0
            count -= 1
    counters[0] = count
    counters[1] = space
    counters[2] = visited
    return -1, OK, -1


def pred_csr(pred_indices):
    indptr = np.zeros(len(pred_indices) + 1, dtype=np.int64)
    for i, p in enumerate(pred_indices):
        indptr[i + 1] = indptr[i] + len(p)
    flat = np.fromiter((y for p in pred_indices for y in p), dtype=np.int64, count=int(indptr[-1]))
    return indptr, flat
