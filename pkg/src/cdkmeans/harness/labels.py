from __future__ import annotations

from itertools import permutations

import numpy as np

from ..exceptions import UnsupportedSizeError, UsageError

MAX_K = 8


def match_labels(true_assign, est_assign, K: int) -> tuple[tuple[int, ...], int]:
    """Best relabelling of estimated clusters onto true ones.

    Returns ``(perm, mismatches)`` where ``perm[l]`` is the true label given to
    estimated label ``l`` and ``mismatches`` counts vectors whose relabelled
    estimate differs from the truth.  All ``K!`` permutations are tried; among
    equally good ones the lexicographically first wins.
    """
    if K > MAX_K:
        raise UnsupportedSizeError(f"label matching is brute force; K={K} > {MAX_K}")
    true_assign = np.asarray(true_assign, dtype=np.int64)
    est_assign = np.asarray(est_assign, dtype=np.int64)
    if true_assign.shape != est_assign.shape:
        raise UsageError("assignment vectors differ in length")
    for a in (true_assign, est_assign):
        if a.size and not (0 <= a.min() and a.max() < K):
            raise UsageError("labels must lie in [0, K)")

    confusion = np.zeros((K, K), dtype=np.int64)
    np.add.at(confusion, (est_assign, true_assign), 1)
    perms = np.array(list(permutations(range(K))), dtype=np.intp)
    agree = confusion[np.arange(K), perms].sum(axis=1)
    best = int(np.argmax(agree))
    return tuple(int(v) for v in perms[best]), int(true_assign.size - agree[best])
