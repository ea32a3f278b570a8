"""K-means with Hamming distance and majority-vote centroids.

Works on any stack of binary vectors; the intended input is the syndromes
``u_j`` so that clustering happens without decoding.  The objective is

    F(psi, assign) = sum_j d(u_j, psi[assign[j]])

and each iteration runs the assignment step followed by the centroid step.
Neither step can increase ``F``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import rng as _rng
from .exceptions import UsageError
from .gf2 import BitStack, distance_matrix, pack_bits
from .source import CompressedDataset

INIT_METHODS = ("random", "kmeans++")


def _stack(U) -> BitStack:
    if isinstance(U, CompressedDataset):
        return U.u
    if isinstance(U, BitStack):
        return U
    raise UsageError(f"expected CompressedDataset or BitStack, got {type(U).__name__}")


@dataclass(frozen=True)
class KMeansConfig:
    K: int
    L: int = 10
    init: str = "kmeans++"
    seed: int = 0
    restarts: int = 1

    def __post_init__(self):
        if self.K < 1:
            raise UsageError(f"K must be at least 1, got {self.K}")
        if self.L < 1:
            raise UsageError(f"L must be at least 1, got {self.L}")
        if self.init not in INIT_METHODS:
            raise UsageError(f"init must be one of {INIT_METHODS}, got {self.init!r}")
        if self.restarts < 1:
            raise UsageError(f"restarts must be at least 1, got {self.restarts}")


@dataclass(frozen=True, eq=False)
class KMeansState:
    psi: BitStack
    assign: np.ndarray
    cluster_sizes: np.ndarray = field(init=False)

    def __post_init__(self):
        assign = np.array(self.assign, dtype=np.int64)
        assign.setflags(write=False)
        object.__setattr__(self, "assign", assign)
        K = len(self.psi)
        if assign.size and not (0 <= assign.min() and assign.max() < K):
            raise UsageError("assignments must lie in [0, K)")
        sizes = np.bincount(assign, minlength=K)
        sizes.setflags(write=False)
        object.__setattr__(self, "cluster_sizes", sizes)

    @property
    def K(self) -> int:
        return len(self.psi)


@dataclass(frozen=True, eq=False)
class KMeansResult:
    state: KMeansState
    objective_trace: list[int]
    iterations_run: int

    @property
    def assign(self) -> np.ndarray:
        return self.state.assign

    @property
    def psi(self) -> BitStack:
        return self.state.psi


def objective(U, state: KMeansState) -> int:
    """Total Hamming distance of every vector to its assigned centroid."""
    u = _stack(U)
    if len(state.assign) != len(u):
        raise UsageError(f"{len(state.assign)} assignments for {len(u)} vectors")
    if state.psi.length != u.length:
        raise UsageError(f"centroid length {state.psi.length} != vector length {u.length}")
    diff = np.bitwise_xor(u.words, state.psi.words[state.assign])
    return int(np.bitwise_count(diff).sum())


def assign_step(U, psi: BitStack) -> np.ndarray:
    """Nearest centroid for every vector; ties go to the smallest index."""
    u = _stack(U)
    if len(psi) == 0:
        raise UsageError("need at least one centroid")
    # argmin returns the first minimiser, which is the tie rule we want
    return np.argmin(distance_matrix(u, psi), axis=1).astype(np.int64)


def _majority(bits: np.ndarray, assign: np.ndarray, K: int):
    onehot = np.zeros((K, bits.shape[0]), dtype=np.int32)
    onehot[assign, np.arange(bits.shape[0])] = 1
    counts = onehot @ bits.astype(np.int32)
    sizes = onehot.sum(axis=1)
    # ties (count == J_k / 2) resolve to 1
    return (2 * counts >= sizes[:, None]).astype(np.uint8), sizes


def update_step(U, assign, K: int) -> BitStack:
    """Majority-vote centroids.

    Bit ``m`` of centroid ``k`` is 1 when at least half of the vectors in
    cluster ``k`` have bit ``m`` set.  An empty cluster is re-seeded with the
    vector farthest from its own centroid, chosen among vectors that are not
    the only member of their cluster.
    """
    u = _stack(U)
    assign = np.asarray(assign, dtype=np.int64)
    if assign.shape != (len(u),):
        raise UsageError(f"{assign.shape[0]} assignments for {len(u)} vectors")
    if assign.size and not (0 <= assign.min() and assign.max() < K):
        raise UsageError("assignments must lie in [0, K)")
    bits = u.to_bits()
    psi, sizes = _majority(bits, assign, K)

    empty = np.flatnonzero(sizes == 0)
    if empty.size:
        psi_words = pack_bits(psi)
        dist = np.bitwise_count(np.bitwise_xor(u.words, psi_words[assign])).sum(axis=1)
        remaining = sizes.copy()
        taken = np.zeros(len(u), dtype=bool)
        for k in empty:
            ok = (remaining[assign] > 1) & ~taken
            if not ok.any():
                raise UsageError("cannot re-seed an empty cluster: fewer vectors than clusters")
            j = int(np.flatnonzero(ok)[np.argmax(dist[ok])])
            psi[k] = bits[j]
            taken[j] = True
            remaining[assign[j]] -= 1
    return BitStack.from_bits(psi)


def _kmeanspp_indices(u: BitStack, K: int, gen: np.random.Generator, first: int | None = None) -> list[int]:
    J = len(u)
    chosen = [int(gen.integers(J)) if first is None else first]
    dmin = np.bitwise_count(np.bitwise_xor(u.words, u.words[chosen[0]])).sum(axis=1)
    for _ in range(1, K):
        w = dmin.astype(np.float64) ** 2
        total = w.sum()
        if total > 0:
            j = int(gen.choice(J, p=w / total))
        else:
            # every vector duplicates a chosen centroid; fall back to unused indices
            free = np.setdiff1d(np.arange(J), chosen)
            j = int(free[gen.integers(free.size)])
        chosen.append(j)
        d = np.bitwise_count(np.bitwise_xor(u.words, u.words[j])).sum(axis=1)
        dmin = np.minimum(dmin, d)
    return chosen


def kmeanspp_init(U, K: int, seed: int) -> BitStack:
    """K-means++ seeding with squared-Hamming-distance weights."""
    u = _stack(U)
    if len(u) < K:
        raise UsageError(f"cannot pick {K} centroids from {len(u)} vectors")
    idx = _kmeanspp_indices(u, K, _rng.stream(seed, "kmeans++"))
    return u.take(idx)


def random_init(U, K: int, seed: int) -> BitStack:
    """K input vectors chosen uniformly without replacement, distinct values first."""
    u = _stack(U)
    if len(u) < K:
        raise UsageError(f"cannot pick {K} centroids from {len(u)} vectors")
    gen = _rng.stream(seed, "random-init")
    _, first = np.unique(u.words, axis=0, return_index=True)
    if first.size >= K:
        idx = gen.choice(np.sort(first), size=K, replace=False)
    else:
        rest = np.setdiff1d(np.arange(len(u)), first)
        idx = np.concatenate([gen.permutation(first), gen.choice(rest, K - first.size, replace=False)])
    return u.take(idx)


def run(U, cfg: KMeansConfig, init: BitStack | None = None) -> KMeansResult:
    """Alternate assignment and centroid steps at most ``cfg.L`` times.

    Stops early once an assignment step leaves every label unchanged.
    ``init`` overrides the configured initialisation.  With
    ``cfg.restarts > 1`` the whole procedure is repeated from fresh seeds and
    the run with the lowest final objective is returned (earliest on ties);
    the first run always uses ``cfg.seed`` itself.
    """
    u = _stack(U)
    if init is not None:
        if len(init) != cfg.K or init.length != u.length:
            raise UsageError("initial centroids do not match K or the vector length")
        return _lloyd(u, init, cfg)
    best = None
    for r in range(cfg.restarts):
        seed = cfg.seed if r == 0 else _rng.derive_seed(cfg.seed, "restart", r)
        if cfg.init == "kmeans++":
            start = kmeanspp_init(u, cfg.K, seed)
        else:
            start = random_init(u, cfg.K, seed)
        result = _lloyd(u, start, cfg)
        if best is None or result.objective_trace[-1] < best.objective_trace[-1]:
            best = result
    return best


def _lloyd(u: BitStack, psi: BitStack, cfg: KMeansConfig) -> KMeansResult:
    assign = None
    trace: list[int] = []
    for _ in range(cfg.L):
        new = assign_step(u, psi)
        if assign is not None and np.array_equal(new, assign):
            break
        assign = new
        psi = update_step(u, assign, cfg.K)
        trace.append(objective(u, KMeansState(psi, assign)))
    return KMeansResult(KMeansState(psi, assign), trace, len(trace))
