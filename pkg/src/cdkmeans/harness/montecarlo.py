"""Monte Carlo estimates of the assignment, centroid and full K-means error rates.

Trials are processed in blocks of ``CHUNK_TRIALS``; block ``c`` draws from the
stream ``(master_seed, experiment, c)``.  Within a block the uniforms are
drawn once and thresholded at every sweep value of ``p``, so the sweep
points share random numbers and the estimated curves are smooth in ``p``.
Blocks return integer error counts that are summed, so serial and parallel
runs give identical results.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import numpy as np

from .. import rng as _rng
from ..gf2 import BitStack, pack_bits, transpose_mul_bits
from ..kmeans import run, update_step
from ..source import compress, sample_dataset, sample_ground_truth
from .config import ErrorEstimate, ExperimentConfig
from .labels import match_labels


def _map_chunks(cfg: ExperimentConfig, fn) -> np.ndarray:
    """Sum per-block error-count vectors over all blocks."""
    cfg.ldpc  # build once before forking workers
    jobs = [(cfg, c, lo, hi) for c, lo, hi in cfg.chunks()]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(fn, *zip(*jobs)))
    else:
        parts = [fn(*job) for job in jobs]
    return np.sum(parts, axis=0, dtype=np.int64)


def _estimates(cfg, errors, units) -> list[ErrorEstimate]:
    return [ErrorEstimate(int(e), units, p) for e, p in zip(errors, cfg.points)]


# -- assignment step ---------------------------------------------------------


def _assignment_chunk(cfg: ExperimentConfig, chunk: int, lo: int, hi: int) -> np.ndarray:
    code, src = cfg.ldpc, cfg.source
    B, K, N = hi - lo, src.K, src.N
    gen = _rng.stream(cfg.master_seed, "assign-mc", chunk)
    theta = (gen.random((B, K, N), dtype=np.float32) < src.p_c).view(np.uint8)
    truth = gen.integers(K, size=B)
    noise_u = gen.random((B, N), dtype=np.float32)

    psi = pack_bits(transpose_mul_bits(code.H, theta))  # (B, K, W)
    rows = np.arange(B)
    errors = np.zeros(len(cfg.points), dtype=np.int64)
    for i, p in enumerate(cfg.points):
        x = theta[rows, truth] ^ (noise_u < p).view(np.uint8)
        u = pack_bits(transpose_mul_bits(code.H, x))  # (B, W)
        dist = np.bitwise_count(psi ^ u[:, None, :]).sum(axis=2, dtype=np.int64)
        own = dist[rows, truth]
        rivals = dist.copy()
        rivals[rows, truth] = np.iinfo(np.int64).max
        # the assignment step errs when a rival is strictly closer; a rival at
        # equal distance is also counted, matching the theory's P(A' >= A)
        wrong = rivals.min(axis=1) <= own
        errors[i] = int(wrong.sum())
    return errors


def run_assignment_mc(cfg: ExperimentConfig) -> list[ErrorEstimate]:
    """Error rate of the assignment step against the true compressed centroids.

    Each trial draws K fresh centroids, a true cluster and one noisy vector,
    compresses them with the code and decides the nearest centroid.  A trial
    is an error when the decision is wrong or when some other centroid is at
    the same distance as the true one.  One unit per trial.
    """
    errors = _map_chunks(cfg, _assignment_chunk)
    return _estimates(cfg, errors, cfg.trials)


# -- centroid step -------------------------------------------------------------


def _centroid_chunk(cfg: ExperimentConfig, chunk: int, lo: int, hi: int) -> np.ndarray:
    code, src = cfg.ldpc, cfg.source
    B, J_k, N = hi - lo, cfg.J_k, src.N
    gen = _rng.stream(cfg.master_seed, "centroid-mc", chunk)
    errors = np.zeros(len(cfg.points), dtype=np.int64)
    members = np.zeros(J_k, dtype=np.int64)
    for _ in range(B):
        theta = (gen.random(N) < src.p_c).view(np.uint8)
        noise_u = gen.random((J_k, N), dtype=np.float32)
        psi = transpose_mul_bits(code.H, theta)
        for i, p in enumerate(cfg.points):
            x = theta ^ (noise_u < p).view(np.uint8)
            u = BitStack.from_bits(transpose_mul_bits(code.H, x))
            est = update_step(u, members, 1).to_bits()[0]
            errors[i] += int(np.count_nonzero(est != psi))
    return errors


def run_centroid_mc(cfg: ExperimentConfig) -> list[ErrorEstimate]:
    """Bit error rate of the majority-vote centroid given the true assignments.

    Each trial draws one centroid and ``cfg.J_k`` noisy members, compresses
    them and compares the centroid step's output with the compressed true
    centroid bit by bit.  ``trials * M`` units.
    """
    errors = _map_chunks(cfg, _centroid_chunk)
    return _estimates(cfg, errors, cfg.trials * cfg.ldpc.M)


# -- full K-means ----------------------------------------------------------------


def kmeans_trial(cfg: ExperimentConfig, trial: int, p: float) -> tuple[int, np.ndarray, np.ndarray]:
    """One end-to-end run; returns ``(mismatches, true_assign, est_assign)``."""
    seed = _rng.derive_seed(cfg.master_seed, "kmeans-mc", trial)
    params = cfg.at(p)
    gt = sample_ground_truth(params, seed, equal_sizes=cfg.equal_sizes)
    U = compress(sample_dataset(gt, seed), cfg.ldpc)
    km = cfg.kmeans_config
    km = replace(km, seed=_rng.derive_seed(seed, "kmeans-init"))
    result = run(U, km)
    _, mismatches = match_labels(gt.assign, result.assign, params.K)
    return mismatches, gt.assign, result.assign


def _kmeans_chunk(cfg: ExperimentConfig, chunk: int, lo: int, hi: int) -> np.ndarray:
    errors = np.zeros(len(cfg.points), dtype=np.int64)
    for t in range(lo, hi):
        for i, p in enumerate(cfg.points):
            errors[i] += kmeans_trial(cfg, t, p)[0]
    return errors


def run_kmeans_mc(cfg: ExperimentConfig) -> list[ErrorEstimate]:
    """Misassignment rate of the full compressed-domain K-means pipeline.

    Each trial samples a ground truth and dataset, compresses, runs K-means
    and matches the recovered labels to the true ones.  ``trials * J`` units.
    Trial ``t`` uses the same seed at every sweep value, so the ground truth
    and noise uniforms are shared across ``p``.
    """
    errors = _map_chunks(cfg, _kmeans_chunk)
    return _estimates(cfg, errors, cfg.trials * cfg.source.J)
