"""Monte Carlo estimate of the joint-entropy rate needed to reconstruct every sensor."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import xlog1py, xlogy

from .. import rng as _rng
from ..exceptions import UsageError
from ..source import SourceParams, bernoulli_bits, sample_ground_truth
from ..theory import binary_entropy
from .config import RateEstimate

LN2 = math.log(2.0)


def column_log_likelihood(ones, sizes, p: float, p_c: float) -> np.ndarray:
    """Natural-log probability of measurement columns given the cluster map.

    ``ones[..., k]`` counts the members of cluster ``k`` reading 1 in a column
    and ``sizes[k]`` is the cluster size.  The centroid bit of every cluster is
    marginalised out; since clusters have independent centroid bits the
    ``2^K``-term mixture factorises into a product of two-term mixtures.
    """
    ones = np.asarray(ones, dtype=np.float64)
    zeros = np.asarray(sizes, dtype=np.float64) - ones
    # centroid bit 0: the ones are flips; centroid bit 1: the zeros are flips
    log_t0 = xlog1py(1.0, -p_c) + xlogy(ones, p) + xlog1py(zeros, -p)
    log_t1 = xlogy(1.0, p_c) + xlogy(zeros, p) + xlog1py(ones, -p)
    return np.logaddexp(log_t0, log_t1).sum(axis=-1)


def estimate_rate_mc(params: SourceParams, columns: int, seed: int) -> RateEstimate:
    """Estimate ``H(X_1..X_J) / (N J)`` in bits per symbol per sensor.

    One ground truth is sampled and its cluster map held fixed.  Columns of
    the ``J x N`` measurement matrix are i.i.d. given that map, so
    ``H(X | E) / (N J)`` is estimated by the mean of ``-log2 p(column) / J``
    over ``columns`` freshly sampled columns.  The assignment description
    cost ``log2(K) / N`` is added to give ``r_hat``.
    """
    if columns < 2:
        raise UsageError("need at least two columns for a standard error")
    gt = sample_ground_truth(params, _rng.derive_seed(seed, "rate-truth"))
    sizes = gt.cluster_sizes()
    J, K = params.J, params.K

    gen = _rng.stream(seed, "rate-columns")
    centroid_bits = bernoulli_bits(gen, (columns, K), params.p_c)
    x = centroid_bits[:, gt.assign] ^ bernoulli_bits(gen, (columns, J), params.p)
    onehot = np.zeros((J, K), dtype=np.int64)
    onehot[np.arange(J), gt.assign] = 1
    ones = x.astype(np.int64) @ onehot

    bits = -column_log_likelihood(ones, sizes, params.p, params.p_c) / LN2 / J
    conditional = float(bits.mean())
    stderr = float(bits.std(ddof=1) / math.sqrt(columns))
    assignment_overhead = math.log2(K) / params.N
    return RateEstimate(
        r_hat=conditional + assignment_overhead,
        columns_sampled=columns,
        stderr=stderr,
        conditional_rate=conditional,
        lower_bound=binary_entropy(params.p),
        centroid_overhead=K * binary_entropy(params.p_c) / J,
        assignment_overhead=assignment_overhead,
    )
