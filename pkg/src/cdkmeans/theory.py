"""Approximate error probabilities of the two K-means steps on syndromes.

Both approximations treat the syndrome bits of ``H^T b`` as independent,
each equal to 1 with probability ``f(d_c, p)`` (the parity of ``d_c``
Bernoulli(p) bits).  Binomial terms are evaluated in log space so that
``M`` in the hundreds or thousands does not overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp, xlog1py, xlogy

from .exceptions import UsageError


@dataclass(frozen=True)
class StepErrorInputs:
    """Parameters of one error-probability evaluation.

    ``J_k`` is only used by the centroid step.
    """

    M: int
    K: int
    d_c: int
    p: float
    p_c: float
    J_k: int = 1

    def __post_init__(self):
        if min(self.M, self.K, self.J_k) < 1:
            raise UsageError("M, K and J_k must be at least 1")
        if self.d_c < 0:
            raise UsageError("d_c must be non-negative")
        for name in ("p", "p_c"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise UsageError(f"{name} must be a probability, got {v}")


def _log_binom_pmf(M: int, m, p: float) -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    log_c = gammaln(M + 1) - gammaln(m + 1) - gammaln(M - m + 1)
    return log_c + xlogy(m, p) + xlog1py(M - m, -p)


def binom_pmf(M: int, m: int, p: float) -> float:
    """``C(M, m) p^m (1-p)^(M-m)``."""
    if not 0 <= m <= M:
        raise UsageError(f"need 0 <= m <= M, got m={m}, M={M}")
    return float(np.exp(_log_binom_pmf(M, m, p)))


def log_binom_pmf_all(M: int, p: float) -> np.ndarray:
    """Log pmf of Binomial(M, p) at ``m = 0..M`` (``-inf`` where the mass is 0)."""
    return _log_binom_pmf(M, np.arange(M + 1), p)


def log_upper_tail(M: int, p: float) -> np.ndarray:
    """``log P(X >= m)`` for ``m = 0..M``, X ~ Binomial(M, p)."""
    lp = log_binom_pmf_all(M, p)
    return np.logaddexp.accumulate(lp[::-1])[::-1]


def xor_flip_prob(d: int, p: float) -> float:
    """Probability that the XOR of ``d`` i.i.d. Bernoulli(p) bits is 1."""
    if d < 0:
        raise UsageError(f"d must be non-negative, got {d}")
    return 0.5 - 0.5 * (1.0 - 2.0 * p) ** d


def binary_convolution(a: float, b: float) -> float:
    """``a (*) b = a + b - 2ab``, the flip probability of XOR-ing two independent bits."""
    return a + b - 2.0 * a * b


def binary_entropy(p: float) -> float:
    """Entropy in bits of a Bernoulli(p) variable."""
    if not 0.0 <= p <= 1.0:
        raise UsageError(f"p must lie in [0, 1], got {p}")
    h = -(xlogy(p, p) + xlogy(1.0 - p, 1.0 - p)) / math.log(2.0)
    return float(h) + 0.0  # no negative zero at the endpoints


def pairwise_error_from_q(M: int, q1: float, q2: float) -> float:
    """``P(A >= A')`` for independent A ~ Bin(M, q1) and A' ~ Bin(M, q2).

    ``A`` is the distance to the true centroid and ``A'`` the distance to a
    rival, so this is the probability that the rival is at least as close.
    Evaluated as ``sum_m P(A' = m) P(A >= m)`` with a suffix-sum tail, the
    same double sum as :func:`pairwise_error_double_sum` in O(M).
    """
    terms = log_binom_pmf_all(M, q2) + log_upper_tail(M, q1)
    return float(min(1.0, np.exp(logsumexp(terms))))


def pairwise_error_double_sum(M: int, q1: float, q2: float) -> float:
    """``sum_{m1} sum_{m2 >= m1} B_M(m1, q2) B_M(m2, q1)``, term by term.

    O(M^2) reference for :func:`pairwise_error_from_q`.
    """
    total = 0.0
    for m1 in range(M + 1):
        b1 = binom_pmf(M, m1, q2)
        for m2 in range(m1, M + 1):
            total += b1 * binom_pmf(M, m2, q1)
    return total


def assignment_error_from_q(M: int, K: int, q1: float, q2: float) -> float:
    """Union bound ``(K-1) P(A' >= A)`` clamped to 1."""
    if K <= 1:
        return 0.0
    return min(1.0, (K - 1) * pairwise_error_from_q(M, q1, q2))


def assignment_q(inp: StepErrorInputs, convolved: bool = False) -> tuple[float, float]:
    """Per-bit flip probabilities against the true and a wrong centroid.

    ``q1 = f(d_c, p)``.  The default ``q2 = f(d_c, (1-p) f(2, p_c))``; with
    ``convolved=True`` the inner term is the binary convolution
    ``p (*) f(2, p_c)`` instead.
    """
    q1 = xor_flip_prob(inp.d_c, inp.p)
    diff = xor_flip_prob(2, inp.p_c)
    inner = binary_convolution(inp.p, diff) if convolved else (1.0 - inp.p) * diff
    return q1, xor_flip_prob(inp.d_c, inner)


def assignment_error_prob(inp: StepErrorInputs) -> float:
    """Approximate probability that the assignment step picks a wrong cluster
    when the compressed centroids are known exactly.  Ties count as errors."""
    q1, q2 = assignment_q(inp)
    return assignment_error_from_q(inp.M, inp.K, q1, q2)


def assignment_error_prob_convolved(inp: StepErrorInputs) -> float:
    """Variant of :func:`assignment_error_prob` using ``q2 = f(d_c, p (*) f(2, p_c))``."""
    q1, q2 = assignment_q(inp, convolved=True)
    return assignment_error_from_q(inp.M, inp.K, q1, q2)


def centroid_error_from_pd(J_k: int, p_d: float) -> float:
    """``sum_{j >= ceil(J_k/2)} B_{J_k}(j, p_d)``."""
    if J_k < 1:
        raise UsageError(f"J_k must be at least 1, got {J_k}")
    lo = -(-J_k // 2)
    return float(min(1.0, np.exp(log_upper_tail(J_k, p_d)[lo])))


def centroid_error_prob(inp: StepErrorInputs) -> float:
    """Approximate per-bit error of the majority-vote centroid computed from
    ``J_k`` correctly assigned syndromes."""
    return centroid_error_from_pd(inp.J_k, xor_flip_prob(inp.d_c, inp.p))
