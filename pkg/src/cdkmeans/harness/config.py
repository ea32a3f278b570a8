"""Experiment configuration and estimate containers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property

from ..exceptions import UsageError
from ..kmeans import KMeansConfig
from ..ldpc import LdpcCode, build_peg, load_alist
from ..source import SourceParams

# Trials are drawn in fixed-size blocks, each from its own random stream.  The
# block size is part of the sampling contract: changing it changes results.
CHUNK_TRIALS = 1000


@dataclass(frozen=True)
class CodeSpec:
    """A PEG code ``(N, M, d_v)`` built with ``seed``, or an alist file."""

    N: int = 1000
    M: int = 500
    d_v: int = 2
    seed: int = 0
    alist: str | None = None

    def build(self) -> LdpcCode:
        if self.alist is not None:
            return load_alist(self.alist)
        return build_peg(self.N, self.M, self.d_v, self.seed)


@dataclass(frozen=True)
class ExperimentConfig:
    source: SourceParams
    code: CodeSpec | LdpcCode = field(default_factory=CodeSpec)
    trials: int = 1000
    kmeans: KMeansConfig | None = None
    sweep: tuple[float, ...] = ()
    master_seed: int = 0
    cluster_size: int | None = None
    equal_sizes: bool = False
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "sweep", tuple(float(p) for p in self.sweep))
        if self.trials < 1:
            raise UsageError(f"trials must be at least 1, got {self.trials}")
        for p in self.sweep:
            if not 0.0 <= p < 0.5:
                raise UsageError(f"sweep values must lie in [0, 1/2), got {p}")
        if self.cluster_size is not None and self.cluster_size < 1:
            raise UsageError("cluster_size must be positive")
        if self.kmeans is not None and self.kmeans.K != self.source.K:
            raise UsageError("kmeans.K must equal source.K")
        if self.workers < 1:
            raise UsageError("workers must be at least 1")

    @cached_property
    def ldpc(self) -> LdpcCode:
        code = self.code if isinstance(self.code, LdpcCode) else self.code.build()
        if code.N != self.source.N:
            raise UsageError(f"code length {code.N} != source length N={self.source.N}")
        return code

    @property
    def points(self) -> tuple[float, ...]:
        """Sweep values, or the single ``source.p`` when no sweep is given."""
        return self.sweep or (self.source.p,)

    @property
    def J_k(self) -> int:
        return self.cluster_size or max(1, self.source.J // self.source.K)

    @property
    def kmeans_config(self) -> KMeansConfig:
        return self.kmeans or KMeansConfig(K=self.source.K)

    def at(self, p: float) -> SourceParams:
        return replace(self.source, p=p)

    def chunks(self):
        """``(index, start, stop)`` trial blocks covering ``range(trials)``."""
        n = math.ceil(self.trials / CHUNK_TRIALS)
        for c in range(n):
            yield c, c * CHUNK_TRIALS, min(self.trials, (c + 1) * CHUNK_TRIALS)


def wilson_interval(errors: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    if n <= 0:
        return 0.0, 1.0
    phat = errors / n
    denom = 1.0 + z * z / n
    centre = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    lo, hi = max(0.0, centre - half), min(1.0, centre + half)
    # guard against rounding pushing the point estimate outside
    return min(lo, phat), max(hi, phat)


@dataclass(frozen=True)
class ErrorEstimate:
    """Error count over ``trials_units`` Bernoulli units with a Wilson 95% interval."""

    errors: int
    trials_units: int
    p: float = float("nan")

    @property
    def p_hat(self) -> float:
        return self.errors / self.trials_units if self.trials_units else 0.0

    @property
    def ci95(self) -> tuple[float, float]:
        return wilson_interval(self.errors, self.trials_units)

    def interval(self, z: float) -> tuple[float, float]:
        return wilson_interval(self.errors, self.trials_units, z)

    @property
    def stderr(self) -> float:
        n = self.trials_units
        return math.sqrt(self.p_hat * (1 - self.p_hat) / n) if n else float("nan")


@dataclass(frozen=True)
class RateEstimate:
    """Joint-entropy rate estimate, bits per symbol per sensor.

    ``r_hat = conditional_rate + assignment_overhead`` where
    ``conditional_rate`` estimates ``H(X | E) / (N J)`` by the mean mixture
    log-likelihood of sampled columns.  The bounds bracket ``H(X) / (N J)``.
    """

    r_hat: float
    columns_sampled: int
    stderr: float
    conditional_rate: float
    lower_bound: float
    centroid_overhead: float
    assignment_overhead: float

    @property
    def upper_bound(self) -> float:
        return self.lower_bound + self.centroid_overhead + self.assignment_overhead
