"""Binary source model: centroids, noisy sensor vectors, syndrome compression.

A sensor in cluster ``k`` observes ``x_j = theta_k XOR b_j`` where the bits of
``theta_k`` are Bernoulli(p_c) and the bits of ``b_j`` are Bernoulli(p).  It
transmits the syndrome ``u_j = H^T x_j``.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass

import numpy as np

from . import rng as _rng
from .exceptions import UsageError
from .gf2 import BitStack, transpose_mul_bits
from .ldpc import LdpcCode


@dataclass(frozen=True)
class SourceParams:
    J: int
    N: int
    K: int
    p: float
    p_c: float

    def __post_init__(self):
        if not self.J >= self.K >= 1:
            raise UsageError(f"need J >= K >= 1, got J={self.J}, K={self.K}")
        if self.N < 1:
            raise UsageError(f"N must be positive, got {self.N}")
        if not 0.0 <= self.p < 0.5:
            raise UsageError(f"noise probability p must lie in [0, 1/2), got {self.p}")
        if not 0.0 <= self.p_c <= 1.0:
            raise UsageError(f"centroid probability p_c must lie in [0, 1], got {self.p_c}")


@dataclass(frozen=True, eq=False)
class GroundTruth:
    theta: BitStack
    assign: np.ndarray
    params: SourceParams

    def __post_init__(self):
        assign = np.array(self.assign, dtype=np.int64)
        assign.setflags(write=False)
        object.__setattr__(self, "assign", assign)
        P = self.params
        if len(self.theta) != P.K or self.theta.length != P.N:
            raise UsageError("theta must hold K vectors of length N")
        if assign.shape != (P.J,) or (assign.size and not (0 <= assign.min() and assign.max() < P.K)):
            raise UsageError("assign must hold J cluster indices in [0, K)")

    def one_hot(self) -> np.ndarray:
        """The ``J x K`` assignment indicator matrix ``e_{j,k}``."""
        e = np.zeros((self.params.J, self.params.K), dtype=np.uint8)
        e[np.arange(self.params.J), self.assign] = 1
        return e

    def cluster_sizes(self) -> np.ndarray:
        return np.bincount(self.assign, minlength=self.params.K)


@dataclass(frozen=True, eq=False)
class Dataset:
    x: BitStack
    noise: BitStack | None = None

    @property
    def J(self) -> int:
        return len(self.x)

    @property
    def N(self) -> int:
        return self.x.length


@dataclass(frozen=True, eq=False)
class CompressedDataset:
    u: BitStack
    code_id: str = ""

    @property
    def J(self) -> int:
        return len(self.u)

    @property
    def M(self) -> int:
        return self.u.length


def bernoulli_bits(gen: np.random.Generator, shape, prob: float) -> np.ndarray:
    """uint8 array of i.i.d. Bernoulli(prob) bits."""
    return (gen.random(shape) < prob).view(np.uint8)


def sample_ground_truth(params: SourceParams, seed: int, equal_sizes: bool = False) -> GroundTruth:
    """Draw centroids and cluster assignments.

    Assignments are i.i.d. uniform over the K clusters, or with
    ``equal_sizes=True`` a random permutation of ``J`` labels split as
    evenly as possible.
    """
    theta = np.stack(
        [bernoulli_bits(_rng.stream(seed, "theta", k), params.N, params.p_c) for k in range(params.K)]
    )
    gen = _rng.stream(seed, "assign")
    if equal_sizes:
        assign = gen.permutation(np.arange(params.J) % params.K)
    else:
        assign = gen.integers(params.K, size=params.J)
    return GroundTruth(BitStack.from_bits(theta), assign, params)


def sample_dataset(gt: GroundTruth, seed: int, keep_noise: bool = False) -> Dataset:
    """Draw ``x_j = theta_{assign[j]} XOR b_j`` for every sensor.

    Each sensor's noise comes from its own stream, so vector ``j`` does not
    depend on how many other vectors are generated or in which order.
    """
    P = gt.params
    noise = np.stack(
        [bernoulli_bits(_rng.stream(seed, "noise", j), P.N, P.p) for j in range(P.J)]
    )
    x = gt.theta.to_bits()[gt.assign] ^ noise
    return Dataset(BitStack.from_bits(x), BitStack.from_bits(noise) if keep_noise else None)


def compress_stack(xs: BitStack, code: LdpcCode) -> BitStack:
    if xs.length != code.N:
        raise UsageError(f"vector length {xs.length} != code length N={code.N}")
    return BitStack.from_bits(transpose_mul_bits(code.H, xs.to_bits()))


def compress(ds: Dataset, code: LdpcCode) -> CompressedDataset:
    return CompressedDataset(compress_stack(ds.x, code), code.code_id)


def compressed_centroids(gt: GroundTruth, code: LdpcCode) -> BitStack:
    """``psi_k = H^T theta_k`` for every cluster."""
    return compress_stack(gt.theta, code)


# -- raw snapshots ---------------------------------------------------------

MAGIC = b"CDKMBITS"
_HEADER = struct.Struct("<8sII")


def dumps_stack(stack: BitStack) -> bytes:
    """16-byte header (magic, row count, row length) then rows of packed bits."""
    body = np.packbits(stack.to_bits(), axis=-1, bitorder="little")
    return _HEADER.pack(MAGIC, len(stack), stack.length) + body.tobytes()


def loads_stack(data: bytes) -> BitStack:
    if len(data) < _HEADER.size:
        raise UsageError("truncated bit snapshot header")
    magic, rows, length = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise UsageError(f"bad snapshot magic {magic!r}")
    row_bytes = (length + 7) // 8
    body = np.frombuffer(data, dtype=np.uint8, offset=_HEADER.size)
    if body.size != rows * row_bytes:
        raise UsageError(f"snapshot body has {body.size} bytes, expected {rows * row_bytes}")
    bits = np.unpackbits(body.reshape(rows, row_bytes), axis=-1, count=length, bitorder="little")
    return BitStack.from_bits(bits)


def save_stack(stack: BitStack, sink) -> None:
    data = dumps_stack(stack)
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "wb") as fh:
            fh.write(data)
    else:
        sink.write(data)


def load_stack(source) -> BitStack:
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            return loads_stack(fh.read())
    return loads_stack(source.read())
