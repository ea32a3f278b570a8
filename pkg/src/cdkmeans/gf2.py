"""Packed bit vectors and sparse binary matrices over GF(2).

Bits are packed little-endian into 64-bit words; bit ``i`` lives in word
``i // 64`` at position ``i % 64``.  Padding bits past ``len`` are always 0,
which lets Hamming distance be a plain popcount over whole words.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .exceptions import UsageError

WORD_BITS = 64


def _n_words(n_bits: int) -> int:
    return (n_bits + WORD_BITS - 1) // WORD_BITS


def pack_bits(bits) -> np.ndarray:
    """Pack a ``(..., n)`` array of 0/1 values into ``(..., ceil(n/64))`` uint64 words."""
    bits = np.asarray(bits)
    if bits.size and not np.isin(bits, (0, 1)).all():
        raise UsageError("bit arrays may only hold 0 and 1")
    bits = bits.astype(np.uint8, copy=False)
    n = bits.shape[-1]
    pad = _n_words(n) * WORD_BITS - n
    if pad:
        bits = np.concatenate(
            [bits, np.zeros(bits.shape[:-1] + (pad,), dtype=np.uint8)], axis=-1
        )
    packed = np.packbits(bits, axis=-1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64, copy=False)


def unpack_bits(words: np.ndarray, n_bits: int) -> np.ndarray:
    """Inverse of :func:`pack_bits`; returns a ``(..., n_bits)`` uint8 array."""
    words = np.ascontiguousarray(words, dtype="<u8")
    raw = words.view(np.uint8)
    return np.unpackbits(raw, axis=-1, count=n_bits, bitorder="little")


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


class BitVector:
    """Immutable binary vector of fixed length."""

    __slots__ = ("_words", "_len")

    def __init__(self, words: np.ndarray, length: int):
        words = np.asarray(words, dtype=np.uint64)
        if words.shape != (_n_words(length),):
            raise UsageError(
                f"{length} bits need {_n_words(length)} words, got shape {words.shape}"
            )
        tail = length % WORD_BITS
        if tail and int(words[-1]) >> tail:
            raise UsageError("padding bits beyond the vector length must be zero")
        self._words = _frozen(words)
        self._len = int(length)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitVector":
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits)
        if arr.ndim != 1:
            raise UsageError("from_bits expects a one-dimensional sequence")
        return cls(pack_bits(arr), arr.shape[0])

    @classmethod
    def from_string(cls, s: str) -> "BitVector":
        """``BitVector.from_string("0110")``; bit 0 is the leftmost character."""
        if set(s) - {"0", "1"}:
            raise UsageError(f"not a bit string: {s!r}")
        return cls.from_bits([int(c) for c in s])

    @classmethod
    def zeros(cls, length: int) -> "BitVector":
        return cls(np.zeros(_n_words(length), dtype=np.uint64), length)

    @property
    def len(self) -> int:
        return self._len

    @property
    def words(self) -> np.ndarray:
        return self._words

    def __len__(self) -> int:
        return self._len

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self._len:
            raise UsageError(f"bit index {i} out of range for length {self._len}")
        return int(self._words[i // WORD_BITS] >> np.uint64(i % WORD_BITS)) & 1

    def __iter__(self):
        return iter(int(b) for b in self.to_bits())

    def to_bits(self) -> np.ndarray:
        return unpack_bits(self._words, self._len)

    def weight(self) -> int:
        return int(np.bitwise_count(self._words).sum())

    def __xor__(self, other: "BitVector") -> "BitVector":
        return xor(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self._len == other._len and np.array_equal(self._words, other._words)

    def __hash__(self) -> int:
        return hash((self._len, self._words.tobytes()))

    def __str__(self) -> str:
        return "".join(map(str, self.to_bits()))

    def __repr__(self) -> str:
        if self._len <= 64:
            return f"BitVector('{self}')"
        return f"BitVector(len={self._len}, weight={self.weight()})"


class BitStack:
    """A stack of equal-length bit vectors stored as one ``(rows, words)`` array.

    This is the batch form of :class:`BitVector` used by the clustering code,
    where the inner loop is a distance between every vector and every centroid.
    """

    __slots__ = ("_words", "_len")

    def __init__(self, words: np.ndarray, length: int):
        words = np.asarray(words, dtype=np.uint64)
        if words.ndim != 2 or words.shape[1] != _n_words(length):
            raise UsageError(
                f"expected shape (rows, {_n_words(length)}) for {length}-bit rows, "
                f"got {words.shape}"
            )
        self._words = _frozen(words)
        self._len = int(length)

    @classmethod
    def from_bits(cls, bits) -> "BitStack":
        bits = np.asarray(bits)
        if bits.ndim != 2:
            raise UsageError("BitStack.from_bits expects a 2-D array")
        return cls(pack_bits(bits), bits.shape[1])

    @classmethod
    def from_vectors(cls, vectors: Sequence[BitVector]) -> "BitStack":
        vectors = list(vectors)
        if not vectors:
            raise UsageError("cannot infer the length of an empty stack")
        n = vectors[0].len
        if any(v.len != n for v in vectors):
            raise UsageError("all vectors in a stack must have the same length")
        return cls(np.stack([v.words for v in vectors]), n)

    @property
    def length(self) -> int:
        """Number of bits per row."""
        return self._len

    @property
    def words(self) -> np.ndarray:
        return self._words

    def __len__(self) -> int:
        return self._words.shape[0]

    def __getitem__(self, i: int) -> BitVector:
        return BitVector(self._words[i], self._len)

    def __iter__(self):
        for row in self._words:
            yield BitVector(row, self._len)

    def take(self, rows) -> "BitStack":
        return BitStack(self._words[np.asarray(rows, dtype=np.intp)], self._len)

    def to_bits(self) -> np.ndarray:
        return unpack_bits(self._words, self._len)

    def weights(self) -> np.ndarray:
        return np.bitwise_count(self._words).sum(axis=1, dtype=np.int64)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitStack):
            return NotImplemented
        return self._len == other._len and np.array_equal(self._words, other._words)

    __hash__ = None

    def __repr__(self) -> str:
        return f"BitStack(rows={len(self)}, length={self._len})"


def _check_same_len(a, b):
    if a.len != b.len:
        raise UsageError(f"length mismatch: {a.len} != {b.len}")


def xor(a: BitVector, b: BitVector) -> BitVector:
    _check_same_len(a, b)
    return BitVector(np.bitwise_xor(a.words, b.words), a.len)


def hamming_distance(a: BitVector, b: BitVector) -> int:
    _check_same_len(a, b)
    return int(np.bitwise_count(np.bitwise_xor(a.words, b.words)).sum())


def weight(v: BitVector) -> int:
    return v.weight()


def distance_matrix(a: BitStack, b: BitStack) -> np.ndarray:
    """All pairwise Hamming distances, shape ``(len(a), len(b))``."""
    if a.length != b.length:
        raise UsageError(f"length mismatch: {a.length} != {b.length}")
    diff = np.bitwise_xor(a.words[:, None, :], b.words[None, :, :])
    return np.bitwise_count(diff).sum(axis=2, dtype=np.int64)


@dataclass(frozen=True)
class SparseBinaryMatrix:
    """Binary matrix stored column by column as sorted lists of row indices."""

    n_rows: int
    n_cols: int
    col_support: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        support = tuple(tuple(int(r) for r in col) for col in self.col_support)
        object.__setattr__(self, "col_support", support)
        if self.n_rows < 0 or self.n_cols < 0:
            raise UsageError("matrix dimensions must be non-negative")
        if len(support) != self.n_cols:
            raise UsageError(f"{len(support)} column supports for {self.n_cols} columns")
        for m, col in enumerate(support):
            for prev, r in zip((-1,) + col, col):
                if r <= prev:
                    raise UsageError(f"column {m} support is not strictly increasing: {col}")
                if r >= self.n_rows:
                    raise UsageError(f"column {m} has row {r} >= n_rows={self.n_rows}")

    @classmethod
    def from_dense(cls, dense) -> "SparseBinaryMatrix":
        dense = np.asarray(dense)
        if dense.ndim != 2:
            raise UsageError("from_dense expects a 2-D array")
        cols = tuple(tuple(np.flatnonzero(dense[:, m])) for m in range(dense.shape[1]))
        return cls(dense.shape[0], dense.shape[1], cols)

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self.col_support)

    @cached_property
    def row_support(self) -> tuple[tuple[int, ...], ...]:
        rows: list[list[int]] = [[] for _ in range(self.n_rows)]
        for m, col in enumerate(self.col_support):
            for r in col:
                rows[r].append(m)
        return tuple(tuple(r) for r in rows)

    def col_weights(self) -> np.ndarray:
        return np.array([len(c) for c in self.col_support], dtype=np.int64)

    def row_weights(self) -> np.ndarray:
        w = np.zeros(self.n_rows, dtype=np.int64)
        for col in self.col_support:
            w[list(col)] += 1
        return w

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.n_rows, self.n_cols), dtype=np.uint8)
        for m, col in enumerate(self.col_support):
            dense[list(col), m] = 1
        return dense

    @cached_property
    def _csc(self):
        from scipy import sparse

        indptr = np.cumsum([0] + [len(c) for c in self.col_support])
        indices = np.fromiter((r for c in self.col_support for r in c), dtype=np.int64)
        data = np.ones(indices.shape[0], dtype=np.int32)
        return sparse.csc_matrix((data, indices, indptr), shape=(self.n_rows, self.n_cols))

    @cached_property
    def _uniform_gather(self) -> np.ndarray | None:
        # (n_cols, weight) index table when every column has the same weight
        weights = {len(c) for c in self.col_support}
        if len(weights) != 1 or 0 in weights:
            return None
        return np.array(self.col_support, dtype=np.intp)


def transpose_mul_bits(h: SparseBinaryMatrix, x) -> np.ndarray:
    """Batch ``H^T x`` over GF(2) on unpacked bits.

    ``x`` has shape ``(..., n_rows)`` with 0/1 entries; the result has shape
    ``(..., n_cols)`` and dtype uint8.
    """
    x = np.asarray(x, dtype=np.uint8)
    if x.shape[-1] != h.n_rows:
        raise UsageError(f"vector length {x.shape[-1]} != n_rows={h.n_rows}")
    gather = h._uniform_gather
    if gather is not None:
        return np.bitwise_xor.reduce(x[..., gather], axis=-1)
    lead = x.shape[:-1]
    flat = x.reshape(-1, h.n_rows)
    prod = (h._csc.T @ flat.T.astype(np.int32)).T
    return (np.asarray(prod) & 1).astype(np.uint8).reshape(lead + (h.n_cols,))


def transpose_mul(h: SparseBinaryMatrix, x: BitVector) -> BitVector:
    """Syndrome ``H^T x``: bit ``m`` is the XOR of ``x`` over column ``m``'s support."""
    if x.len != h.n_rows:
        raise UsageError(f"vector length {x.len} != n_rows={h.n_rows}")
    return BitVector(pack_bits(transpose_mul_bits(h, x.to_bits())), h.n_cols)


def transpose_mul_stack(h: SparseBinaryMatrix, xs: BitStack) -> BitStack:
    if xs.length != h.n_rows:
        raise UsageError(f"vector length {xs.length} != n_rows={h.n_rows}")
    return BitStack.from_bits(transpose_mul_bits(h, xs.to_bits()))
