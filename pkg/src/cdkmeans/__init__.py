"""K-means clustering of binary sensor data directly on LDPC syndromes."""

from .exceptions import AlistParseError, ConstructionError, UnsupportedSizeError, UsageError
from .gf2 import BitStack, BitVector, SparseBinaryMatrix, hamming_distance, transpose_mul, xor
from .kmeans import KMeansConfig, KMeansResult, KMeansState, run
from .ldpc import LdpcCode, build_peg, girth, load_alist, save_alist
from .source import (
    CompressedDataset,
    Dataset,
    GroundTruth,
    SourceParams,
    compress,
    sample_dataset,
    sample_ground_truth,
)

__version__ = "0.1.0"

__all__ = [
    "AlistParseError",
    "BitStack",
    "BitVector",
    "CompressedDataset",
    "ConstructionError",
    "Dataset",
    "GroundTruth",
    "KMeansConfig",
    "KMeansResult",
    "KMeansState",
    "LdpcCode",
    "SourceParams",
    "SparseBinaryMatrix",
    "UnsupportedSizeError",
    "UsageError",
    "build_peg",
    "compress",
    "girth",
    "hamming_distance",
    "load_alist",
    "run",
    "sample_dataset",
    "sample_ground_truth",
    "save_alist",
    "transpose_mul",
    "xor",
]
