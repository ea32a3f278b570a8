"""Regular LDPC parity-check matrices: PEG construction, girth, alist I/O.

The parity-check matrix ``H`` is ``N x M``: rows are variable nodes (source
bits) and columns are check nodes (syndrome bits).  Compression of a source
vector ``x`` is ``H^T x``.
"""

from __future__ import annotations

import hashlib
import io
import logging
import math
import os
from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import rng as _rng
from .exceptions import AlistParseError, ConstructionError, UsageError
from .gf2 import SparseBinaryMatrix

log = logging.getLogger(__name__)

MAX_PEG_ATTEMPTS = 16


@dataclass(frozen=True)
class LdpcCode:
    """A regular ``(d_v, d_c)`` LDPC code given by its parity-check matrix."""

    H: SparseBinaryMatrix

    def __post_init__(self):
        H = self.H
        if H.n_rows == 0 or H.n_cols == 0:
            raise UsageError("empty parity-check matrix")
        rw = H.row_weights()
        cw = H.col_weights()
        if rw.min() != rw.max():
            raise UsageError(f"row weights not constant: {rw.min()}..{rw.max()}")
        if cw.min() != cw.max():
            raise UsageError(f"column weights not constant: {cw.min()}..{cw.max()}")
        if rw[0] < 1:
            raise UsageError("rows of H must hold at least one 1")

    @property
    def N(self) -> int:
        return self.H.n_rows

    @property
    def M(self) -> int:
        return self.H.n_cols

    @property
    def d_v(self) -> int:
        return len(self.H.row_support[0])

    @property
    def d_c(self) -> int:
        return len(self.H.col_support[0])

    @property
    def rate(self) -> float:
        return self.M / self.N

    @cached_property
    def code_id(self) -> str:
        """Short content hash, stable across runs and platforms."""
        h = hashlib.blake2b(digest_size=6)
        h.update(f"{self.N} {self.M}".encode())
        for col in self.H.col_support:
            h.update(np.asarray(col, dtype="<i4").tobytes())
            h.update(b";")
        return f"ldpc-{self.N}x{self.M}-{self.d_v}-{self.d_c}-{h.hexdigest()}"

    def girth(self) -> float:
        return girth(self.H)


def build_peg(N: int, M: int, d_v: int, seed: int = 0) -> LdpcCode:
    """Build a regular ``(d_v, N*d_v/M)`` code by Progressive Edge Growth.

    Edges are placed variable by variable.  Each new edge goes to a check node
    that still has spare degree and is as far as possible from the variable in
    the current Tanner graph (unreached counts as infinitely far).  Ties go to
    the check with the lowest current degree, then to a seeded random choice.
    Check degrees are capped at ``d_c``, which forces exact regularity.  A
    variable that cannot be connected restarts the construction with a new
    derived stream, up to ``MAX_PEG_ATTEMPTS`` times.

    Raises
    ------
    ConstructionError
        If the degree constraints are infeasible or every attempt fails.
    """
    if min(N, M, d_v) < 1:
        raise ConstructionError(f"N, M, d_v must be positive, got {(N, M, d_v)}")
    if d_v < 2:
        raise ConstructionError(f"d_v must be at least 2, got {d_v}")
    if M >= N:
        raise ConstructionError(f"need M < N, got M={M}, N={N}")
    if (N * d_v) % M:
        raise ConstructionError(f"N*d_v = {N * d_v} is not divisible by M = {M}")
    if d_v > M:
        raise ConstructionError(f"d_v = {d_v} exceeds the number of check nodes M = {M}")
    d_c = N * d_v // M
    if d_c >= N:
        raise ConstructionError(f"check degree d_c = {d_c} must be below N = {N}")

    for attempt in range(MAX_PEG_ATTEMPTS):
        gen = _rng.stream(seed, "peg", N, M, d_v, attempt)
        cols = _peg_attempt(N, M, d_v, d_c, gen)
        if cols is not None:
            code = LdpcCode(SparseBinaryMatrix(N, M, tuple(tuple(sorted(c)) for c in cols)))
            log.debug("PEG (%d, %d, %d) built on attempt %d", N, M, d_v, attempt)
            return code
        log.debug("PEG (%d, %d, %d) attempt %d stuck, restarting", N, M, d_v, attempt)
    raise ConstructionError(
        f"PEG failed for N={N}, M={M}, d_v={d_v} after {MAX_PEG_ATTEMPTS} attempts"
    )


def _peg_attempt(N, M, d_v, d_c, gen: np.random.Generator):
    var_adj: list[list[int]] = [[] for _ in range(N)]
    chk_adj: list[list[int]] = [[] for _ in range(M)]
    deg = np.zeros(M, dtype=np.int64)

    for v in range(N):
        for _ in range(d_v):
            open_ = deg < d_c
            open_[var_adj[v]] = False
            if not open_.any():
                return None
            if var_adj[v]:
                depth = _check_depths(v, var_adj, chk_adj, M)
                unreached = open_ & (depth < 0)
                if unreached.any():
                    cand = unreached
                else:
                    far = depth[open_].max()
                    cand = open_ & (depth == far)
            else:
                cand = open_
            idx = np.flatnonzero(cand)
            low = idx[deg[idx] == deg[idx].min()]
            c = int(low[gen.integers(low.size)]) if low.size > 1 else int(low[0])
            var_adj[v].append(c)
            chk_adj[c].append(v)
            deg[c] += 1
    return chk_adj


def _check_depths(v, var_adj, chk_adj, M) -> np.ndarray:
    """BFS depth of every check node from variable ``v`` (-1 if unreached)."""
    depth = np.full(M, -1, dtype=np.int64)
    seen_var = {v}
    frontier = list(var_adj[v])
    for c in frontier:
        depth[c] = 0
    level = 0
    while frontier:
        level += 1
        nxt = []
        for c in frontier:
            for w in chk_adj[c]:
                if w in seen_var:
                    continue
                seen_var.add(w)
                for c2 in var_adj[w]:
                    if depth[c2] < 0:
                        depth[c2] = level
                        nxt.append(c2)
        frontier = nxt
    return depth


def girth(H) -> float:
    """Length of the shortest cycle in the Tanner graph, or ``math.inf``.

    Accepts an :class:`LdpcCode` or a :class:`SparseBinaryMatrix`.
    """
    if isinstance(H, LdpcCode):
        H = H.H
    n, m = H.n_rows, H.n_cols
    # nodes 0..n-1 are variables, n..n+m-1 checks
    adj = [[n + c for c in row] for row in H.row_support]
    adj += [list(col) for col in H.col_support]

    best = math.inf
    for s in range(n):
        if not adj[s]:
            continue
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u]:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


# -- alist ---------------------------------------------------------------


def dumps_alist(code: LdpcCode) -> str:
    H = code.H
    rows, cols = H.row_support, H.col_support
    max_r = max(len(r) for r in rows)
    max_c = max(len(c) for c in cols)

    def padded(idx, width):
        vals = [i + 1 for i in idx] + [0] * (width - len(idx))
        return " ".join(map(str, vals))

    lines = [
        f"{H.n_rows} {H.n_cols}",
        f"{max_r} {max_c}",
        " ".join(str(len(r)) for r in rows),
        " ".join(str(len(c)) for c in cols),
    ]
    lines += [padded(r, max_r) for r in rows]
    lines += [padded(c, max_c) for c in cols]
    return "\n".join(lines) + "\n"


def save_alist(code: LdpcCode, sink) -> None:
    """Write ``code`` in alist format to a path or a text stream."""
    text = dumps_alist(code)
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sink.write(text)


def load_alist(source) -> LdpcCode:
    """Read an alist file from a path or a text stream."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="ascii") as fh:
            return loads_alist(fh.read())
    return loads_alist(source.read())


def _ints(line: str, lineno: int) -> list[int]:
    try:
        return [int(t) for t in line.split()]
    except ValueError:
        raise AlistParseError(f"non-integer token in {line.strip()!r}", lineno) from None


def loads_alist(text: str) -> LdpcCode:
    lines = [(i + 1, ln) for i, ln in enumerate(io.StringIO(text).read().splitlines())]
    lines = [(i, ln) for i, ln in lines if ln.strip()]
    if len(lines) < 4:
        raise AlistParseError("truncated header", len(lines) + 1)

    def take(k, expect=None):
        lineno, ln = lines[k]
        vals = _ints(ln, lineno)
        if expect is not None and len(vals) != expect:
            raise AlistParseError(f"expected {expect} values, found {len(vals)}", lineno)
        return lineno, vals

    _, (n, m) = take(0, 2)
    _, (max_r, max_c) = take(1, 2)
    if n < 1 or m < 1:
        raise AlistParseError(f"dimensions must be positive, got {n} {m}", lines[0][0])
    _, row_w = take(2, n)
    _, col_w = take(3, m)
    if len(lines) < 4 + n + m:
        raise AlistParseError(
            f"expected {n} + {m} index lines, found {len(lines) - 4}", lines[-1][0]
        )
    if max(row_w) != max_r:
        raise AlistParseError(f"max row weight {max_r} != largest listed {max(row_w)}", lines[1][0])
    if max(col_w) != max_c:
        raise AlistParseError(f"max column weight {max_c} != largest listed {max(col_w)}", lines[1][0])

    def index_lists(start, count, weights, bound, kind):
        out = []
        for k in range(count):
            lineno, vals = take(start + k)
            nz = [v for v in vals if v != 0]
            if len(nz) != weights[k]:
                raise AlistParseError(
                    f"{kind} {k + 1} declares weight {weights[k]} but lists {len(nz)} indices",
                    lineno,
                )
            if any(v < 0 or v > bound for v in nz):
                raise AlistParseError(f"index out of range 1..{bound}", lineno)
            if len(set(nz)) != len(nz):
                raise AlistParseError("repeated index", lineno)
            out.append(sorted(v - 1 for v in nz))
        return out

    rows = index_lists(4, n, row_w, m, "row")
    cols = index_lists(4 + n, m, col_w, n, "column")

    from_rows = {(r, c) for r, cs in enumerate(rows) for c in cs}
    from_cols = {(r, c) for c, rs in enumerate(cols) for r in rs}
    if from_rows != from_cols:
        r, c = min(from_rows ^ from_cols)
        raise AlistParseError(
            f"row and column lists disagree on entry ({r + 1}, {c + 1})",
            lines[4 + r][0] if (r, c) in from_rows else lines[4 + n + c][0],
        )
    try:
        return LdpcCode(SparseBinaryMatrix(n, m, tuple(tuple(c) for c in cols)))
    except UsageError as exc:
        raise AlistParseError(str(exc)) from None
