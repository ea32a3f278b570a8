import io
import math
from collections import deque
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cdkmeans.exceptions import AlistParseError, ConstructionError, UsageError
from cdkmeans.gf2 import SparseBinaryMatrix
from cdkmeans.ldpc import (
    LdpcCode,
    build_peg,
    dumps_alist,
    girth,
    load_alist,
    loads_alist,
    save_alist,
)

DATA = Path(__file__).parent / "data"


def shortest_cycle_by_edge_removal(dense):
    """Girth oracle: for each edge (v, c), shortest v-c path avoiding that edge, plus one."""
    n, m = dense.shape
    adj = {("v", i): set() for i in range(n)} | {("c", j): set() for j in range(m)}
    for i, j in zip(*np.nonzero(dense)):
        adj[("v", i)].add(("c", j))
        adj[("c", j)].add(("v", i))
    best = math.inf
    for i, j in zip(*np.nonzero(dense)):
        a, b = ("v", i), ("c", j)
        dist = {a: 0}
        q = deque([a])
        while q:
            x = q.popleft()
            for y in adj[x]:
                if {x, y} == {a, b} or y in dist:
                    continue
                dist[y] = dist[x] + 1
                q.append(y)
        if b in dist:
            best = min(best, dist[b] + 1)
    return best


def assert_regular(code, d_v, d_c):
    assert set(code.H.row_weights()) == {d_v}
    assert set(code.H.col_weights()) == {d_c}
    assert code.N * code.d_v == code.M * code.d_c
    assert code.rate == code.M / code.N == code.d_v / code.d_c


def test_peg_small_example():
    code = build_peg(8, 4, 2, seed=0)
    assert (code.d_v, code.d_c) == (2, 4)
    assert_regular(code, 2, 4)
    assert code.girth() >= 4


@pytest.mark.parametrize("M, d_c", [(500, 4), (250, 8)])
def test_peg_experiment_codes(M, d_c):
    code = build_peg(1000, M, 2, seed=0)
    assert_regular(code, 2, d_c)
    assert code.girth() >= 6


def test_peg_is_deterministic_and_seed_dependent():
    a = build_peg(60, 20, 3, seed=7)
    b = build_peg(60, 20, 3, seed=7)
    c = build_peg(60, 20, 3, seed=8)
    assert a.H.col_support == b.H.col_support
    assert a.code_id == b.code_id
    assert a.H.col_support != c.H.col_support


@pytest.mark.parametrize(
    "N, M, d_v",
    [
        (10, 3, 2),  # N*d_v not divisible by M
        (8, 8, 2),  # M == N
        (8, 4, 1),  # d_v < 2
        (4, 2, 2),  # d_c == N
        (0, 2, 2),
    ],
)
def test_peg_rejects_infeasible(N, M, d_v):
    with pytest.raises(ConstructionError):
        build_peg(N, M, d_v)


@settings(max_examples=25, deadline=None)
@given(
    st.sampled_from([(12, 6, 2), (20, 10, 3), (24, 8, 2), (30, 10, 3), (40, 20, 4)]),
    st.integers(0, 2**63 - 1),
)
def test_peg_regular_for_any_seed(shape, seed):
    N, M, d_v = shape
    code = build_peg(N, M, d_v, seed)
    assert_regular(code, d_v, N * d_v // M)
    # no parallel edges: supports are strictly increasing by construction
    assert all(len(set(c)) == len(c) for c in code.H.col_support)


def test_girth_examples():
    assert girth(SparseBinaryMatrix(2, 1, ((0, 1),))) == math.inf
    assert girth(SparseBinaryMatrix(2, 2, ((0, 1), (0, 1)))) == 4


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 7), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_girth_matches_edge_removal_oracle(n, m, seed):
    dense = (np.random.default_rng(seed).random((n, m)) < 0.45).astype(np.uint8)
    H = SparseBinaryMatrix.from_dense(dense)
    g = girth(H)
    assert g == shortest_cycle_by_edge_removal(dense)
    assert g == math.inf or g % 2 == 0


def test_girth_of_peg_codes_matches_oracle():
    code = build_peg(40, 20, 3, seed=1)
    assert code.girth() == shortest_cycle_by_edge_removal(code.H.to_dense())


def test_alist_roundtrip_text_and_path(tmp_path):
    code = build_peg(8, 4, 2, seed=0)
    assert loads_alist(dumps_alist(code)).H.col_support == code.H.col_support
    path = tmp_path / "c.alist"
    save_alist(code, path)
    assert load_alist(path) == code
    buf = io.StringIO()
    save_alist(code, buf)
    buf.seek(0)
    assert load_alist(buf) == code


def test_alist_roundtrip_experiment_code(tmp_path):
    code = build_peg(1000, 250, 2, seed=0)
    save_alist(code, tmp_path / "r4.alist")
    back = load_alist(tmp_path / "r4.alist")
    assert back.H.col_support == code.H.col_support
    assert back.code_id == code.code_id


def test_hand_written_fixture():
    code = load_alist(DATA / "hand_4x2.alist")
    expected = SparseBinaryMatrix(4, 2, ((0, 1), (2, 3)))
    assert code.H == expected
    assert np.array_equal(
        code.H.to_dense(), np.array([[1, 0], [1, 0], [0, 1], [0, 1]], dtype=np.uint8)
    )
    assert (code.N, code.M, code.d_v, code.d_c) == (4, 2, 1, 2)


GOOD = "4 2\n1 2\n1 1 1 1\n2 2\n1\n1\n2\n2\n1 2\n3 4\n"


def test_alist_column_weight_mismatch_names_line():
    bad = "4 2\n1 3\n1 1 1 1\n3 2\n1\n1\n2\n2\n1 2 0\n3 4 0\n"
    with pytest.raises(AlistParseError) as err:
        loads_alist(bad)
    assert err.value.line is not None
    assert f"line {err.value.line}" in str(err.value)
    # the first column list (line 9) declares weight 3 but lists 2 indices
    bad2 = "4 2\n1 3\n1 1 1 1\n3 1\n1\n1\n2\n2\n1 2\n3\n"
    with pytest.raises(AlistParseError) as err:
        loads_alist(bad2)
    assert err.value.line == 9


@pytest.mark.parametrize(
    "text, line",
    [
        (GOOD.replace("3 4\n", "3 5\n"), 10),  # index out of range
        (GOOD.replace("1 2\n3 4\n", "1 1\n3 4\n"), 9),  # repeated index
        (GOOD.replace("4 2\n1 2", "4 x\n1 2"), 1),  # non-integer
        ("4 2\n1 2\n", 3),  # truncated header
    ],
)
def test_alist_malformed(text, line):
    with pytest.raises(AlistParseError) as err:
        loads_alist(text)
    assert err.value.line == line


def test_alist_row_column_disagreement():
    text = GOOD.replace("1\n1\n2\n2\n", "1\n2\n1\n2\n")
    with pytest.raises(AlistParseError, match="disagree"):
        loads_alist(text)


def test_irregular_matrix_is_not_a_code():
    with pytest.raises(UsageError):
        LdpcCode(SparseBinaryMatrix(3, 2, ((0, 1), (1, 2))))
