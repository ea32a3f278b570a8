import itertools

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from cdkmeans import rng
from cdkmeans.exceptions import UsageError
from cdkmeans.gf2 import BitStack, BitVector
from cdkmeans.kmeans import (
    KMeansConfig,
    KMeansState,
    _kmeanspp_indices,
    assign_step,
    kmeanspp_init,
    objective,
    random_init,
    run,
    update_step,
)
from cdkmeans.ldpc import build_peg
from cdkmeans.source import (
    CompressedDataset,
    SourceParams,
    compress,
    compressed_centroids,
    sample_dataset,
    sample_ground_truth,
)


def stack(rows):
    return BitStack.from_bits(np.array(rows, dtype=np.uint8))


def random_stack(seed, J, M, prob=0.5):
    return BitStack.from_bits((np.random.default_rng(seed).random((J, M)) < prob).astype(np.uint8))


def brute_objective(bits, psi_bits, assign):
    return int(sum((bits[j] != psi_bits[assign[j]]).sum() for j in range(len(bits))))


# -- objective -------------------------------------------------------------


def test_objective_examples():
    U = stack([[1, 0, 1, 0]])
    assert objective(U, KMeansState(stack([[0, 1, 1, 0]]), [0])) == 2
    U = stack([[1, 1, 0], [0, 0, 1]])
    assert objective(U, KMeansState(U, [0, 1])) == 0


def test_objective_accepts_compressed_dataset():
    U = stack([[1, 0, 1, 0]])
    assert objective(CompressedDataset(U, "x"), KMeansState(stack([[0, 1, 1, 0]]), [0])) == 2
    with pytest.raises(UsageError):
        objective(np.zeros((1, 4)), KMeansState(U, [0]))


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1), st.permutations(range(4)))
def test_objective_relabel_symmetry(seed, perm):
    U = random_stack(seed, 15, 20)
    psi = random_stack(seed + 1, 4, 20)
    assign = np.random.default_rng(seed).integers(0, 4, 15)
    base = objective(U, KMeansState(psi, assign))
    assert base == brute_objective(U.to_bits(), psi.to_bits(), assign)
    inv = np.argsort(perm)
    # new label l holds old centroid perm[l]; old label a becomes inv[a]
    assert objective(U, KMeansState(psi.take(perm), inv[assign])) == base


def test_state_sizes():
    s = KMeansState(stack([[0], [1], [1]]), [0, 2, 2, 0, 2])
    assert list(s.cluster_sizes) == [2, 0, 3]
    assert s.cluster_sizes.sum() == 5
    with pytest.raises(UsageError):
        KMeansState(stack([[0], [1]]), [0, 2])


# -- assignment step -------------------------------------------------------


def test_assign_step_examples():
    psi = stack([[0, 0, 0, 0], [1, 1, 1, 1], [1, 0, 1, 0]])
    assert list(assign_step(stack([[1, 0, 1, 0]]), psi)) == [2]
    # equidistant from centroids 0 and 1: smallest index wins
    assert list(assign_step(stack([[1, 1, 0, 0]]), psi.take([0, 1]))) == [0]
    with pytest.raises(UsageError):
        assign_step(stack([[1, 1]]), BitStack.from_bits(np.zeros((0, 2), dtype=np.uint8)))


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_assign_step_matches_brute_force(seed):
    U = random_stack(seed, 50, 16)
    psi = random_stack(seed + 7, 3, 16)
    bits, pb = U.to_bits(), psi.to_bits()
    expected = []
    for j in range(50):
        d = [int((bits[j] != pb[k]).sum()) for k in range(3)]
        expected.append(min(range(3), key=lambda k: (d[k], k)))
    got = assign_step(U, psi)
    assert list(got) == expected
    # idempotence with fixed centroids
    assert np.array_equal(assign_step(U, psi), got)


# -- centroid step ---------------------------------------------------------


def test_update_step_examples():
    U = stack([[1, 0], [1, 1], [0, 0], [1, 0], [0, 1]])
    psi = update_step(U, [0, 0, 0, 1, 1], 2)
    # cluster 0 bit 0: {1,1,0} -> 1; cluster 1 bits {1,0} and {0,1}: ties -> 1
    assert psi == stack([[1, 0], [1, 1]])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 9), st.integers(1, 10))
def test_update_step_is_optimal(seed, J, M):
    U = random_stack(seed, J, M)
    psi = update_step(U, np.zeros(J, dtype=np.int64), 1)
    bits = U.to_bits()
    best = min(
        int((bits != np.array(cand, dtype=np.uint8)).sum())
        for cand in itertools.product((0, 1), repeat=M)
    )
    assert int((bits != psi.to_bits()[0]).sum()) == best


def test_update_step_cluster_of_seven_m8():
    U = random_stack(42, 7, 8)
    psi = update_step(U, np.zeros(7, dtype=np.int64), 1).to_bits()[0]
    bits = U.to_bits()
    costs = {cand: int((bits != np.array(cand)).sum()) for cand in itertools.product((0, 1), repeat=8)}
    assert int((bits != psi).sum()) == min(costs.values())


def test_update_step_reseeds_empty_cluster():
    U = stack([[0, 0, 0, 0], [0, 0, 0, 1], [1, 1, 1, 1], [1, 1, 1, 0]])
    psi = update_step(U, [0, 0, 0, 0], 2)
    # the farthest member from the majority centroid 0011 (ties -> 1)
    far = max(range(4), key=lambda j: (int((U.to_bits()[j] != psi.to_bits()[0]).sum()), -j))
    assert psi[1] == U[far]
    with pytest.raises(UsageError):
        update_step(stack([[0, 1]]), [0], 2)


def test_update_step_rejects_bad_labels():
    with pytest.raises(UsageError):
        update_step(stack([[0, 1]]), [3], 2)
    with pytest.raises(UsageError):
        update_step(stack([[0, 1]]), [0, 0], 2)


# -- initialisation --------------------------------------------------------


def test_kmeanspp_k_equals_j_selects_everything():
    U = random_stack(3, 6, 40)
    assert len({tuple(r) for r in U.to_bits()}) == 6
    psi = kmeanspp_init(U, 6, seed=5)
    assert sorted(map(tuple, psi.to_bits())) == sorted(map(tuple, U.to_bits()))


def test_kmeanspp_never_picks_duplicates_of_chosen():
    U = stack([[0, 0, 0], [0, 0, 0], [0, 0, 0], [1, 1, 1]])
    for seed in range(200):
        idx = _kmeanspp_indices(U, 2, rng.stream(seed, "t"), first=0)
        assert idx == [0, 3]


def test_kmeanspp_d2_frequency():
    # distances from the first pick: 3, 1, 1, 1, so D^2 weights 9, 1, 1, 1
    U = stack(
        [
            [0, 0, 0, 0, 0, 0],
            [1, 1, 1, 0, 0, 0],
            [0, 0, 0, 1, 0, 0],
            [0, 0, 0, 0, 1, 0],
            [0, 0, 0, 0, 0, 1],
        ]
    )
    n = 100_000
    hits = sum(_kmeanspp_indices(U, 2, rng.stream(s, "kmeans++"), first=0)[1] == 1 for s in range(n))
    assert abs(hits / n - 0.75) <= 0.01


def test_kmeanspp_deterministic_and_errors():
    U = random_stack(1, 30, 50)
    assert kmeanspp_init(U, 4, 9) == kmeanspp_init(U, 4, 9)
    with pytest.raises(UsageError):
        kmeanspp_init(U, 31, 0)
    with pytest.raises(UsageError):
        random_init(U, 31, 0)


def test_random_init_prefers_distinct_values():
    U = stack([[0, 0], [0, 0], [0, 0], [1, 1], [0, 1]])
    psi = random_init(U, 3, 0)
    assert len({tuple(r) for r in psi.to_bits()}) == 3
    assert len(random_init(U, 5, 0)) == 5


# -- driver ----------------------------------------------------------------


def noiseless_instance(K=4, J=40, seed=0):
    code = build_peg(120, 60, 2, seed=0)
    gt = sample_ground_truth(SourceParams(J=J, N=120, K=K, p=0.0, p_c=0.3), seed)
    return compress(sample_dataset(gt, seed), code), compressed_centroids(gt, code), gt


def test_noiseless_fixed_point():
    U, psi, gt = noiseless_instance()
    assert len({tuple(r) for r in psi.to_bits()}) == 4
    res = run(U, KMeansConfig(K=4), init=psi)
    assert res.iterations_run == 1
    assert res.objective_trace == [0]
    assert np.array_equal(res.assign, gt.assign)


def test_iteration_cap():
    U = random_stack(8, 40, 30)
    res = run(U, KMeansConfig(K=3, L=1, seed=2))
    assert res.iterations_run == 1 and len(res.objective_trace) == 1
    init = kmeanspp_init(U, 3, 2)
    expected_assign = assign_step(U, init)
    assert np.array_equal(res.assign, expected_assign)
    assert res.psi == update_step(U, expected_assign, 3)


def test_run_rejects_bad_init():
    U = random_stack(8, 10, 30)
    with pytest.raises(UsageError):
        run(U, KMeansConfig(K=3), init=random_stack(0, 2, 30))


def test_run_not_below_exhaustive_partition_optimum():
    J, M = 12, 10
    U = random_stack(2024, J, M)
    bits = U.to_bits().astype(np.int64)
    best = None
    for labels in itertools.product((0, 1), repeat=J):
        lab = np.array(labels)
        cost = 0
        for k in (0, 1):
            members = bits[lab == k]
            if len(members):
                ones = members.sum(axis=0)
                cost += int(np.minimum(ones, len(members) - ones).sum())
        best = cost if best is None else min(best, cost)
    for seed in range(20):
        res = run(U, KMeansConfig(K=2, seed=seed))
        assert res.objective_trace[-1] >= best
    # the exhaustive optimum is attained by some seeded run
    assert min(run(U, KMeansConfig(K=2, seed=s, restarts=5)).objective_trace[-1] for s in range(5)) == best


@settings(max_examples=60, deadline=None)
@given(
    st.integers(0, 2**32 - 1),
    st.integers(1, 5),
    st.integers(5, 40),
    st.integers(1, 70),
    st.sampled_from(["random", "kmeans++"]),
)
def test_objective_trace_non_increasing(seed, K, J, M, init):
    assume(J >= K)
    U = random_stack(seed, J, M, prob=0.3)
    res = run(U, KMeansConfig(K=K, L=10, init=init, seed=seed))
    tr = res.objective_trace
    assert all(b <= a for a, b in zip(tr, tr[1:]))
    assert 1 <= res.iterations_run <= 10
    assert tr[-1] == objective(U, res.state)
    assert res.state.cluster_sizes.sum() == J


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.permutations(range(3)))
def test_label_permutation_equivariance(seed, perm):
    # well separated clusters so that no distance ties occur
    code = build_peg(128, 64, 2, seed=0)
    gt = sample_ground_truth(SourceParams(J=31, N=128, K=3, p=0.02, p_c=0.5), seed)
    psi_true = compressed_centroids(gt, code)
    assume(len({tuple(r) for r in psi_true.to_bits()}) == 3)
    U = compress(sample_dataset(gt, seed), code)
    init = psi_true
    d = np.sort([[int((a != b).sum()) for b in init.to_bits()] for a in U.u.to_bits()], axis=1)
    # only a tie at the minimum could make the tie rule label-dependent
    assume(np.all(d[:, 0] < d[:, 1]))
    a = run(U, KMeansConfig(K=3), init=init)
    b = run(U, KMeansConfig(K=3), init=init.take(perm))
    inv = np.argsort(perm)
    assert a.objective_trace == b.objective_trace
    assert np.array_equal(inv[a.assign], b.assign)
    assert b.psi == a.psi.take(perm)


def test_restarts_keep_best():
    U = random_stack(77, 60, 40)
    single = [run(U, KMeansConfig(K=4, seed=s)).objective_trace[-1] for s in range(1)]
    multi = run(U, KMeansConfig(K=4, seed=0, restarts=6))
    assert multi.objective_trace[-1] <= single[0]


def test_config_validation():
    for kw in (dict(K=0), dict(K=2, L=0), dict(K=2, init="bogus"), dict(K=2, restarts=0)):
        with pytest.raises(UsageError):
            KMeansConfig(**kw)


def test_bitvector_rows_work_as_input():
    U = BitStack.from_vectors([BitVector.from_string("0011"), BitVector.from_string("1100")])
    res = run(U, KMeansConfig(K=2, seed=0))
    assert res.objective_trace[-1] == 0
