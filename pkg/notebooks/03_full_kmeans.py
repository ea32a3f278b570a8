# %% [markdown]
# The whole pipeline: sample, compress, cluster syndromes, match labels.
#
#     python3 notebooks/03_full_kmeans.py

# %%
import numpy as np

from cdkmeans.harness import match_labels
from cdkmeans.kmeans import KMeansConfig, KMeansState, objective, run
from cdkmeans.ldpc import build_peg
from cdkmeans.source import SourceParams, compress, compressed_centroids, sample_dataset, sample_ground_truth

code = build_peg(1000, 500, 2, seed=0)
params = SourceParams(J=200, N=1000, K=4, p=0.1, p_c=0.1)

# %%
gt = sample_ground_truth(params, seed=3)
U = compress(sample_dataset(gt, seed=3), code)
res = run(U, KMeansConfig(K=4, L=10, seed=3))
perm, miss = match_labels(gt.assign, res.assign, 4)
print("trace", res.objective_trace, "mismatches", miss, "sizes", np.bincount(gt.assign))

# %%
# a single K-means++ start sometimes lands in a local minimum: two true
# clusters merged and another one split.  Compare with the true partition.
bad = []
for s in range(40):
    gt = sample_ground_truth(params, s)
    U = compress(sample_dataset(gt, s), code)
    res = run(U, KMeansConfig(K=4, seed=s))
    if match_labels(gt.assign, res.assign, 4)[1]:
        truth = objective(U, KMeansState(compressed_centroids(gt, code), gt.assign))
        bad.append((s, res.objective_trace[-1], truth))
print("failed seeds (seed, found objective, objective at truth):", bad)

# %%
# restarts pick the lowest final objective and remove those failures
for s, _, _ in bad:
    gt = sample_ground_truth(params, s)
    U = compress(sample_dataset(gt, s), code)
    res = run(U, KMeansConfig(K=4, seed=s, restarts=5))
    print(s, match_labels(gt.assign, res.assign, 4)[1])
