# %% [markdown]
# How many bits per symbol would full joint reconstruction need?  The
# estimate sits between h(p) and h(p) + K h(p_c) / J + log2(K) / N.
#
#     python3 notebooks/04_rate.py

# %%
from cdkmeans.harness import estimate_rate_mc
from cdkmeans.source import SourceParams

for p_c, p in ((0.1, 0.1), (0.05, 0.1), (0.1, 0.05)):
    est = estimate_rate_mc(SourceParams(J=200, N=1000, K=4, p=p, p_c=p_c), 10_000, seed=0)
    print(
        f"p_c={p_c} p={p}: r_hat={est.r_hat:.4f} +- {est.stderr:.4f}  "
        f"bounds [{est.lower_bound:.4f}, {est.upper_bound:.4f}]"
    )

# %%
# compare with the syndrome rate M/N of the two codes
print("code rates: 0.25, 0.5")
