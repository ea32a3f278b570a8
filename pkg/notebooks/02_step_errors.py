# %% [markdown]
# Error probability of the assignment and centroid steps: the binomial
# approximations next to Monte Carlo on the rate 1/2 code.
#
#     python3 notebooks/02_step_errors.py

# %%
from cdkmeans.harness import ExperimentConfig, run_assignment_mc, run_centroid_mc
from cdkmeans.ldpc import build_peg
from cdkmeans.source import SourceParams
from cdkmeans.theory import (
    StepErrorInputs,
    assignment_error_prob,
    assignment_error_prob_convolved,
    centroid_error_prob,
)

code = build_peg(1000, 500, 2, seed=0)
src = SourceParams(J=200, N=1000, K=4, p=0.1, p_c=0.1)

# %%
# assignment step, true compressed centroids known.  Raise trials for the
# low-p end; 1e4 only resolves rates above roughly 1e-3.
sweep = (0.12, 0.13, 0.14, 0.15, 0.16)
cfg = ExperimentConfig(source=src, code=code, trials=10_000, sweep=sweep)
print(f"{'p':>5} {'MC':>9} {'literal':>9} {'convolved':>9}")
for est in run_assignment_mc(cfg):
    inp = StepErrorInputs(M=500, K=4, d_c=4, p=est.p, p_c=0.1)
    print(f"{est.p:5.2f} {est.p_hat:9.2e} {assignment_error_prob(inp):9.2e} {assignment_error_prob_convolved(inp):9.2e}")

# %% [markdown]
# The literal q2 drops the centroid-difference flips wherever the noise bit is
# 1, which makes the rival look much closer than it is.  The convolved q2
# follows the simulation.

# %%
# centroid step with 50 correctly assigned members
cfg = ExperimentConfig(source=src, code=code, trials=500, sweep=(0.08, 0.1, 0.12, 0.14), cluster_size=50)
for est in run_centroid_mc(cfg):
    th = centroid_error_prob(StepErrorInputs(M=500, K=4, d_c=4, p=est.p, p_c=0.1, J_k=50))
    lo, hi = est.ci95
    print(f"p={est.p:.2f}  MC {est.p_hat:.2e} [{lo:.1e}, {hi:.1e}]  theory {th:.2e}")
