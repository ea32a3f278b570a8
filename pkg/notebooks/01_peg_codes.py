# %% [markdown]
# Building the two experiment codes with PEG and checking what we got.
#
#     python3 notebooks/01_peg_codes.py

# %%
import numpy as np

from cdkmeans.ldpc import build_peg, dumps_alist, loads_alist

# %%
codes = {M: build_peg(1000, M, 2, seed=0) for M in (250, 500)}
for M, code in codes.items():
    print(code.code_id, "rate", code.rate, "d_c", code.d_c, "girth", code.girth())

# %%
# row and column weight histograms should be point masses
for M, code in codes.items():
    print(M, np.bincount(code.H.row_weights()), np.bincount(code.H.col_weights()))

# %%
# alist round trip, and what the first lines look like
code = codes[500]
text = dumps_alist(code)
print(text.splitlines()[:2])
assert loads_alist(text).H.col_support == code.H.col_support

# %%
# larger d_v at the same rate shortens the girth
for d_v in (2, 3, 4):
    c = build_peg(1000, 500, d_v, seed=0)
    print("d_v", d_v, "d_c", c.d_c, "girth", c.girth())
