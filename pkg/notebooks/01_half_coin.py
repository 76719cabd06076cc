# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Half a coin
#
# A fair coin has pgf (1 + s)/2.  Its square root is a formal power series
# whose coefficients alternate in sign after the first two, so "half a coin"
# is a signed distribution.  Two independent copies add up to a real coin.

# %%
import math

import numpy as np

from quasiprob.core import PowerSeries
from quasiprob.series import (
    binomial_pgf,
    catalan,
    factorization_check,
    halfcoin_coeffs,
    series_mul,
    series_sqrt,
)

# %%
half = halfcoin_coeffs(16)
print(np.round(half.coeffs[:8], 6))
print("mass", half.coeffs.sum(), "negative weights", int(np.sum(half.coeffs < 0)))

# %% [markdown]
# The tail is governed by the Catalan numbers: for k >= 1 the coefficient is
# (-1)^(k+1) C_(k-1) / (2^(2k-1) sqrt 2).

# %%
k = np.arange(1, 9)
closed = [(-1) ** (j + 1) * catalan(j - 1) / (2 ** (2 * j - 1) * math.sqrt(2)) for j in k]
print(np.max(np.abs(half.coeffs[1:9] - closed)))

# %%
coin = series_mul(half, half)
print(np.round(coin.coeffs[:4], 15))

# %% [markdown]
# The same square root from Newton iteration on the series, without the
# closed form, and the factorization report for coin = half * half.

# %%
newton = series_sqrt(binomial_pgf(1, 0.5, 16))
print(np.max(np.abs(newton.coeffs - half.coeffs)))
rep = factorization_check(half, half, binomial_pgf(1, 0.5, 16))
print(rep)
