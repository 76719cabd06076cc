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
# # Signed Bayes and the absorbing rod

# %%
import math

import numpy as np

from quasiprob import oracles
from quasiprob.quasibayes import (
    ExpLikelihood,
    SignedMixturePrior,
    bump_coeffs,
    bump_initial,
    feynman_table,
    signed_posterior,
    total_probability,
)

# %% [markdown]
# Feynman's table has a negative conditional probability and one above 1,
# yet the marginal is an ordinary distribution.

# %%
print(total_probability(feynman_table()).as_dict())

# %% [markdown]
# The prior 2 e^(-z) - 2 e^(-2z) is a density even though one weight is
# negative.  Updating each exponential component separately reweights it.

# %%
prior = SignedMixturePrior.exponential([1.0, 2.0], [2.0, -1.0])
post, m = signed_posterior(prior, ExpLikelihood(), 1.0)
print(m, 5 / 18, post.weights)
z = np.linspace(0, 10, 6)
print(post.pdf(z))

# %% [markdown]
# A bump of heat in a rod with absorbing ends: the sine coefficients change
# sign, the solution stays nonnegative and its mass drains away.

# %%
sol = bump_coeffs(256)
print(np.round(sol.coeffs[:6], 4))
for t in (0.01, 0.1, 1.0):
    print(t, sol.mass(t))
x, u = oracles.crank_nicolson_rod(bump_initial, 0.1)
print("against Crank-Nicolson", np.max(np.abs(sol(x, 0.1) - u)))
