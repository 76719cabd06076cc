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
# # Signed mixing measures
#
# The density (4/pi) / (4 + x^4) is a normal scale mixture whose mixing
# measure takes both signs: in variance form it is K v^(-3/2) sin(1/v).

# %%
import numpy as np

from quasiprob import oracles
from quasiprob.mixtures import (
    gneiting_product,
    catalog,
    linnik_density,
    quartic_density,
    quartic_mixing,
    smn_density,
)

# %%
F = quartic_mixing()
v = np.geomspace(0.05, 20, 9)
print(np.round([F.pdf(vi) for vi in v], 4))
x = np.array([0.0, 0.5, 1.0, 2.0])
print(smn_density(F, x) - quartic_density(x))

# %% [markdown]
# Linnik laws have charfn 1 / (1 + |t|^alpha).  For alpha = 1 there is a
# closed form in sine and cosine integrals; alpha = 2 is Laplace.

# %%
x = np.array([0.1, 0.5, 1.0, 3.0])
print(np.max(np.abs(linnik_density(1.0, x) - oracles.linnik1_density(x))))
print(np.max(np.abs(linnik_density(2.0, x) - oracles.laplace_density(x))))
print(linnik_density(0.5, 0.0))

# %% [markdown]
# Standard deviation of a density times that of its dual.  The quartic is
# excluded: its dual is signed.

# %%
for name in ("normal", "normal_mixture", "laplace", "cauchy"):
    print(name, gneiting_product(catalog()[name]))
