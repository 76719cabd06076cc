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
# # Dual densities
#
# A symmetric density p with integrable characteristic function phi has a
# dual phi(t) / (2 pi p(0)).  Laplace and Cauchy are each other's duals; the
# normal is self-dual.

# %%
import numpy as np

from quasiprob import oracles
from quasiprob.core import GridDensity, uniform_grid
from quasiprob.mixtures import catalog
from quasiprob.transforms import completely_monotone_test, dual_density

# %%
lap = catalog()["laplace"]
x = uniform_grid(40.0, 80001)
d = dual_density(GridDensity(x, lap.density(x)))
sel = np.abs(d.x) <= 8
print("max error against Cauchy", np.max(np.abs(d.values[sel] - oracles.cauchy_density(d.x[sel]))))

# %%
nrm = catalog()["normal"]
x = uniform_grid(12.0, 4097)
d = dual_density(GridDensity(x, nrm.density(x)))
sel = np.abs(d.x) <= 6
print("normal self-duality", np.max(np.abs(d.values[sel] - nrm.density(d.x[sel]))))

# %% [markdown]
# A density is a normal scale mixture exactly when p(sqrt(2u)) is completely
# monotone in u.  The Gaussian kernel passes only the trivial orders.

# %%
print(completely_monotone_test(lambda u: lap.density(np.sqrt(2 * u))))
print(completely_monotone_test(lambda u: np.exp(-u * u)))
