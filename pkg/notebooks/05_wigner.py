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
# # Wigner functions
#
# The Wigner function of a pure state has the position and momentum
# densities as marginals but dips below zero for every non-Gaussian state.

# %%
import math

from quasiprob.wigner import (
    gaussian_state,
    hermite1_state,
    hudson_check,
    squeezed_state,
    uncertainty_product,
    wigner_transform,
)

# %%
for name, psi in [("gaussian", gaussian_state()), ("hermite1", hermite1_state()),
                  ("squeezed 2", squeezed_state(2.0))]:
    W = wigner_transform(psi)
    rep = hudson_check(W)
    print(f"{name:10s} min {rep.min_value:+.6f} at {rep.location} "
          f"product {uncertainty_product(W):.6f} mass {W.mass():.12f}")

# %%
W = wigner_transform(hermite1_state())
print(W.at(0, 0) * math.pi)
