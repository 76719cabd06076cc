"""Signed probability objects: half-coins, dual densities, signed normal
scale mixtures, signed Bayes updates and Wigner functions."""

from .core import (
    GRID_POINTS,
    MASS_TOL,
    SERIES_ORDER,
    CharFn,
    ConditionalTable,
    ConvergenceError,
    GridDensity,
    IdentityReport,
    MassError,
    PowerSeries,
    SignedMixingMeasure,
    SignedPMF,
    format_float,
    integrate,
    renormalize,
    uniform_grid,
)
from .mixtures import (
    ExtraordinaryWarning,
    SMNFamily,
    catalog,
    cauchy_mixing,
    exp_power_mixing,
    gneiting_product,
    laplace_mixing,
    linnik_charfn,
    linnik_density,
    linnik_grid,
    multivariate_quartic_check,
    quartic_mixing,
    smn_charfn,
    smn_density,
)
from .quasibayes import (
    SignedMixturePrior,
    SineSeriesSolution,
    evolve_and_eval,
    feynman_table,
    signed_posterior,
    sine_coeffs,
    total_probability,
)
from .series import (
    ReciprocalDivergenceWarning,
    binomial_pgf,
    factorization_check,
    halfcoin_coeffs,
    pg_laplace,
    bn_mixing_density,
    series_mul,
    series_reciprocal,
    series_sqrt,
)
from .transforms import (
    DecayError,
    charfn,
    completely_monotone_test,
    dual_density,
    dual_mixing,
    invert_charfn,
    laplace_transform,
)
from .wigner import WignerGrid, hudson_check, uncertainty_product, wigner_transform

__version__ = "0.1.0"
