"""Signed conditional tables, Bayes rule for signed exponential mixtures, and
the absorbing-rod diffusion as a sine series with mixed-sign weights."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate as _integrate
from scipy import stats
from scipy.special import log_ndtr

from .core import MASS_TOL, ConditionalTable, SignedPMF, halfline_quad

__all__ = [
    "ExtraordinaryMarginalWarning",
    "total_probability",
    "feynman_table",
    "SignedMixturePrior",
    "Likelihood",
    "ExpLikelihood",
    "PoissonLikelihood",
    "NormalLikelihood",
    "QuadratureLikelihood",
    "signed_posterior",
    "SineSeriesSolution",
    "sine_coeffs",
    "evolve_and_eval",
    "bump_initial",
    "bump_coeffs",
    "PROBE_POINTS",
]

PROBE_POINTS = 2049


class ExtraordinaryMarginalWarning(UserWarning):
    """A marginal computed from a signed table is itself signed."""


# ---------------------------------------------------------------------------
# Law of total probability


def total_probability(tbl: ConditionalTable) -> SignedPMF:
    """Marginal p(state) = sum_c p(state | c) p(c) over the table's conditions.

    States must be integers (they become the atom indices).  A warning is
    issued when the marginal is not ordinary.
    """
    marg = [math.fsum(tbl.entries[i] * tbl.base) for i in range(len(tbl.states))]
    pmf = SignedPMF(np.asarray(tbl.states, dtype=np.int64), np.array(marg), tol=tbl.tol)
    if not pmf.is_ordinary():
        warnings.warn("marginal has negative weights", ExtraordinaryMarginalWarning, stacklevel=2)
    return pmf


def feynman_table() -> ConditionalTable:
    """Feynman's three-state table with base rates p(A) = 0.7, p(B) = 0.3."""
    return ConditionalTable(
        states=(1, 2, 3),
        conditions=("A", "B"),
        entries=np.array([[0.3, -0.4], [0.6, 1.2], [0.1, 0.2]]),
        base=np.array([0.7, 0.3]),
    )


# ---------------------------------------------------------------------------
# Signed mixtures and their conjugate updates


@dataclass(frozen=True)
class SignedMixturePrior:
    """Signed mixture sum_i w_i q_i(z) of densities on z > 0.

    ``rates`` are the exponential rates s_i the mixture was built from; the
    components are scipy frozen distributions (or anything with ``pdf`` and
    ``ppf``).  For a prior they are Exp(rate s_i); after an update they are
    the per-component posterior kernels.
    """

    rates: np.ndarray
    weights: np.ndarray
    components: tuple
    tol: float = MASS_TOL
    check: bool = True

    def __post_init__(self):
        s = np.asarray(self.rates, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "rates", s)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "components", tuple(self.components))
        if not (s.shape == w.shape == (len(self.components),)) or s.size == 0:
            raise ValueError("need one rate, weight and component per term")
        if np.any(s <= 0):
            raise ValueError("rates must be positive")
        if abs(math.fsum(w) - 1.0) > self.tol:
            raise ValueError(f"weights sum to {math.fsum(w)!r}, not 1")
        if self.check and not self.is_ordinary():
            raise ValueError("mixture density is negative somewhere on the probe grid")

    @classmethod
    def exponential(cls, rates: Sequence[float], weights: Sequence[float], **kw):
        if any(not s > 0 for s in rates):
            raise ValueError("rates must be positive")
        comps = [stats.expon(scale=1.0 / s) for s in rates]
        return cls(np.asarray(rates, float), np.asarray(weights, float), comps, **kw)

    def pdf(self, z):
        z = np.asarray(z, dtype=float)
        out = np.zeros_like(z)
        # fixed summation order over components
        for w, c in zip(self.weights, self.components):
            out = out + w * c.pdf(z)
        return out if out.ndim else float(out)

    def probe_grid(self, n: int = PROBE_POINTS) -> np.ndarray:
        upper = max(float(c.ppf(1.0 - 1e-12)) for c in self.components)
        if not math.isfinite(upper):
            upper = 40.0 / float(self.rates.min())
        return np.linspace(0.0, upper, n)

    def is_ordinary(self, n: int = PROBE_POINTS) -> bool:
        return bool(np.min(self.pdf(self.probe_grid(n))) >= -self.tol)


class Likelihood:
    """Kernel f(y | z) with evidence against the density s e^{-s z}."""

    def __call__(self, y: float, z):
        raise NotImplementedError

    def evidence(self, s: float, y: float) -> float:
        raise NotImplementedError

    def posterior_component(self, s: float, y: float):
        raise NotImplementedError


class ExpLikelihood(Likelihood):
    """f(y | z) = z e^{-z y}; conjugate to the exponential components."""

    def __call__(self, y, z):
        z = np.asarray(z, dtype=float)
        return z * np.exp(-z * y)

    def evidence(self, s, y):
        return s / (y + s) ** 2

    def posterior_component(self, s, y):
        return stats.gamma(2.0, scale=1.0 / (s + y))


class PoissonLikelihood(Likelihood):
    """Poisson count y with mean z."""

    def __call__(self, y, z):
        return stats.poisson.pmf(int(y), np.asarray(z, dtype=float))

    def evidence(self, s, y):
        y = int(y)
        return s / (1.0 + s) ** (y + 1)

    def posterior_component(self, s, y):
        return stats.gamma(int(y) + 1.0, scale=1.0 / (s + 1.0))


class NormalLikelihood(Likelihood):
    """y ~ N(z, sigma^2)."""

    def __init__(self, sigma: float = 1.0):
        if sigma <= 0:
            raise ValueError("sigma must be positive")
        self.sigma = float(sigma)

    def __call__(self, y, z):
        return stats.norm.pdf(y, loc=np.asarray(z, dtype=float), scale=self.sigma)

    def evidence(self, s, y):
        sg = self.sigma
        mu = y - s * sg * sg
        return math.exp(math.log(s) - s * y + 0.5 * (s * sg) ** 2 + log_ndtr(mu / sg))

    def posterior_component(self, s, y):
        sg = self.sigma
        mu = y - s * sg * sg
        return stats.truncnorm(-mu / sg, np.inf, loc=mu, scale=sg)


class _NumericComponent:
    """Normalized density f(y|z) s e^{-s z} / c on z > 0."""

    def __init__(self, f: Callable, s: float, c: float):
        self.f, self.s, self.c = f, s, c

    def pdf(self, z):
        z = np.asarray(z, dtype=float)
        out = np.where(z >= 0, self.f(z) * self.s * np.exp(-self.s * np.abs(z)) / self.c, 0.0)
        return out if out.ndim else float(out)

    def ppf(self, q):
        return 40.0 / self.s


class QuadratureLikelihood(Likelihood):
    """Any kernel f(y | z) given as a function of (y, z); evidence by quadrature."""

    def __init__(self, f: Callable[[float, float], float]):
        self.f = f

    def __call__(self, y, z):
        return np.vectorize(lambda zi: self.f(y, zi))(np.asarray(z, dtype=float))

    def evidence(self, s, y):
        val, _ = halfline_quad(lambda z: self.f(y, z) * s * math.exp(-s * z), scale=1.0 / s)
        return val

    def posterior_component(self, s, y):
        return _NumericComponent(lambda z: self(y, z), s, self.evidence(s, y))


def signed_posterior(prior: SignedMixturePrior, likelihood: Likelihood, y: float):
    """Reweight each exponential component by its evidence.

    Returns ``(posterior, m)`` with m(y) = sum_i w_i c_i(y) and posterior
    weights w_i c_i(y) / m(y).  Raises ValueError when m(y) <= 0, which means
    the signed prior is not admissible for this likelihood.
    """
    c = np.array([likelihood.evidence(float(s), y) for s in prior.rates])
    m = math.fsum(prior.weights * c)
    if not m > 0.0:
        raise ValueError(f"marginal likelihood m(y) = {m!r} is not positive")
    omega = prior.weights * c / m
    comps = [likelihood.posterior_component(float(s), y) for s in prior.rates]
    post = SignedMixturePrior(prior.rates, omega, comps, tol=prior.tol, check=prior.check)
    return post, m


# ---------------------------------------------------------------------------
# Absorbing rod


@dataclass(frozen=True)
class SineSeriesSolution:
    """P(x, t) = sum_n p_n sin(n x) exp(-n^2 t) on [0, pi]."""

    coeffs: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float, ndmin=1)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        if self.t < 0:
            raise ValueError("time must be nonnegative")

    @property
    def N(self) -> int:
        return self.coeffs.size

    def at(self, t: float) -> SineSeriesSolution:
        return SineSeriesSolution(self.coeffs, t)

    def __call__(self, x, t: float | None = None):
        return evolve_and_eval(self, x, self.t if t is None else t)

    def mass(self, t: float | None = None) -> float:
        """Integral of P(., t) over [0, pi]."""
        t = self.t if t is None else t
        n = np.arange(1, self.N + 1)
        w = (1.0 - np.cos(n * np.pi)) / n
        return float(np.sum(self.coeffs * w * np.exp(-(n**2) * t)))


def sine_coeffs(f: Callable[[float], float], N: int, breakpoints: Sequence[float] = ()) -> SineSeriesSolution:
    """p_n = (2/pi) int_0^pi f(x) sin(n x) dx for n = 1..N.

    Breakpoints (jumps or kinks of f inside (0, pi)) split the range so that
    each piece is smooth for the sine-weighted quadrature.
    """
    if N < 1:
        raise ValueError("N must be positive")
    edges = [0.0] + sorted(b for b in breakpoints if 0.0 < b < math.pi) + [math.pi]
    p = np.empty(N)
    for k in range(1, N + 1):
        tot = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            with warnings.catch_warnings():
                # vanishing coefficients cannot meet a relative tolerance
                warnings.simplefilter("ignore", _integrate.IntegrationWarning)
                val, _ = _integrate.quad(f, a, b, weight="sin", wvar=k, epsabs=1e-14, limit=200)
            tot += val
        p[k - 1] = 2.0 / math.pi * tot
    return SineSeriesSolution(p)


def evolve_and_eval(sol: SineSeriesSolution, x, t: float):
    if t < 0:
        raise ValueError("time must be nonnegative")
    x = np.asarray(x, dtype=float)
    n = np.arange(1, sol.N + 1)
    damp = sol.coeffs * np.exp(-(n**2) * t)
    out = np.sin(np.multiply.outer(x, n)) @ damp
    # sin(n pi) is not exactly zero in floating point; pin the absorbers
    out = np.where((x == 0.0) | (x == math.pi), 0.0, out)
    return out if out.ndim else float(out)


def bump_initial(x):
    """Unit-mass bump (2/pi) on [pi/4, 3pi/4]; the jumps sit at half height."""
    x = np.asarray(x, dtype=float)
    a, b = 0.25 * math.pi, 0.75 * math.pi
    out = np.where((x > a) & (x < b), 2.0 / math.pi, 0.0)
    out = np.where((x == a) | (x == b), 1.0 / math.pi, out)
    return out if out.ndim else float(out)


def bump_coeffs(N: int = 256) -> SineSeriesSolution:
    """Closed-form sine coefficients of :func:`bump_initial`."""
    n = np.arange(1, N + 1)
    p = 4.0 / math.pi**2 * (np.cos(n * math.pi / 4) - np.cos(3 * n * math.pi / 4)) / n
    return SineSeriesSolution(p)
