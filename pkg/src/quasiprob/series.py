"""Truncated power-series algebra for (signed) probability generating functions."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import betaln, gammaln

from .core import MASS_TOL, SERIES_ORDER, PowerSeries

__all__ = [
    "ReciprocalDivergenceWarning",
    "series_mul",
    "series_reciprocal",
    "series_sqrt",
    "catalan",
    "binom_half",
    "halfcoin_coeffs",
    "binomial_pgf",
    "pg_laplace",
    "bn_mixing_density",
    "FactorizationReport",
    "factorization_check",
]


class ReciprocalDivergenceWarning(RuntimeWarning):
    """Reciprocal series coefficients grow; the truncation hides a divergence."""


def _common_order(a: PowerSeries, b: PowerSeries) -> int:
    return max(a.order, b.order)


def series_mul(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Cauchy product truncated at the common order."""
    n = _common_order(a, b)
    return PowerSeries(np.convolve(a.truncate(n).coeffs, b.truncate(n).coeffs)[: n + 1])


def series_reciprocal(a: PowerSeries, order: int | None = None) -> PowerSeries:
    """Series b with a*b = 1 up to truncation.

    Warns with :class:`ReciprocalDivergenceWarning` when |b_N| / |b_{N/2}| > 1,
    i.e. when the coefficients of the reciprocal are not summable.
    """
    n = a.order if order is None else order
    c = a.truncate(n).coeffs
    if c[0] == 0.0:
        raise ZeroDivisionError("series with zero constant term has no reciprocal")
    b = np.zeros(n + 1)
    b[0] = 1.0 / c[0]
    for k in range(1, n + 1):
        b[k] = -np.dot(c[1 : k + 1], b[k - 1 :: -1][:k]) / c[0]
    with np.errstate(over="ignore", invalid="ignore"):
        ratio = abs(b[n]) / abs(b[n // 2]) if n >= 2 and b[n // 2] != 0.0 else 0.0
    if not np.all(np.isfinite(b)):
        ratio = math.inf
    if ratio > 1.0:
        warnings.warn(
            f"reciprocal coefficients grow (|b_{n}|/|b_{n // 2}| = "
            f"{ratio:.3g}); the reciprocal is not a summable series",
            ReciprocalDivergenceWarning,
            stacklevel=2,
        )
    return PowerSeries(b)


def series_sqrt(a: PowerSeries, order: int | None = None) -> PowerSeries:
    """Square root by Newton iteration b <- (b + a/b)/2 with precision doubling."""
    n = a.order if order is None else order
    a = a.truncate(n)
    c0 = a.coeffs[0]
    if not c0 > 0.0:
        raise ValueError("series square root needs a positive constant term")
    # Exact root of the constant term when it is a perfect rational square.
    q = Fraction(c0).limit_denominator(1 << 20)
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    exact = float(q) == c0 and rn * rn == q.numerator and rd * rd == q.denominator
    b = PowerSeries([rn / rd if exact else math.sqrt(c0)])
    m = 0
    while m < n:
        m = min(2 * m + 1, n)
        am = a.truncate(m)
        bm = b.truncate(m)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ReciprocalDivergenceWarning)
            q_ = series_mul(am, series_reciprocal(bm))
        b = PowerSeries(0.5 * (bm.coeffs + q_.coeffs))
    # One extra sweep at full order cleans up rounding from the doubling steps.
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ReciprocalDivergenceWarning)
        q_ = series_mul(a, series_reciprocal(b))
    return PowerSeries(0.5 * (b.coeffs + q_.coeffs))


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def binom_half(n: int) -> Fraction:
    """binom(1/2, n) through the Catalan numbers, exactly."""
    if n == 0:
        return Fraction(1)
    return Fraction((-1) ** (n - 1) * 2 * catalan(n - 1), 4**n)


def halfcoin_coeffs(n_max: int = SERIES_ORDER) -> PowerSeries:
    """pgf of the half-coin, sqrt(1/2 + s/2), to order ``n_max``."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    r = 1.0 / math.sqrt(2.0)
    return PowerSeries([r * float(binom_half(k)) for k in range(n_max + 1)])


def binomial_pgf(n: int, p: float, order: int = SERIES_ORDER) -> PowerSeries:
    """(q + p s)^n with q = 1 - p; negative n gives the reciprocal series.

    Any real p is accepted: p < 0 or p > 1 describes an extraordinary law.
    """
    q = 1.0 - p
    base = PowerSeries.constant(1.0, order)
    step = PowerSeries(np.r_[q, p, np.zeros(max(order - 1, 0))][: order + 1])
    for _ in range(abs(n)):
        base = series_mul(base, step)
    if n < 0:
        return series_reciprocal(base)
    return base


def pg_laplace(b: float, t, convention: str = "paper"):
    """Laplace transform E exp(-t X) of a Polya-Gamma PG(b, 0) variable.

    ``convention="paper"`` gives cosh(sqrt t)^-b; ``"half-argument"`` gives
    cosh(sqrt(t/2))^-b (the usual PG(b, 0) scaling).
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be nonnegative")
    if convention == "paper":
        u = np.sqrt(t)
    elif convention == "half-argument":
        u = np.sqrt(t / 2.0)
    else:
        raise ValueError(f"unknown convention {convention!r}")
    # cosh(u)^-b = (2 e^-u / (1 + e^-2u))^b, stable for large u
    out = np.exp(b * (math.log(2.0) - u - np.log1p(np.exp(-2.0 * u))))
    return out if out.ndim else float(out)


def _bn_coeffs(delta: float, k: np.ndarray) -> np.ndarray:
    # binom(-2d, k) = (-1)^k binom(2d + k - 1, k)
    logc = gammaln(2 * delta + k) - gammaln(k + 1) - gammaln(2 * delta)
    return (-1.0) ** k * np.exp(logc - betaln(delta, delta)) * (delta + k)


def bn_mixing_density(delta: float, u: float, K: int = 200, stop: float = 1e-14):
    """Alternating series sum_k binom(-2d, k) (d+k)/B(d,d) exp(-(d+k)^2 u / 2).

    Summation stops once two successive terms fall below ``stop`` in
    magnitude, or after ``K`` terms.  Returns ``(value, tail)`` where
    ``tail`` is the magnitude of the first omitted term; an unconverged
    series at small u shows up as a large tail.
    """
    if delta <= 0 or u <= 0:
        raise ValueError("delta and u must be positive")
    if K < 1:
        raise ValueError("K must be at least 1")
    k = np.arange(K + 1, dtype=float)
    terms = _bn_coeffs(delta, k) * np.exp(-0.5 * (delta + k) ** 2 * u)
    small = np.abs(terms) < stop
    run = np.flatnonzero(small[:-1] & small[1:])
    n = int(run[0]) + 2 if run.size else K
    # Fixed summation order: k = 0, 1, 2, ...
    value = float(np.cumsum(terms[:n])[-1])
    tail = float(abs(terms[n])) if n <= K else 0.0
    return value, tail


@dataclass(frozen=True)
class FactorizationReport:
    residual: float
    f_ordinary: bool
    g_ordinary: bool
    h_ordinary: bool

    @property
    def is_fundamental_example(self) -> bool:
        """True when g and h are ordinary pgfs, as the factorization theorem requires."""
        return self.g_ordinary and self.h_ordinary


def factorization_check(f: PowerSeries, g: PowerSeries, h: PowerSeries,
                        tol: float = MASS_TOL) -> FactorizationReport:
    """Residual of f*g = h and the ordinariness of each factor."""
    n = max(f.order, g.order, h.order)
    prod = series_mul(f.truncate(n), g.truncate(n))
    res = float(np.max(np.abs(prod.coeffs - h.truncate(n).coeffs)))
    return FactorizationReport(res, f.is_ordinary(tol), g.is_ordinary(tol), h.is_ordinary(tol))
