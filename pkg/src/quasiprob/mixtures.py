"""Scale mixtures of normals with ordinary and signed mixing measures.

Mixing measures are stored in the variance parameterization, so the
mixture density is the integral of (2 pi v)^-1/2 exp(-x^2 / 2v) dF(v) and
its characteristic function the integral of exp(-v t^2 / 2) dF(v).
Families written in precision t = 1/v are converted when built.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate as _integrate

from .core import MASS_TOL, CharFn, GridDensity, SignedMixingMeasure, adaptive_oscillatory_quad
from .transforms import invert_charfn, invert_charfn_at

__all__ = [
    "ExtraordinaryWarning",
    "SMNFamily",
    "smn_density",
    "smn_charfn",
    "normal_mixing",
    "laplace_mixing",
    "cauchy_mixing",
    "quartic_mixing",
    "quartic_density",
    "quartic_charfn",
    "positive_stable_pdf",
    "exp_power_mixing",
    "linnik_charfn",
    "linnik_grid",
    "linnik_density",
    "MultivariateQuarticReport",
    "multivariate_quartic_check",
    "gneiting_product",
    "catalog",
]

SQRT2PI = math.sqrt(2.0 * math.pi)


class ExtraordinaryWarning(UserWarning):
    """The requested law needs a signed (extraordinary) mixing measure."""


@dataclass(frozen=True)
class SMNFamily:
    name: str
    mixing: SignedMixingMeasure
    density_closed_form: Callable | None = None
    charfn_closed_form: Callable | None = None

    def density(self, x):
        if self.density_closed_form is not None:
            return self.density_closed_form(x)
        return smn_density(self.mixing, x)

    def charfn(self, t):
        if self.charfn_closed_form is not None:
            return self.charfn_closed_form(t)
        return smn_charfn(self.mixing, t)


def _vectorize(fn, z):
    z = np.asarray(z, dtype=float)
    out = np.array([fn(float(zi)) for zi in z.ravel()]).reshape(z.shape)
    return out if out.ndim else float(out)


def smn_density(F: SignedMixingMeasure, x):
    """Normal scale mixture density at x (scalar or array)."""

    def one(xi):
        q = 0.5 * xi * xi
        return F.integrate(lambda v: math.exp(-q / v) / math.sqrt(2.0 * math.pi * v))

    return _vectorize(one, x)


def smn_charfn(F: SignedMixingMeasure, t):
    """Characteristic function of the mixture, integral of exp(-v t^2/2) dF(v)."""

    def one(ti):
        q = 0.5 * ti * ti
        return F.integrate(lambda v: math.exp(-q * v))

    return _vectorize(one, t)


# ---------------------------------------------------------------------------
# Mixing measures


def normal_mixing(variance: float = 1.0) -> SignedMixingMeasure:
    return SignedMixingMeasure.point(variance, label="normal")


def laplace_mixing() -> SignedMixingMeasure:
    """Exp(rate 1/2) variances: the mixture is the Laplace density exp(-|x|)/2."""
    return SignedMixingMeasure.density(lambda v: 0.5 * math.exp(-0.5 * v), scale=2.0,
                                       label="laplace")


def cauchy_mixing() -> SignedMixingMeasure:
    """Inverse chi-square (1 d.f.) variances: the mixture is standard Cauchy."""
    return SignedMixingMeasure.density(
        lambda v: v**-1.5 * math.exp(-0.5 / v) / SQRT2PI, scale=1.0, label="cauchy")


def quartic_mixing(theta: float = 1.0) -> SignedMixingMeasure:
    """Signed mixing with precision weight K t^-1/2 sin(theta t).

    K = sqrt(2 theta / pi) gives unit mass.  In variance form the density is
    K v^-3/2 sin(theta / v).  The mixture equals
    K (2 pi)^-1/2 4 theta / (x^4 + 4 theta^2); theta = 1 is the (4/pi)/(4 + x^4) law.
    """
    K = math.sqrt(2.0 * theta / math.pi)
    return SignedMixingMeasure.density(lambda v: K * v**-1.5 * math.sin(theta / v),
                                       oscillation=("1/v", theta), label=f"quartic({theta:g})")


def quartic_density(x):
    x = np.asarray(x, dtype=float)
    return (4.0 / math.pi) / (4.0 + x**4)


def quartic_charfn(t):
    t = np.abs(np.asarray(t, dtype=float))
    return np.exp(-t) * (np.cos(t) + np.sin(t))


def positive_stable_pdf(x: float, a: float) -> float:
    """Density of the positive stable law with Laplace transform exp(-s^a), 0 < a < 1.

    Uses the single-integral representation over theta in (0, pi) with
    A(theta) = sin(a th)^(a/(1-a)) sin((1-a) th) / sin(th)^(1/(1-a)).
    """
    if not 0 < a < 1:
        raise ValueError("index must lie in (0, 1)")
    if x <= 0:
        return 0.0
    r = 1.0 / (1.0 - a)
    lx = math.log(x)
    if -a * r * lx > 700.0:
        return 0.0
    c = math.exp(-a * r * lx)

    def g(th):
        z = np.sin(a * th) ** (a * r) * np.sin((1 - a) * th) / np.sin(th) ** r
        if not z > 0.0:
            return 0.0
        # prefactor x^-r folded into the exponent to avoid overflow at small x
        return math.exp(math.log(z) - c * z - r * lx)

    val, _ = _integrate.quad(g, 0.0, math.pi, epsabs=1e-300, epsrel=1e-12, limit=200)
    return a * r / math.pi * val


def exp_power_mixing(alpha: float) -> SignedMixingMeasure:
    """Mixing f with exp(-|t|^alpha) = integral of exp(-s t^2/2) f(s) ds.

    f is a positive stable law of index alpha/2 scaled by 2; alpha = 2 is
    an atom at 2 and alpha = 1 the inverse chi-square (Cauchy) mixing.
    """
    if not 0 < alpha <= 2:
        raise ValueError("alpha must lie in (0, 2]")
    if alpha == 2:
        return SignedMixingMeasure.point(2.0, label="exp_power(2)")
    if alpha == 1:
        F = cauchy_mixing()
        return SignedMixingMeasure.density(F.pdf, scale=1.0, label="exp_power(1)")
    a = alpha / 2.0
    # Unit mass holds exactly (the transform at t = 0) but the s^(-1-a) tail makes
    # the numerical mass check only good to ~1e-8, so it is not flagged.
    return SignedMixingMeasure.density(lambda s: 0.5 * positive_stable_pdf(0.5 * s, a),
                                       scale=2.0, normalized=False,
                                       label=f"exp_power({alpha:g})")


# ---------------------------------------------------------------------------
# Linnik


def linnik_charfn(alpha: float, t):
    """1 / (1 + |t|^alpha)."""
    if not 0 < alpha <= 4:
        raise ValueError("alpha must lie in (0, 4]")
    t = np.asarray(t, dtype=float)
    out = 1.0 / (1.0 + np.abs(t) ** alpha)
    return out if out.ndim else float(out)


def _linnik_phi(alpha: float, T: float, dt: float) -> CharFn:
    if alpha > 2:
        warnings.warn(f"alpha = {alpha:g} > 2: the Linnik charfn needs extraordinary "
                      "mixing and its inverse takes negative values", ExtraordinaryWarning,
                      stacklevel=3)
    n = int(round(T / dt))
    t = np.arange(-n, n + 1) * dt
    return CharFn(t, linnik_charfn(alpha, t))


def _linnik_tail(alpha: float, max_power: float = 4.0):
    # 1/(1 + t^a) = sum_m (-1)^m t^-(m+1)a for t > 1
    terms, m = [], 0
    while (m + 1) * alpha <= max_power or m == 0:
        terms.append(((-1.0) ** m, (m + 1) * alpha))
        m += 1
    return terms


def linnik_grid(alpha: float, T: float = 1000.0, dt: float = 0.01,
                tail: bool = False) -> GridDensity:
    """Linnik density on the FFT grid conjugate to t in [-T, T] with spacing dt."""
    phi = _linnik_phi(alpha, T, dt)
    return invert_charfn(phi, tail=_linnik_tail(alpha) if tail else None)


def linnik_density(alpha: float, x, T: float = 1000.0, dt: float = 0.05):
    """Linnik density at x by inverting 1/(1 + |t|^alpha).

    The truncated inversion integral over |t| <= T is completed with the
    power-law tail of the characteristic function.  For alpha <= 1 the
    density is infinite at x = 0 and ``inf`` is returned there.
    """
    x = np.asarray(x, dtype=float)
    tail = _linnik_tail(alpha)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        coarse = np.asarray(invert_charfn_at(_linnik_phi(alpha, T, dt), x, tail=tail))
        if alpha < 2:
            # the |t|^alpha kink at t = 0 gives a trapezoid error ~ dt^(1+alpha)
            fine = np.asarray(invert_charfn_at(_linnik_phi(alpha, T, 0.5 * dt), x, tail=tail))
            k = 2.0 ** (1.0 + alpha)
            coarse = (k * fine - coarse) / (k - 1.0)
    out = np.where((x == 0) & (alpha <= 1), np.inf, coarse)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Multivariate signed mixture


@dataclass(frozen=True)
class MultivariateQuarticReport:
    lhs: float
    rhs: float
    kappa: float
    kappa_closed_form: float

    @property
    def ratio_error(self) -> float:
        return abs(self.kappa / self.kappa_closed_form - 1.0)


def multivariate_quartic_check(n: int, C, x) -> MultivariateQuarticReport:
    """Integral of N(x; 0, C/t) t^-n/2 sin(t/2) dt against 1/(1 + (x' C^-1 x)^2).

    The two sides are proportional with kappa = 2 (2 pi)^-n/2 det(C)^-1/2.
    At x = 0 the left side is an Abel/Euler-summed integral.
    """
    C = np.atleast_2d(np.asarray(C, dtype=float))
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if not 1 <= n <= 3 or C.shape != (n, n) or x.shape != (n,):
        raise ValueError("need 1 <= n <= 3 with C of shape (n, n) and x of length n")
    if not np.allclose(C, C.T):
        raise ValueError("C must be symmetric")
    L = np.linalg.cholesky(C)
    z = np.linalg.solve(L, x)
    q = float(z @ z)
    det = float(np.prod(np.diag(L)) ** 2)
    norm = (2.0 * math.pi) ** (-n / 2) * det**-0.5

    def integrand(t):
        # N(x; 0, C/t) = norm t^(n/2) exp(-t q / 2); times t^-n/2 sin(t/2)
        return norm * math.exp(-0.5 * t * q) * math.sin(0.5 * t)

    lhs, _ = adaptive_oscillatory_quad(integrand, lambda k: 2.0 * math.pi * k)
    rhs = 1.0 / (1.0 + q * q)
    return MultivariateQuarticReport(lhs, rhs, lhs / rhs, 2.0 * norm)


# ---------------------------------------------------------------------------
# Uncertainty product of dual pairs


def _second_moment(f, L):
    val, _ = _integrate.quad(lambda z: z * z * float(f(z)), 0.0, L, epsabs=1e-13,
                             epsrel=1e-11, limit=1000)
    return 2.0 * val


def _moment_or_inf(f, L0, growth_tol):
    m1, m2, m4 = (_second_moment(f, L0 * k) for k in (1, 2, 4))
    inc_hi, inc_lo = m4 - m2, m2 - m1
    if inc_hi > growth_tol * max(1.0, abs(m2)) and inc_hi >= 0.75 * inc_lo:
        return math.inf
    return m4


def gneiting_product(family: SMNFamily, L0: float = 50.0, growth_tol: float = 1e-6,
                     probe=None) -> float:
    """sigma_p * sigma_dual for a density and its dual phi_p / (2 pi p(0)).

    Second moments are integrated over [-L, L] for L = L0, 2 L0, 4 L0; a
    moment still growing (without decelerating) is divergent and the
    product is ``math.inf``.  Raises ValueError when the dual takes negative
    values, since its spread is then not a standard deviation.
    """
    if probe is None:
        probe = np.linspace(0.0, 4 * L0, 4001)
    phi_probe = np.asarray(family.charfn(probe), dtype=float)
    if np.any(phi_probe < -MASS_TOL):
        raise ValueError(f"dual of {family.name} is signed; the uncertainty product "
                         "is not defined")
    var_p = _moment_or_inf(family.density, L0, growth_tol)
    var_phi = _moment_or_inf(family.charfn, L0, growth_tol)
    if math.isinf(var_p) or math.isinf(var_phi):
        return math.inf
    mass_phi, _ = _integrate.quad(lambda t: float(family.charfn(t)), 0.0, 4 * L0,
                                  epsabs=1e-13, epsrel=1e-11, limit=1000)
    return math.sqrt(var_p * var_phi / (2.0 * mass_phi))


# ---------------------------------------------------------------------------
# Catalog


def _normal_pdf(x, var=1.0):
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * x * x / var) / math.sqrt(2.0 * math.pi * var)


def catalog() -> dict[str, SMNFamily]:
    """Normal scale mixtures with closed forms used across checks and the CLI."""
    return {
        "normal": SMNFamily("normal", normal_mixing(), _normal_pdf,
                            lambda t: np.exp(-0.5 * np.asarray(t, dtype=float) ** 2)),
        "laplace": SMNFamily("laplace", laplace_mixing(),
                             lambda x: 0.5 * np.exp(-np.abs(np.asarray(x, dtype=float))),
                             lambda t: 1.0 / (1.0 + np.asarray(t, dtype=float) ** 2)),
        "cauchy": SMNFamily("cauchy", cauchy_mixing(),
                            lambda x: 1.0 / (math.pi * (1.0 + np.asarray(x, dtype=float) ** 2)),
                            lambda t: np.exp(-np.abs(np.asarray(t, dtype=float)))),
        "normal_mixture": SMNFamily(
            "normal_mixture", SignedMixingMeasure.atoms([1.0, 4.0], [0.5, 0.5],
                                                        label="normal_mixture"),
            lambda x: 0.5 * _normal_pdf(x) + 0.5 * _normal_pdf(x, 4.0),
            lambda t: 0.5 * np.exp(-0.5 * np.asarray(t, dtype=float) ** 2)
            + 0.5 * np.exp(-2.0 * np.asarray(t, dtype=float) ** 2)),
        "quartic": SMNFamily("quartic", quartic_mixing(), quartic_density, quartic_charfn),
    }
