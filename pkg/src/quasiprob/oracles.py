"""Independent reference computations used to cross-check the library.

Each oracle reaches its answer by a different route from the code it
checks: finite differences instead of series, exact rationals instead of
floats, direct quadrature instead of FFTs.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy import integrate as _integrate
from scipy.linalg import solve_banded
from scipy.special import sici

from .core import halfline_quad

__all__ = [
    "crank_nicolson_rod",
    "exact_cauchy_product",
    "exact_halfcoin_square",
    "wigner_point",
    "marginal_likelihood_quad",
    "linnik1_density",
    "cauchy_density",
    "laplace_density",
    "bn_laplace_transform",
]


def crank_nicolson_rod(f: Callable, t: float, M: int = 512, dt: float = 1e-4):
    """Heat equation u_t = u_xx on [0, pi] with u = 0 at both ends.

    Returns ``(x, u)`` on the M+1 nodes.  ``f`` is evaluated at the nodes,
    so jumps should be given their midpoint value there.
    """
    x = np.linspace(0.0, math.pi, M + 1)
    h = math.pi / M
    steps = int(round(t / dt))
    if abs(steps * dt - t) > 1e-12:
        raise ValueError("t must be a whole number of time steps")
    u = np.asarray(f(x), dtype=float)[1:-1].copy()
    n = M - 1
    r = dt / h**2
    ab = np.zeros((3, n))
    ab[0, 1:] = -0.5 * r
    ab[1] = 1.0 + r
    ab[2, :-1] = -0.5 * r
    for _ in range(steps):
        rhs = (1.0 - r) * u
        rhs[1:] += 0.5 * r * u[:-1]
        rhs[:-1] += 0.5 * r * u[1:]
        u = solve_banded((1, 1), ab, rhs)
    return x, np.r_[0.0, u, 0.0]


def exact_cauchy_product(a: Sequence[Fraction], b: Sequence[Fraction], order: int) -> list[Fraction]:
    """Truncated product of two series with rational coefficients."""
    out = []
    for k in range(order + 1):
        s = Fraction(0)
        for i in range(k + 1):
            if i < len(a) and k - i < len(b):
                s += a[i] * b[k - i]
        out.append(s)
    return out


def exact_halfcoin_square(order: int) -> list[Fraction]:
    """Square of the series sum binom(1/2, k) s^k, exactly; times 1/2 it is the fair coin."""
    c = [Fraction(1)]
    # binom(1/2, k) by the ratio binom(1/2, k) / binom(1/2, k-1) = (3/2 - k) / k
    for k in range(1, order + 1):
        c.append(c[-1] * (Fraction(3, 2) - k) / k)
    return exact_cauchy_product(c, c, order)


def wigner_point(psi: Callable, x: float, p: float, limit: float = 20.0) -> float:
    """(1/pi) int psi(x+y) conj(psi(x-y)) exp(-2i y p) dy by adaptive quadrature."""

    def re(y):
        return (psi(x + y) * np.conj(psi(x - y)) * np.exp(-2j * y * p)).real

    val, _ = _integrate.quad(re, -limit, limit, epsabs=1e-13, epsrel=1e-12, limit=400)
    return val / math.pi


def marginal_likelihood_quad(prior_pdf: Callable, lik: Callable, y: float) -> float:
    """m(y) = int f(y | z) p(z) dz over z > 0."""
    val, _ = halfline_quad(lambda z: float(lik(y, z)) * float(prior_pdf(z)))
    return val


def linnik1_density(x):
    """Linnik alpha = 1: (1/pi) [-Ci(|x|) cos x - (Si(|x|) - pi/2) sin|x|]."""
    x = np.abs(np.asarray(x, dtype=float))
    si, ci = sici(x)
    return (-ci * np.cos(x) - (si - 0.5 * math.pi) * np.sin(x)) / math.pi


def cauchy_density(x):
    x = np.asarray(x, dtype=float)
    return 1.0 / (math.pi * (1.0 + x * x))


def laplace_density(x):
    return 0.5 * np.exp(-np.abs(np.asarray(x, dtype=float)))


def bn_laplace_transform(delta: float, t: float, u_min: float = 0.02) -> float:
    """int_0^inf e^{-t u} b(u) du for the alternating-series density b.

    Below ``u_min`` the series cancels to rounding noise while the density
    itself is of order exp(-pi^2 / (2u)) (its theta-function dual form), so
    that piece is dropped.
    """
    from .series import bn_mixing_density

    def g(u):
        return math.exp(-t * u) * bn_mixing_density(delta, u)[0]

    head, _ = _integrate.quad(g, u_min, 1.0, epsabs=1e-14, epsrel=1e-12, limit=200)
    tail, _ = halfline_quad(lambda v: g(1.0 + v))
    return head + tail
