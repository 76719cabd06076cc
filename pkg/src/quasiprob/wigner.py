"""Wigner quasi-probability of a pure state on a phase-space grid (hbar = 1).

W(x, p) = (1/2pi) int psi(x + s/2) conj(psi(x - s/2)) exp(-i s p) ds.
With s = 2y the lag y runs over the position grid itself, so no
interpolation is needed:

    W(x_j, p) = (dx / pi) sum_k psi[j+k] conj(psi[j-k]) exp(-2i k dx p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid as _trapezoid

from .core import GridDensity

__all__ = [
    "WIGNER_POINTS",
    "WIGNER_HALF_WIDTH",
    "WignerGrid",
    "HudsonReport",
    "phase_grid",
    "gaussian_state",
    "hermite1_state",
    "squeezed_state",
    "make_state",
    "momentum_wavefunction",
    "wigner_transform",
    "hudson_check",
    "uncertainty_product",
]

WIGNER_POINTS = 1024
WIGNER_HALF_WIDTH = 8.0
NORM_TOL = 1e-8
IMAG_TOL = 1e-10


def phase_grid(half_width: float = WIGNER_HALF_WIDTH, n: int = WIGNER_POINTS) -> np.ndarray:
    """n points with spacing 2*half_width/n starting at -half_width; 0 is a node for even n."""
    h = 2.0 * half_width / n
    return (np.arange(n) - n // 2) * h


def _wave(x, values) -> GridDensity:
    return GridDensity(x, np.asarray(values, dtype=complex))


def gaussian_state(x=None, center: float = 0.0) -> GridDensity:
    """Ground state pi^-1/4 exp(-(x-a)^2/2)."""
    x = phase_grid() if x is None else np.asarray(x, dtype=float)
    return _wave(x, math.pi**-0.25 * np.exp(-0.5 * (x - center) ** 2))


def hermite1_state(x=None) -> GridDensity:
    """First excited state sqrt(2) pi^-1/4 x exp(-x^2/2)."""
    x = phase_grid() if x is None else np.asarray(x, dtype=float)
    return _wave(x, math.sqrt(2.0) * math.pi**-0.25 * x * np.exp(-0.5 * x * x))


def squeezed_state(sigma: float, x=None) -> GridDensity:
    """Gaussian with position standard deviation sigma (sigma = 1/sqrt 2 is the ground state).

    The default grid is widened to 12 sigma so the tails still vanish.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if x is None:
        x = phase_grid(max(WIGNER_HALF_WIDTH, 12.0 * sigma))
    x = np.asarray(x, dtype=float)
    amp = (2.0 * math.pi * sigma * sigma) ** -0.25
    return _wave(x, amp * np.exp(-x * x / (4.0 * sigma * sigma)))


def make_state(spec: str, x=None) -> GridDensity:
    """'gaussian', 'hermite1' or 'squeezed:SIGMA'."""
    name, _, arg = spec.partition(":")
    if name == "gaussian":
        return gaussian_state(x)
    if name == "hermite1":
        return hermite1_state(x)
    if name == "squeezed":
        if not arg:
            raise ValueError("squeezed state needs a width, e.g. squeezed:2")
        return squeezed_state(float(arg), x)
    raise ValueError(f"unknown state {spec!r}")


def momentum_wavefunction(psi: GridDensity, p) -> np.ndarray:
    """psi_hat(p) = (2 pi)^-1/2 int psi(x) exp(-i p x) dx by the trapezoid rule."""
    p = np.asarray(p, dtype=float)
    w = np.full(psi.x.size, psi.spacing)
    w[0] = w[-1] = 0.5 * psi.spacing
    return np.exp(-1j * np.multiply.outer(p, psi.x)) @ (w * psi.values) / math.sqrt(2.0 * math.pi)


def _trap(y, h, axis=-1):
    return _trapezoid(y, dx=h, axis=axis)


@dataclass(frozen=True)
class WignerGrid:
    """W on the product grid x (rows) by p (columns)."""

    x: np.ndarray
    p: np.ndarray
    values: np.ndarray
    imag_residue: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (len(self.x), len(self.p)):
            raise ValueError("values must have shape (len(x), len(p))")
        object.__setattr__(self, "values", v)

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def dp(self) -> float:
        return float(self.p[1] - self.p[0])

    def x_marginal(self) -> np.ndarray:
        return _trap(self.values, self.dp, axis=1)

    def p_marginal(self) -> np.ndarray:
        return _trap(self.values, self.dx, axis=0)

    def mass(self) -> float:
        return float(_trap(self.x_marginal(), self.dx))

    def at(self, x: float, p: float) -> float:
        i = int(np.argmin(np.abs(self.x - x)))
        j = int(np.argmin(np.abs(self.p - p)))
        return float(self.values[i, j])

    def moments(self) -> dict[str, float]:
        mx, mp = self.x_marginal(), self.p_marginal()
        ex = float(_trap(self.x * mx, self.dx))
        ep = float(_trap(self.p * mp, self.dp))
        vx = float(_trap(self.x**2 * mx, self.dx)) - ex * ex
        vp = float(_trap(self.p**2 * mp, self.dp)) - ep * ep
        return {"mean_x": ex, "mean_p": ep, "var_x": vx, "var_p": vp}


def wigner_transform(psi: GridDensity, p_grid=None, norm_tol: float = NORM_TOL,
                     imag_tol: float = IMAG_TOL) -> WignerGrid:
    """Wigner function of the sampled wavefunction ``psi`` on ``p_grid``.

    Raises ValueError when psi is not unit-norm or when the transform leaves
    an imaginary part above ``imag_tol``.
    """
    x = psi.x
    v = np.asarray(psi.values, dtype=complex)
    h = psi.spacing
    norm = float(_trap(np.abs(v) ** 2, h))
    if abs(norm - 1.0) > norm_tol:
        raise ValueError(f"wavefunction has norm {norm!r}, not 1")
    p = phase_grid() if p_grid is None else np.asarray(p_grid, dtype=float)
    n = x.size
    k = np.arange(-(n - 1), n)
    # lag matrix: L[j, k] = psi[j+k] conj(psi[j-k]), zero off the grid
    j = np.arange(n)[:, None]
    plus, minus = j + k[None, :], j - k[None, :]
    ok = (plus >= 0) & (plus < n) & (minus >= 0) & (minus < n)
    L = np.where(ok, v[np.clip(plus, 0, n - 1)] * np.conj(v[np.clip(minus, 0, n - 1)]), 0.0)
    E = np.exp(-2j * h * np.multiply.outer(k, p))
    W = (h / math.pi) * (L @ E)
    resid = float(np.max(np.abs(W.imag)))
    if resid > imag_tol:
        raise ValueError(f"Wigner transform has imaginary residue {resid:.3g}")
    return WignerGrid(x, p, W.real, resid)


@dataclass(frozen=True)
class HudsonReport:
    min_value: float
    location: tuple[float, float]
    nonnegative: bool


def hudson_check(W: WignerGrid, tol: float = 1e-10) -> HudsonReport:
    """Minimum of W and where it occurs; nonnegative iff min >= -tol."""
    i, j = np.unravel_index(int(np.argmin(W.values)), W.values.shape)
    m = float(W.values[i, j])
    return HudsonReport(m, (float(W.x[i]), float(W.p[j])), m >= -tol)


def uncertainty_product(W: WignerGrid) -> float:
    """sigma_x sigma_p from the marginals of W (bound 1/2 with hbar = 1)."""
    mom = W.moments()
    if not (mom["var_x"] > 0 and mom["var_p"] > 0):
        raise ValueError("marginal variances are not positive")
    return math.sqrt(mom["var_x"] * mom["var_p"])
