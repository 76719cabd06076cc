"""Characteristic functions, Fourier inversion, dual densities and Laplace transforms.

Grid transforms are continuous Fourier integrals evaluated by FFT with the
phase of the grid origin restored.  Frequency and spatial grids are kept
odd-length and centred on zero so that even inputs give even outputs.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import fft as _fft

from .core import (
    MASS_TOL,
    CharFn,
    GridDensity,
    IdentityReport,
    SignedMixingMeasure,
    adaptive_oscillatory_quad,
)

__all__ = [
    "DecayError",
    "charfn",
    "invert_charfn",
    "invert_charfn_at",
    "cos_tail_integral",
    "dual_density",
    "dual_mixing",
    "laplace_transform",
    "phi_half",
    "phi_half_measure",
    "CMReport",
    "completely_monotone_test",
    "levy_half_identity_check",
    "cauchy_identity_check",
]

DECAY_TOL = 1e-12


class DecayError(ValueError):
    """The sampled function has not decayed at the grid ends."""


def _odd_fast_len(n: int) -> int:
    m = n | 1
    while True:
        k = m
        for p in (3, 5, 7):
            while k % p == 0:
                k //= p
        if k == 1:
            return m
        m += 2


def _trap_weights(n: int) -> np.ndarray:
    w = np.ones(n)
    w[0] = w[-1] = 0.5
    return w


def _check_decay(values, tol, what):
    if tol is None:
        return
    scale = np.max(np.abs(values))
    edge = max(abs(values[0]), abs(values[-1]))
    if scale > 0 and edge > tol * scale:
        raise DecayError(f"{what} is {edge / scale:.3g} of its peak at the grid ends "
                         f"(needs < {tol:g})")


def _centered(m: int) -> np.ndarray:
    return np.arange(m) - (m - 1) // 2


def charfn(d: GridDensity, pad: int = 4, decay_tol: float | None = DECAY_TOL) -> CharFn:
    """phi(t) = integral of exp(itx) p(x) dx on the conjugate frequency grid.

    The grid has spacing 2 pi / (M h) with M >= pad * len(x) and is centred
    on t = 0, where phi(0) equals the trapezoid mass of ``d``.
    """
    _check_decay(d.values, decay_tol, "density")
    n, h, x0 = d.x.size, d.spacing, d.x[0]
    m = _odd_fast_len(max(pad, 1) * n)
    buf = np.zeros(m, dtype=complex)
    buf[:n] = d.values * _trap_weights(n)
    k = _centered(m)
    t = 2.0 * np.pi * k / (m * h)
    # sum_j p_j exp(2 pi i j k / M) = M * ifft(p)[k mod M]
    s = _fft.ifft(buf)[k % m] * m
    return CharFn(t, h * np.exp(1j * t * x0) * s)


def cos_tail_integral(x, T: float, beta: float) -> np.ndarray:
    """Integral of cos(t x) t^-beta over [T, inf), elementwise in x.

    Infinite at x = 0 when beta <= 1.
    """
    x = np.abs(np.asarray(x, dtype=float))
    out = np.empty_like(x)
    for i, xi in np.ndenumerate(x):
        if xi == 0.0:
            out[i] = T ** (1 - beta) / (beta - 1) if beta > 1 else np.inf
            continue
        y = xi * T
        scale = xi ** (beta - 1)
        if y >= 50.0:
            # integral of e^{iu} u^-beta over [y, inf) = i e^{iy} y^-beta sum_k (beta)_k (-i/y)^k
            acc, term = 0j, 1 + 0j
            for kk in range(40):
                acc += term
                term *= (beta + kk) * (-1j / y)
                if abs(term) < 1e-17:
                    break
            out[i] = scale * (1j * np.exp(1j * y) * y ** (-beta) * acc).real
        else:
            # Panels between the zeros (m + 1/2) pi of cos u beyond y.
            m0 = math.floor(y / math.pi - 0.5) + 1
            v, _ = adaptive_oscillatory_quad(
                lambda u: math.cos(u) * u ** (-beta),
                lambda k: y if k == 0 else (m0 + k - 0.5) * math.pi,
                epsabs=1e-15, epsrel=1e-12)
            out[i] = scale * v
    return out


def _tail_terms(tail):
    if tail is None:
        return []
    if np.ndim(tail[0]) == 0:
        return [tuple(tail)]
    return [tuple(term) for term in tail]


def invert_charfn(phi: CharFn, pad: int = 1, tail=None,
                  hermitian_tol: float = 1e-8, tol: float = MASS_TOL) -> GridDensity:
    """p(x) = (1/2 pi) integral of exp(-itx) phi(t) dt on the conjugate grid.

    ``tail=(c, beta)``, or a list of such pairs, adds the contribution of
    sum c |t|^-beta beyond the end of a symmetric frequency grid, for
    characteristic functions with power-law decay.  Where that contribution diverges (x = 0, beta <= 1) it is left
    out and a warning is issued.
    """
    scale = np.max(np.abs(phi.values))
    if phi.hermitian_residual() > hermitian_tol * scale:
        raise ValueError("characteristic function is not Hermitian; density would be complex")
    n, dt, t0 = phi.t.size, phi.spacing, phi.t[0]
    m = _odd_fast_len(max(pad, 1) * n)
    buf = np.zeros(m, dtype=complex)
    buf[:n] = phi.values * _trap_weights(n)
    j = _centered(m)
    x = 2.0 * np.pi * j / (m * dt)
    s = _fft.fft(buf)[j % m]
    p = (dt / (2.0 * np.pi)) * (np.exp(-1j * t0 * x) * s).real
    terms = _tail_terms(tail)
    if terms:
        T = phi.t[-1]
        if abs(T + t0) > 1e-9 * dt:
            raise ValueError("tail correction needs a frequency grid symmetric about 0")
        corr = _tail_sum(x, T, terms)
        # Grid keeps the truncated value where the true density is infinite.
        corr[~np.isfinite(corr)] = 0.0
        p = p + corr
    d = GridDensity(x, p)
    return GridDensity(x, p, normalized=abs(d.mass() - 1.0) <= tol, tol=tol)


def _tail_sum(x, T, terms):
    corr = np.zeros_like(x)
    for c, beta in terms:
        corr = corr + (c / np.pi) * cos_tail_integral(x, T, beta)
    if not np.all(np.isfinite(corr)):
        warnings.warn("tail contribution diverges at x = 0; the density is infinite there",
                      RuntimeWarning, stacklevel=3)
    return corr


def invert_charfn_at(phi: CharFn, x, tail=None) -> np.ndarray:
    """Inversion integral of a real, even characteristic function at arbitrary x.

    Same trapezoid rule and tail term as :func:`invert_charfn`, evaluated
    directly instead of on the FFT grid.
    """
    t, dt = phi.t, phi.spacing
    if abs(t[-1] + t[0]) > 1e-9 * dt:
        raise ValueError("pointwise inversion needs a frequency grid symmetric about 0")
    if np.max(np.abs(phi.values.imag)) > 1e-12 * np.max(np.abs(phi.values)):
        raise ValueError("pointwise inversion needs a real characteristic function")
    x = np.asarray(x, dtype=float)
    keep = t >= 0
    tp, w = t[keep], phi.values.real[keep] * _trap_weights(int(keep.sum()))
    out = np.array([2.0 * dt * np.dot(w, np.cos(tp * xi)) for xi in x.ravel()]) / (2 * np.pi)
    out = out.reshape(x.shape)
    terms = _tail_terms(tail)
    if terms:
        out = out + _tail_sum(x, tp[-1], terms)
    return out if out.ndim else float(out)


def dual_density(p: GridDensity, pad: int = 4, decay_tol: float | None = DECAY_TOL,
                 imag_tol: float = 1e-8) -> GridDensity:
    """Dual density phi_p(t) / (2 pi p(0)).

    The inversion formula at 0 makes the result unit mass; it is flagged
    normalized only when the trapezoid mass confirms this to ``p.tol``.
    """
    p0 = p.value_at_zero()
    if p0 == 0.0:
        raise ValueError("p(0) = 0: the dual density is undefined")
    phi = charfn(p, pad=pad, decay_tol=decay_tol)
    if np.max(np.abs(phi.values.imag)) > imag_tol * np.max(np.abs(phi.values)):
        raise ValueError("characteristic function is not real; dual would be complex")
    d = GridDensity(phi.t, phi.values.real / (2.0 * np.pi * p0), tol=p.tol)
    if abs(d.mass() - 1.0) <= p.tol:
        d = GridDensity(d.x, d.values, normalized=True, tol=p.tol)
    return d


def _smn_at_zero(F: SignedMixingMeasure) -> float:
    return F.integrate(lambda v: 1.0 / math.sqrt(2.0 * math.pi * v))


def dual_mixing(F: SignedMixingMeasure, p0: float | None = None) -> SignedMixingMeasure:
    """Mixing measure of the dual of a normal scale mixture.

    Density form: f_dual(v) = (2 pi)^-1/2 / p0 * v^-3/2 * f(1/v), with p0 the
    primal density at 0 (computed from F when omitted).  An atom of weight w
    at v0 becomes an atom at 1/v0 of weight w / (p0 sqrt(2 pi v0)).
    """
    if p0 is None:
        p0 = _smn_at_zero(F)
    if not p0 > 0:
        raise ValueError("p(0) must be positive")
    c = 1.0 / (math.sqrt(2.0 * math.pi) * p0)
    label = f"dual({F.label})" if F.label else "dual"
    if F.kind == "atoms":
        loc = F.locations
        return SignedMixingMeasure.atoms(1.0 / loc, c * F.weights / np.sqrt(loc),
                                         normalized=F.normalized, label=label)
    if F.kind == "grid":
        v = F.locations
        vd = 1.0 / v[::-1]
        wd = c * vd ** -1.5 * F.weights[::-1]
        # 1/v is not uniform; resample onto a uniform grid spanning the same range.
        u = np.linspace(vd[0], vd[-1], v.size)
        return SignedMixingMeasure.from_grid(u, np.interp(u, vd, wd), label=label)
    f = F.pdf

    def fd(v):
        return c * v**-1.5 * f(1.0 / v)

    osc = None
    if F.oscillation is not None:
        var, w = F.oscillation
        osc = ("1/v" if var == "v" else "v", w)
    return SignedMixingMeasure.density(fd, oscillation=osc, scale=1.0 / F.scale,
                                       normalized=F.normalized, label=label)


def laplace_transform(F: SignedMixingMeasure, x: float) -> float:
    """Integral of exp(-s x) dF(s)."""
    if not x > 0:
        raise ValueError("x must be positive")
    return F.integrate(lambda s: math.exp(-s * x))


def phi_half(t):
    """One-sided stable(1/2) density (2 sqrt(pi))^-1 t^-3/2 exp(-1/(4t))."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(t > 0, t**-1.5 * np.exp(-0.25 / np.where(t > 0, t, 1.0)), 0.0)
    out = out / (2.0 * math.sqrt(math.pi))
    return out if out.ndim else float(out)


def phi_half_measure() -> SignedMixingMeasure:
    return SignedMixingMeasure.density(
        lambda t: (t**-1.5 * math.exp(-0.25 / t)) / (2.0 * math.sqrt(math.pi)),
        scale=0.25, label="phi_half")


@dataclass(frozen=True)
class CMReport:
    passed: bool
    order: int
    first_violation: tuple[float, int] | None
    tol: float

    def __bool__(self) -> bool:
        return self.passed


def completely_monotone_test(f: Callable, domain: tuple[float, float] = (0.1, 10.0),
                             order: int = 8, n: int = 2048,
                             rtol: float = 1e-7) -> CMReport:
    """Check (-1)^j Delta_h^j f >= -tol for forward differences j = 0..order.

    h = (b - a) / n and tol = rtol * max|f| on the grid.  The first violation
    is reported as (x, j) with the smallest j, then the smallest x.
    """
    a, b = domain
    if not 0 < a < b:
        raise ValueError("domain must be an interval inside (0, inf)")
    if not 0 <= order <= 10:
        raise ValueError("order must lie in 0..10")
    x = np.linspace(a, b, n + 1)
    vals = np.asarray(f(x), dtype=float)
    tol = rtol * float(np.max(np.abs(vals)))
    d = vals
    for j in range(order + 1):
        if j:
            d = np.diff(d)
        bad = np.flatnonzero((-1) ** j * d < -tol)
        if bad.size:
            return CMReport(False, order, (float(x[bad[0]]), j), tol)
    return CMReport(True, order, None, tol)


def levy_half_identity_check(t: float) -> IdentityReport:
    """(1/pi) int_0^inf e^{-tu} sin(sqrt u) du against phi_half(t)."""
    if not t > 0:
        raise ValueError("t must be positive")
    lhs, _ = adaptive_oscillatory_quad(
        lambda u: math.exp(-t * u) * math.sin(math.sqrt(u)) / math.pi,
        lambda k: (k * math.pi) ** 2)
    return IdentityReport("levy_half", lhs, phi_half(t))


def cauchy_identity_check(x: float) -> dict[str, IdentityReport]:
    """Both candidate exponential-mixture identities for 1/(1 + x^2).

    ``"sin"`` is int e^{-tx} sin t dt and ``"t^-1/2 sin"`` carries the extra
    t^-1/2 weight; only the first equals 1/(1 + x^2).
    """
    if not x > 0:
        raise ValueError("x must be positive")
    rhs = 1.0 / (1.0 + x * x)
    plain, _ = adaptive_oscillatory_quad(lambda t: math.exp(-t * x) * math.sin(t),
                                         lambda k: k * math.pi)
    weighted, _ = adaptive_oscillatory_quad(
        lambda t: math.exp(-t * x) * math.sin(t) / math.sqrt(t) if t > 0 else 0.0,
        lambda k: k * math.pi)
    return {
        "sin": IdentityReport("cauchy_sin", plain, rhs),
        "t^-1/2 sin": IdentityReport("cauchy_sqrt_sin", weighted, rhs),
    }
