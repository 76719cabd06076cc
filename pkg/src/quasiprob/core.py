"""Domain types and numerical primitives shared across the package.

Every signed object carries an explicit ``normalized`` flag.  Constructors
check the mass of flagged objects and raise instead of silently
renormalizing; :func:`renormalize` is the one place where rescaling happens.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy import integrate as _integrate

__all__ = [
    "MASS_TOL",
    "SERIES_ORDER",
    "GRID_POINTS",
    "ConvergenceError",
    "MassError",
    "SignedPMF",
    "PowerSeries",
    "GridDensity",
    "CharFn",
    "SignedMixingMeasure",
    "ConditionalTable",
    "uniform_grid",
    "integrate",
    "halfline_quad",
    "adaptive_oscillatory_quad",
    "renormalize",
    "format_float",
    "IdentityReport",
]

MASS_TOL = 1e-8
SERIES_ORDER = 64
GRID_POINTS = 4097

_UNIFORM_RTOL = 1e-9


class ConvergenceError(RuntimeError):
    """A quadrature or series failed to converge within its budget."""


class MassError(ValueError):
    """A ``normalized`` object does not carry unit mass."""


def format_float(value: float) -> str:
    """Round-trippable, bit-stable float text (17 significant digits)."""
    return f"{float(value):.17g}"


# ---------------------------------------------------------------------------
# Discrete objects


@dataclass(frozen=True)
class SignedPMF:
    """Atoms at integer indices with real, possibly negative, weights."""

    indices: np.ndarray
    weights: np.ndarray
    tol: float = MASS_TOL

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        w = np.asarray(self.weights, dtype=float)
        if idx.shape != w.shape or idx.ndim != 1:
            raise ValueError("indices and weights must be 1-d arrays of equal length")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        if len(np.unique(idx)) != len(idx):
            raise ValueError("duplicate atom index")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "weights", w)
        if abs(w.sum() - 1.0) > self.tol:
            raise MassError(f"weights sum to {w.sum()!r}, not 1")

    @classmethod
    def from_weights(cls, weights: Sequence[float], start: int = 0, tol: float = MASS_TOL):
        w = np.asarray(weights, dtype=float)
        return cls(np.arange(start, start + len(w)), w, tol)

    @property
    def mass(self) -> float:
        return float(self.weights.sum())

    @property
    def total_variation(self) -> float:
        return float(np.abs(self.weights).sum())

    def is_ordinary(self, tol: float | None = None) -> bool:
        tol = self.tol if tol is None else tol
        return bool(np.all(self.weights >= -tol))

    def as_dict(self) -> dict[int, float]:
        return {int(i): float(w) for i, w in zip(self.indices, self.weights)}


@dataclass(frozen=True)
class PowerSeries:
    """Truncated series c_0 + c_1 s + ... + c_N s^N."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float, ndmin=1)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a non-empty 1-d array")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def constant(cls, value: float, order: int = 0) -> PowerSeries:
        c = np.zeros(order + 1)
        c[0] = value
        return cls(c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __len__(self) -> int:
        return self.coeffs.size

    def __getitem__(self, k):
        return self.coeffs[k]

    def __call__(self, s):
        # Horner from the top keeps the summation order fixed.
        s = np.asarray(s, dtype=float)
        out = np.zeros_like(s)
        for c in self.coeffs[::-1]:
            out = out * s + c
        return out if out.ndim else float(out)

    def mass(self) -> float:
        """Value at s = 1 (partial sum of the coefficients)."""
        return float(self(1.0))

    def truncate(self, order: int) -> PowerSeries:
        c = np.zeros(order + 1)
        n = min(order, self.order) + 1
        c[:n] = self.coeffs[:n]
        return PowerSeries(c)

    def to_pmf(self, tol: float = MASS_TOL) -> SignedPMF:
        return SignedPMF.from_weights(self.coeffs, tol=tol)

    def is_ordinary(self, tol: float = MASS_TOL) -> bool:
        return bool(np.all(self.coeffs >= -tol))

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "coefficient"])
        for k, c in enumerate(self.coeffs):
            w.writerow([k, format_float(c)])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_csv(cls, path) -> PowerSeries:
        rows = list(csv.DictReader(io.StringIO(Path(path).read_text())))
        c = np.zeros(max(int(r["index"]) for r in rows) + 1)
        for r in rows:
            c[int(r["index"])] = float(r["coefficient"])
        return cls(c)


# ---------------------------------------------------------------------------
# Grid objects


def uniform_grid(half_width: float, n: int = GRID_POINTS) -> np.ndarray:
    """Symmetric uniform grid on [-half_width, half_width]; odd n keeps 0 on it."""
    return np.linspace(-half_width, half_width, n)


def _check_uniform(x: np.ndarray, name: str) -> float:
    if x.ndim != 1 or x.size < 2:
        raise ValueError(f"{name} must be a 1-d grid with at least two points")
    d = np.diff(x)
    h = (x[-1] - x[0]) / (x.size - 1)
    if h <= 0 or np.any(d <= 0):
        raise ValueError(f"{name} must be strictly increasing")
    if np.max(np.abs(d - h)) > _UNIFORM_RTOL * abs(h) * max(1.0, x.size / 1e4):
        raise ValueError(f"{name} is not uniformly spaced")
    return float(h)


def _trapezoid(values: np.ndarray, h: float):
    return h * (values.sum() - 0.5 * (values[0] + values[-1]))


@dataclass(frozen=True)
class GridDensity:
    """Signed (or complex) function sampled on a uniform grid."""

    x: np.ndarray
    values: np.ndarray
    normalized: bool = False
    tol: float = MASS_TOL

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        v = np.asarray(self.values)
        v = v.astype(complex if np.iscomplexobj(v) else float)
        if x.shape != v.shape:
            raise ValueError("grid and values differ in shape")
        _check_uniform(x, "grid")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "values", v)
        if self.normalized:
            m = self.mass()
            if abs(m - 1.0) > self.tol:
                raise MassError(f"grid density flagged normalized has mass {m!r}")

    @property
    def spacing(self) -> float:
        return float((self.x[-1] - self.x[0]) / (self.x.size - 1))

    def mass(self):
        return integrate(self)

    def __call__(self, x):
        """Linear interpolation, zero outside the grid."""
        if np.iscomplexobj(self.values):
            re = np.interp(x, self.x, self.values.real, left=0.0, right=0.0)
            im = np.interp(x, self.x, self.values.imag, left=0.0, right=0.0)
            return re + 1j * im
        return np.interp(x, self.x, self.values, left=0.0, right=0.0)

    def value_at_zero(self) -> float:
        i = int(np.argmin(np.abs(self.x)))
        if abs(self.x[i]) > 1e-9 * self.spacing:
            return float(np.real(self(0.0)))
        return float(np.real(self.values[i]))

    def moment(self, k: int):
        return _trapezoid(self.x**k * self.values, self.spacing)

    def to_csv(self, path=None) -> str:
        return _grid_to_csv(self.x, self.values, path)

    def to_json(self, path=None) -> str:
        return _grid_to_json(self.x, self.values, self.normalized, path)

    @classmethod
    def from_csv(cls, path, normalized: bool = False) -> GridDensity:
        x, v = _grid_from_csv(path)
        return cls(x, v, normalized)

    @classmethod
    def from_json(cls, path) -> GridDensity:
        x, v, norm = _grid_from_json(path)
        return cls(x, v, norm)


@dataclass(frozen=True)
class CharFn:
    """Complex characteristic function on a uniform frequency grid."""

    t: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if t.shape != v.shape:
            raise ValueError("grid and values differ in shape")
        _check_uniform(t, "frequency grid")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "values", v)

    @property
    def spacing(self) -> float:
        return float((self.t[-1] - self.t[0]) / (self.t.size - 1))

    def at_zero(self) -> complex:
        i = int(np.argmin(np.abs(self.t)))
        return complex(self.values[i])

    def __call__(self, t):
        re = np.interp(t, self.t, self.values.real, left=0.0, right=0.0)
        im = np.interp(t, self.t, self.values.imag, left=0.0, right=0.0)
        return re + 1j * im

    def hermitian_residual(self) -> float:
        """max |phi(-t) - conj(phi(t))| over grid points whose mirror is on the grid."""
        h = self.spacing
        k = np.rint(self.t / h).astype(np.int64)
        if np.max(np.abs(self.t - k * h)) > 1e-6 * h:
            raise ValueError("frequency grid is not aligned with t = 0")
        pos = {int(kk): i for i, kk in enumerate(k)}
        pairs = [(i, pos[-int(kk)]) for i, kk in enumerate(k) if -int(kk) in pos]
        i, j = np.array(pairs).T
        return float(np.max(np.abs(self.values[j] - np.conj(self.values[i]))))

    def to_csv(self, path=None) -> str:
        return _grid_to_csv(self.t, self.values, path)

    def to_json(self, path=None) -> str:
        return _grid_to_json(self.t, self.values, None, path)

    @classmethod
    def from_csv(cls, path) -> CharFn:
        return cls(*_grid_from_csv(path))

    @classmethod
    def from_json(cls, path) -> CharFn:
        t, v, _ = _grid_from_json(path)
        return cls(t, v)


def _grid_to_csv(x, values, path=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cplx = np.iscomplexobj(values)
    w.writerow(["abscissa", "value", "imag"] if cplx else ["abscissa", "value"])
    for xi, vi in zip(x, values):
        row = [format_float(xi), format_float(np.real(vi))]
        if cplx:
            row.append(format_float(np.imag(vi)))
        w.writerow(row)
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def _grid_from_csv(path):
    rows = list(csv.reader(io.StringIO(Path(path).read_text())))
    header, body = rows[0], np.array(rows[1:], dtype=float)
    x = body[:, 0]
    v = body[:, 1] + 1j * body[:, 2] if "imag" in header else body[:, 1]
    return x, v


def _grid_to_json(x, values, normalized, path=None) -> str:
    doc = {"grid": [float(a) for a in x]}
    if np.iscomplexobj(values):
        doc["values"] = [float(a) for a in np.real(values)]
        doc["imag"] = [float(a) for a in np.imag(values)]
    else:
        doc["values"] = [float(a) for a in values]
    if normalized is not None:
        doc["normalized"] = bool(normalized)
    text = json.dumps(doc)
    if path is not None:
        Path(path).write_text(text)
    return text


def _grid_from_json(path):
    doc = json.loads(Path(path).read_text())
    v = np.asarray(doc["values"], dtype=float)
    if "imag" in doc:
        v = v + 1j * np.asarray(doc["imag"], dtype=float)
    return np.asarray(doc["grid"], dtype=float), v, bool(doc.get("normalized", False))


def integrate(d: GridDensity):
    """Trapezoid-rule integral of a grid density (complex values allowed)."""
    v = d.values
    out = _trapezoid(v, d.spacing)
    return complex(out) if np.iscomplexobj(v) else float(out)


def renormalize(obj):
    """Return a copy of ``obj`` rescaled to unit mass and flagged normalized."""
    if isinstance(obj, GridDensity):
        return GridDensity(obj.x, obj.values / obj.mass(), normalized=True, tol=obj.tol)
    if isinstance(obj, SignedMixingMeasure):
        return obj.scaled(1.0 / obj.total_mass(), normalized=True)
    if isinstance(obj, SignedPMF):
        return SignedPMF(obj.indices, obj.weights / obj.weights.sum(), obj.tol)
    raise TypeError(f"cannot renormalize {type(obj).__name__}")


# ---------------------------------------------------------------------------
# Quadrature


def halfline_quad(f: Callable[[float], float], scale: float = 1.0,
                  epsabs: float = 1e-13, epsrel: float = 1e-11, limit: int = 400):
    """Integral of f over (0, inf) via v = scale*u/(1-u) onto (0, 1).

    Returns (value, abserr).
    """

    def g(u):
        if u <= 0.0 or u >= 1.0:
            return 0.0
        w = 1.0 - u
        return f(scale * u / w) * scale / (w * w)

    val, err = _integrate.quad(g, 0.0, 1.0, epsabs=epsabs, epsrel=epsrel, limit=limit,
                               points=(0.5,))
    return float(val), float(err)


def _euler_average(partial: list[float], depth: int) -> float:
    m = min(depth, len(partial) - 1)
    s = np.asarray(partial[len(partial) - m - 1:], dtype=float)
    for _ in range(m):
        s = 0.5 * (s[:-1] + s[1:])
    return float(s[0])


def adaptive_oscillatory_quad(f: Callable[[float], float], zeros: Callable[[int], float],
                              epsabs: float = 1e-13, epsrel: float = 1e-11,
                              max_panels: int = 4000, min_panels: int = 6,
                              depth: int = 16):
    """Integral of an oscillatory f over [zeros(0), inf).

    ``zeros(k)`` gives the k-th breakpoint, increasing to infinity; the
    integrand should change sign (or nearly) at each one.  Panel integrals
    form an alternating series whose partial sums are accelerated by
    repeated averaging (the Euler transformation).  Conditionally or
    Abel-summable integrals such as the integral of sin t over (0, inf)
    come out at their Euler/Abel value.

    Returns (value, abserr).  Raises ConvergenceError after ``max_panels``.
    """
    partial: list[float] = []
    total = 0.0
    quad_err = 0.0
    prev = None
    hits = 0
    a = float(zeros(0))
    for k in range(1, max_panels + 1):
        b = float(zeros(k))
        # Convergence is judged on the accelerated series; panel-level
        # roundoff warnings carry no extra information.
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", _integrate.IntegrationWarning)
            val, err = _integrate.quad(f, a, b, epsabs=epsabs * 1e-2,
                                       epsrel=max(epsrel * 1e-2, 1e-14), limit=200)
        total += val
        quad_err += err
        partial.append(total)
        a = b
        est = _euler_average(partial, depth)
        if prev is not None:
            delta = abs(est - prev)
            if delta <= max(epsabs, epsrel * abs(est)):
                hits += 1
                if hits >= 2 and k >= min_panels:
                    return est, delta + quad_err
            else:
                hits = 0
        prev = est
    raise ConvergenceError(
        f"oscillatory quadrature did not converge within {max_panels} panels"
    )


# ---------------------------------------------------------------------------
# Mixing measures on (0, inf)


@dataclass(frozen=True)
class SignedMixingMeasure:
    """Signed measure on (0, inf): atoms, a density, or a sampled grid.

    ``oscillation`` marks a density carrying a sine factor: ``("v", w)``
    for sin(w v) and ``("1/v", w)`` for sin(w / v).  Integrals against such
    densities go through :func:`adaptive_oscillatory_quad`, in the variable
    where the sine zeros are equally spaced.
    """

    kind: str
    locations: np.ndarray | None = None
    weights: np.ndarray | None = None
    pdf: Callable[[float], float] | None = None
    oscillation: tuple[str, float] | None = None
    scale: float = 1.0
    normalized: bool = False
    tol: float = MASS_TOL
    label: str = ""
    _mass: float | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind in ("atoms", "grid"):
            loc = np.asarray(self.locations, dtype=float)
            w = np.asarray(self.weights, dtype=float)
            if loc.shape != w.shape or loc.ndim != 1:
                raise ValueError("locations and weights must be 1-d arrays of equal length")
            if np.any(loc <= 0):
                raise ValueError("mixing measure support must lie in (0, inf)")
            if self.kind == "grid":
                _check_uniform(loc, "mixing grid")
            object.__setattr__(self, "locations", loc)
            object.__setattr__(self, "weights", w)
        elif self.kind == "density":
            if self.pdf is None:
                raise ValueError("density measure needs a pdf")
            if self.oscillation is not None and self.oscillation[0] not in ("v", "1/v"):
                raise ValueError("oscillation variable must be 'v' or '1/v'")
        else:
            raise ValueError(f"unknown measure kind {self.kind!r}")
        if self.normalized:
            m = self.total_mass()
            if abs(m - 1.0) > self.tol:
                raise MassError(f"{self.label or 'measure'} flagged normalized has mass {m!r}")

    # constructors

    @classmethod
    def atoms(cls, locations, weights, normalized: bool = True, label: str = ""):
        return cls("atoms", locations=locations, weights=weights,
                   normalized=normalized, label=label)

    @classmethod
    def point(cls, location: float = 1.0, label: str = ""):
        return cls.atoms([location], [1.0], label=label)

    @classmethod
    def density(cls, pdf, oscillation=None, scale: float = 1.0,
                normalized: bool = True, label: str = ""):
        return cls("density", pdf=pdf, oscillation=oscillation, scale=scale,
                   normalized=normalized, label=label)

    @classmethod
    def from_grid(cls, v, values, normalized: bool = False, label: str = ""):
        return cls("grid", locations=v, weights=values, normalized=normalized, label=label)

    # queries

    def is_ordinary(self, probe=None, tol: float = MASS_TOL) -> bool:
        if self.kind != "density":
            return bool(np.all(self.weights >= -tol))
        if probe is None:
            probe = np.geomspace(1e-3, 1e3, 2049) * self.scale
        vals = np.array([self.pdf(v) for v in probe])
        return bool(np.all(vals >= -tol))

    def __call__(self, v):
        if self.kind == "density":
            return np.vectorize(self.pdf, otypes=[float])(v)
        if self.kind == "grid":
            return np.interp(v, self.locations, self.weights, left=0.0, right=0.0)
        raise TypeError("atomic measure has no density")

    def integrate(self, g: Callable[[float], float], epsabs: float = 1e-13,
                  epsrel: float = 1e-11) -> float:
        """Signed integral of g(v) dF(v)."""
        if self.kind == "atoms":
            return float(sum(w * g(v) for v, w in zip(self.locations, self.weights)))
        if self.kind == "grid":
            vals = np.array([g(v) for v in self.locations]) * self.weights
            return float(_trapezoid(vals, (self.locations[-1] - self.locations[0])
                                    / (self.locations.size - 1)))
        f = self.pdf
        if self.oscillation is None:
            return halfline_quad(lambda v: g(v) * f(v), scale=self.scale,
                                 epsabs=epsabs, epsrel=epsrel)[0]
        var, w = self.oscillation
        step = math.pi / w
        if var == "v":
            return adaptive_oscillatory_quad(lambda v: g(v) * f(v), lambda k: k * step,
                                             epsabs=epsabs, epsrel=epsrel)[0]

        # sin(w/v): integrate in precision t = 1/v where the zeros are k*pi/w.
        def h(t):
            if t <= 0.0:
                return 0.0
            v = 1.0 / t
            return g(v) * f(v) * v * v

        return adaptive_oscillatory_quad(h, lambda k: k * step,
                                         epsabs=epsabs, epsrel=epsrel)[0]

    def total_mass(self) -> float:
        if self._mass is None:
            object.__setattr__(self, "_mass", self.integrate(lambda v: 1.0))
        return self._mass

    def scaled(self, c: float, normalized: bool = False) -> SignedMixingMeasure:
        if self.kind == "density":
            f = self.pdf
            return SignedMixingMeasure.density(lambda v: c * f(v), self.oscillation,
                                               self.scale, normalized, self.label)
        return SignedMixingMeasure(self.kind, self.locations, c * self.weights,
                                   normalized=normalized, label=self.label)


# ---------------------------------------------------------------------------
# Conditional tables


@dataclass(frozen=True)
class ConditionalTable:
    """Signed conditional probabilities p(state | condition) with base rates."""

    states: tuple
    conditions: tuple
    entries: np.ndarray  # shape (len(states), len(conditions))
    base: np.ndarray
    tol: float = MASS_TOL

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=float)
        b = np.asarray(self.base, dtype=float)
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "conditions", tuple(self.conditions))
        if e.shape != (len(self.states), len(self.conditions)):
            raise ValueError(f"entries have shape {e.shape}, expected "
                             f"({len(self.states)}, {len(self.conditions)})")
        if b.shape != (len(self.conditions),):
            raise ValueError("one base rate per condition required")
        if not (np.all(np.isfinite(e)) and np.all(np.isfinite(b))):
            raise ValueError("table entries must be finite")
        if np.any(b < 0):
            raise ValueError("base rates must be nonnegative")
        if abs(b.sum() - 1.0) > self.tol:
            raise MassError(f"base rates sum to {b.sum()!r}")
        cols = e.sum(axis=0)
        bad = np.flatnonzero(np.abs(cols - 1.0) > self.tol)
        if bad.size:
            raise MassError(f"column {self.conditions[bad[0]]!r} sums to {cols[bad[0]]!r}")
        object.__setattr__(self, "entries", e)
        object.__setattr__(self, "base", b)

    def is_ordinary(self) -> bool:
        return bool(np.all(self.entries >= -self.tol))


@dataclass(frozen=True)
class IdentityReport:
    """Both sides of a numerical identity."""

    name: str
    lhs: float
    rhs: float

    @property
    def abs_err(self) -> float:
        return abs(self.lhs - self.rhs)

    def holds(self, tol: float) -> bool:
        return self.abs_err <= tol
