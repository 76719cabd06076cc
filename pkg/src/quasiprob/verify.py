"""Identity checks grouped into suites.

Every check compares a computed left side against a reference right side.
For equalities ``abs_err`` is the largest absolute difference; for bounds
(``relation`` ">=" or "<=") it is the amount by which the bound is
violated, zero when it holds.  A check passes when abs_err <= tol.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import binom

from . import mixtures as mx
from . import oracles
from . import quasibayes as qb
from . import series as sr
from . import transforms as tr
from . import wigner as wg
from .core import MASS_TOL, SERIES_ORDER, GridDensity, PowerSeries, uniform_grid

__all__ = ["Check", "SUITES", "run_suite", "pg_convention_report"]


@dataclass(frozen=True)
class Check:
    check: str
    lhs: object
    rhs: object
    abs_err: float
    tol: float
    relation: str = "=="

    @property
    def passed(self) -> bool:
        return bool(self.abs_err <= self.tol)

    def with_tol(self, tol: float) -> Check:
        return Check(self.check, self.lhs, self.rhs, self.abs_err, tol, self.relation)

    def as_dict(self) -> dict:
        return {"check": self.check, "lhs": _jsonable(self.lhs), "rhs": _jsonable(self.rhs),
                "abs_err": _jsonable(self.abs_err), "tol": self.tol, "pass": self.passed}


def _jsonable(v):
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(u) for u in np.asarray(v, dtype=object).ravel()]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, str):
        return v
    v = float(v)
    if math.isinf(v) or math.isnan(v):
        return repr(v)
    return v


MAX_REPORTED = 8


def _worst(a, b, d):
    # long arrays are reported at the point of largest discrepancy only
    if np.size(d) <= MAX_REPORTED:
        return a.tolist(), b.tolist()
    i = int(np.nanargmax(np.where(np.isnan(d), np.inf, d)))
    return float(a.ravel()[i]), float(np.broadcast_to(b, a.shape).ravel()[i])


def eq(name, lhs, rhs, tol) -> Check:
    a = np.asarray(lhs, dtype=float)
    b = np.asarray(rhs, dtype=float)
    both_inf = np.isinf(a) & np.isinf(b) & (np.sign(a) == np.sign(b))
    with np.errstate(invalid="ignore"):
        d = np.where(both_inf, 0.0, np.abs(a - b))
    err = float(np.max(d)) if d.size else 0.0
    if math.isnan(err):
        err = math.inf
    return Check(name, *_worst(a, b, d), err, tol)


def ge(name, lhs, bound, tol) -> Check:
    a = np.asarray(lhs, dtype=float)
    d = np.maximum(bound - a, 0.0)
    return Check(name, *_worst(a, np.asarray(bound, dtype=float), bound - a),
                 float(np.max(d)), tol, ">=")


def le(name, lhs, bound, tol) -> Check:
    a = np.asarray(lhs, dtype=float)
    d = np.maximum(a - bound, 0.0)
    return Check(name, *_worst(a, np.asarray(bound, dtype=float), a - bound),
                 float(np.max(d)), tol, "<=")


def flag(name, value: bool, expected: bool = True) -> Check:
    return Check(name, bool(value), bool(expected), 0.0 if bool(value) == expected else 1.0, 0.5)


# ---------------------------------------------------------------------------
# series


def pg_convention_report(delta: float = 1.0, ts=None) -> dict:
    """Fit b for each pg_laplace convention to the numerical Laplace transform.

    Returns the transform values, the best b and max error per convention,
    and the list of conventions consistent to 1e-6.
    """
    ts = np.linspace(0.1, 5.0, 12) if ts is None else np.asarray(ts, dtype=float)
    lt = np.array([oracles.bn_laplace_transform(delta, float(t)) for t in ts])
    out = {"t": ts.tolist(), "transform": lt.tolist(), "fits": {}}
    for conv in ("paper", "half-argument"):
        def loss(b, conv=conv):
            return float(np.max(np.abs(sr.pg_laplace(b, ts, conv) - lt)))

        res = minimize_scalar(loss, bounds=(0.01, 200.0), method="bounded",
                              options={"xatol": 1e-12})
        out["fits"][conv] = {"b": float(res.x), "max_err": loss(res.x)}
    out["consistent"] = [c for c, f in out["fits"].items() if f["max_err"] <= 1e-6]
    return out


def suite_series(order: int = SERIES_ORDER, mass_tol: float = MASS_TOL) -> list[Check]:
    out = []
    hc = sr.halfcoin_coeffs(order)
    sq = sr.series_mul(hc, hc).coeffs
    out.append(eq("halfcoin_square_c0", sq[0], 0.5, 1e-12))
    out.append(eq("halfcoin_square_c1", sq[1], 0.5, 1e-12))
    out.append(le("halfcoin_square_tail", float(np.max(np.abs(sq[2:]))), 0.0, 1e-10))
    newton = sr.series_sqrt(PowerSeries(np.r_[0.5, 0.5, np.zeros(order - 1)]))
    out.append(eq("halfcoin_catalan_vs_newton", hc.coeffs, newton.coeffs, 1e-9))
    exact = oracles.exact_halfcoin_square(min(order, 24))
    out.append(eq("halfcoin_exact_square", sq[: len(exact)],
                  [float(c / 2) for c in exact], 1e-12))
    out.append(flag("halfcoin_is_extraordinary", not hc.is_ordinary()))
    fair = PowerSeries(np.r_[0.5, 0.5, np.zeros(order - 1)])
    rep = sr.factorization_check(hc, hc, fair)
    out.append(le("halfcoin_factorization_residual", rep.residual, 0.0, 1e-10))
    out.append(flag("halfcoin_not_fundamental_example", not rep.is_fundamental_example))

    b3 = sr.binomial_pgf(1, 0.3, order)
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        r3 = sr.series_reciprocal(b3)
    delta = np.zeros(order + 1)
    delta[0] = 1.0
    out.append(eq("bartlett_reciprocal_residual", sr.series_mul(b3, r3).coeffs, delta, 1e-10))
    out.append(flag("bartlett_reciprocal_summable",
                    not any(issubclass(x.category, sr.ReciprocalDivergenceWarning) for x in w)))
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        sr.series_reciprocal(sr.binomial_pgf(1, 0.7, order))
    out.append(flag("bartlett_divergence_warning",
                    any(issubclass(x.category, sr.ReciprocalDivergenceWarning) for x in w)))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sr.ReciprocalDivergenceWarning)
        nb = sr.binomial_pgf(-3, 0.2, order)
    out.append(eq("negative_binomial_inverse",
                  sr.series_mul(nb, sr.binomial_pgf(3, 0.2, order)).coeffs, delta, 1e-10))
    out.append(eq("pgf_unit_mass", sr.binomial_pgf(5, 0.37, order).mass(), 1.0, 1e-12))

    # Catalan form against the generalized binomial coefficient
    out.append(eq("catalan_coefficients", [float(sr.binom_half(k)) for k in range(30)],
                  binom(0.5, np.arange(30)), 1e-15))

    rep = pg_convention_report()
    consistent = rep["consistent"]
    best = min(f["max_err"] for f in rep["fits"].values())
    out.append(Check("pg_convention_unique", ",".join(consistent) or "none",
                     "exactly one of paper, half-argument",
                     best if len(consistent) != 1 else 0.0, 1e-6))
    # the delta = 1/2 transform is sech(pi sqrt(2t)), the half-argument form at 4 pi^2 t
    ts = np.array([0.1, 1.0, 3.0])
    lt = [oracles.bn_laplace_transform(0.5, float(t)) for t in ts]
    out.append(eq("bn_half_is_rescaled_half_argument", lt,
                  sr.pg_laplace(1.0, 4.0 * math.pi**2 * ts, "half-argument"), 1e-9))
    x = math.pi * np.sqrt(2.0 * ts)
    lt1 = [oracles.bn_laplace_transform(1.0, float(t)) for t in ts]
    out.append(eq("bn_one_transform_closed_form", lt1, x / np.sinh(x), 1e-9))
    return out


# ---------------------------------------------------------------------------
# transforms


def _laplace_grid(h=1e-3, L=30.0):
    x = uniform_grid(L, int(round(2 * L / h)) + 1)
    # the kink at 0 puts the trapezoid mass 8e-8 above 1, so no normalized flag
    return GridDensity(x, oracles.laplace_density(x))


def suite_transforms(grid_points: int = 4097, mass_tol: float = MASS_TOL) -> list[Check]:
    out = []
    x = uniform_grid(8.0, grid_points)
    nd = GridDensity(x, np.exp(-0.5 * x * x) / math.sqrt(2 * math.pi), normalized=True)
    phi = tr.charfn(nd)
    sel = np.abs(phi.t) <= 5
    out.append(eq("normal_charfn", phi.values[sel].real, np.exp(-0.5 * phi.t[sel] ** 2), 1e-10))
    back = tr.invert_charfn(phi)
    out.append(eq("charfn_round_trip", back(x), nd.values, 1e-10))
    out.append(eq("charfn_at_zero_is_mass", phi.at_zero().real, nd.mass(), 1e-14))

    lap = _laplace_grid()
    dual = tr.dual_density(lap)
    t = dual.x[np.abs(dual.x) <= 8]
    out.append(eq("laplace_dual_is_cauchy", dual(t), oracles.cauchy_density(t), 1e-6))
    dd = tr.dual_density(dual, pad=1, decay_tol=None)
    xs = dd.x[np.abs(dd.x) <= 8]
    out.append(eq("double_dual_is_laplace", dd(xs), oracles.laplace_density(xs), 1e-6))

    for tt in (0.25, 1.0, 4.0):
        r = tr.levy_half_identity_check(tt)
        out.append(eq(f"levy_half_t{tt:g}", r.lhs, r.rhs, 1e-8))
    ph = tr.phi_half_measure()
    for xx in (1.0, 4.0, 9.0):
        out.append(eq(f"phi_half_laplace_x{xx:g}", tr.laplace_transform(ph, xx),
                      math.exp(-math.sqrt(xx)), 1e-8))

    for name, f in (("exp", lambda z: np.exp(-z)), ("exp_sqrt", lambda z: np.exp(-np.sqrt(z))),
                    ("rational", lambda z: 1.0 / (1.0 + z))):
        out.append(flag(f"cm_{name}", tr.completely_monotone_test(f).passed))
    g = tr.completely_monotone_test(lambda z: np.exp(-z * z))
    out.append(flag("cm_gaussian_rejected", not g.passed))
    out.append(eq("cm_gaussian_violation_order", g.first_violation[1] if g.first_violation else -1,
                  2, 0.0))
    for xx in (0.5, 2.0):
        r = tr.cauchy_identity_check(xx)["sin"]
        out.append(eq(f"cauchy_exp_mixture_x{xx:g}", r.lhs, r.rhs, 1e-9))
    return out


# ---------------------------------------------------------------------------
# mixtures


def suite_mixtures(mass_tol: float = MASS_TOL) -> list[Check]:
    out = []
    xs = np.linspace(-5, 5, 41)
    lapF = mx.laplace_mixing()
    out.append(eq("laplace_smn", mx.smn_density(lapF, xs), oracles.laplace_density(xs), 1e-10))
    out.append(eq("cauchy_smn", mx.smn_density(mx.cauchy_mixing(), xs),
                  oracles.cauchy_density(xs), 1e-10))
    D = tr.dual_mixing(lapF)
    out.append(eq("dual_mixing_laplace_is_cauchy", mx.smn_density(D, xs),
                  oracles.cauchy_density(xs), 1e-6))
    v = np.geomspace(0.1, 10, 41)
    DD = tr.dual_mixing(D)
    out.append(eq("dual_mixing_involution", np.array([DD(u) for u in v]) / np.array([lapF(u) for u in v]),
                  np.ones_like(v), 1e-8))

    Q = mx.quartic_mixing()
    out.append(eq("quartic_reconstruction", mx.smn_density(Q, xs), mx.quartic_density(xs), 1e-6))
    out.append(eq("quartic_mixing_mass", Q.total_mass(), 1.0, mass_tol))
    from scipy import integrate as _integrate
    half, _ = _integrate.quad(lambda z: mx.smn_density(Q, z) * math.pi / 4.0, 0.0, np.inf,
                              epsabs=1e-12, limit=400)
    out.append(eq("quartic_half_line_integral", half, math.pi / 8.0, 1e-6))
    probe = np.geomspace(0.05, 50, 400)
    out.append(flag("quartic_mixing_signed", np.min([Q(u) for u in probe]) < 0))
    out.append(ge("quartic_density_nonnegative", mx.smn_density(Q, np.linspace(-20, 20, 81)),
                  0.0, 1e-10))
    out.append(eq("quartic_charfn", mx.smn_charfn(Q, np.linspace(0, 5, 11)),
                  mx.quartic_charfn(np.linspace(0, 5, 11)), 1e-8))
    for n, C, x in ((1, 1.0, 0.7), (2, np.eye(2), [1.0, 0.5]),
                    (3, [[2, 0.5, 0], [0.5, 1, 0.2], [0, 0.2, 1.5]], [0.3, -1.0, 0.5])):
        r = mx.multivariate_quartic_check(n, C, x)
        out.append(eq(f"multivariate_quartic_n{n}", r.kappa, r.kappa_closed_form, 1e-8))

    ts = np.array([0.25, 0.5, 1.0, 2.0, 3.0])
    for a in (0.5, 1.0, 1.5):
        E = mx.exp_power_mixing(a)
        out.append(eq(f"exp_power_alpha{a:g}", mx.smn_charfn(E, ts), np.exp(-ts**a), 1e-6))
        out.append(ge(f"exp_power_alpha{a:g}_mixing_nonnegative",
                      [E(u) for u in np.geomspace(1e-2, 1e2, 30)], 0.0, 1e-12))
    out.append(eq("exp_power_alpha1_is_cauchy_pair",
                  mx.smn_density(mx.exp_power_mixing(1.0), [0.0, 1.0, 3.0]),
                  oracles.cauchy_density([0.0, 1.0, 3.0]), 1e-10))

    xl = np.array([0.0, 0.5, 1.0, 2.5])
    out.append(eq("linnik_alpha2_is_laplace", mx.linnik_density(2.0, xl),
                  oracles.laplace_density(xl), 1e-6))
    out.append(eq("linnik_alpha1_closed_form", mx.linnik_density(1.0, xl[1:]),
                  oracles.linnik1_density(xl[1:]), 1e-6))
    for a in (0.5, 1.0, 1.5, 2.0):
        g = mx.linnik_grid(a)
        out.append(eq(f"linnik_alpha{a:g}_mass", g.mass(), 1.0, 1e-6))
        out.append(eq(f"linnik_alpha{a:g}_symmetric", g.values, g.values[::-1], 1e-6))

    cat = mx.catalog()
    out.append(eq("gneiting_normal", mx.gneiting_product(cat["normal"]), 1.0, 1e-6))
    out.append(ge("gneiting_normal_mixture", mx.gneiting_product(cat["normal_mixture"]), 1.0, 1e-6))
    for name in ("laplace", "cauchy"):
        out.append(eq(f"gneiting_{name}_diverges", mx.gneiting_product(cat[name]), math.inf, 0.0))
    return out


# ---------------------------------------------------------------------------
# quasibayes


def suite_quasibayes(mass_tol: float = MASS_TOL) -> list[Check]:
    out = []
    pmf = qb.total_probability(qb.feynman_table())
    out.append(eq("feynman_marginals", pmf.weights, (0.09, 0.78, 0.13), 1e-12))
    out.append(eq("feynman_mass", pmf.mass, 1.0, 1e-12))

    prior = qb.SignedMixturePrior.exponential([1.0, 2.0], [2.0, -1.0])
    lik = qb.ExpLikelihood()
    post, m = qb.signed_posterior(prior, lik, 1.0)
    out.append(eq("signed_bayes_marginal", m, 5.0 / 18.0, 1e-12))
    out.append(eq("signed_bayes_marginal_quadrature",
                  oracles.marginal_likelihood_quad(prior.pdf, lik, 1.0), 5.0 / 18.0, 1e-10))
    out.append(eq("signed_bayes_weights", post.weights, (1.8, -0.8), 1e-12))
    z = np.linspace(0.0, 30.0, qb.PROBE_POINTS)
    direct = lik(1.0, z) * prior.pdf(z) / m
    out.append(eq("signed_bayes_direct_oracle", post.pdf(z), direct, 1e-10))
    out.append(ge("signed_bayes_posterior_nonnegative", post.pdf(z), 0.0, 1e-10))
    for name, L, y in (("poisson", qb.PoissonLikelihood(), 3), ("normal", qb.NormalLikelihood(0.7), 0.4)):
        p2, m2 = qb.signed_posterior(prior, L, y)
        zz = p2.probe_grid()
        out.append(eq(f"signed_bayes_{name}_direct_oracle", p2.pdf(zz),
                      L(y, zz) * prior.pdf(zz) / m2, 1e-10))
        out.append(eq(f"signed_bayes_{name}_weights_sum", math.fsum(p2.weights), 1.0, 1e-12))

    one = qb.sine_coeffs(np.sin, 8)
    xg = np.linspace(0, math.pi, 257)
    out.append(eq("diffusion_single_mode", one(xg, 0.7), np.exp(-0.7) * np.sin(xg), 1e-12))
    out.append(eq("diffusion_single_mode_midpoint", one(math.pi / 2, 1.0), math.exp(-1.0), 1e-12))
    bump = qb.bump_coeffs(256)
    out.append(eq("bump_p2_zero", bump.coeffs[1], 0.0, 1e-15))
    out.append(le("bump_p3_negative", bump.coeffs[2], 0.0, 0.0))
    quad = qb.sine_coeffs(qb.bump_initial, 32, (math.pi / 4, 3 * math.pi / 4))
    out.append(eq("bump_coeffs_quadrature", quad.coeffs, bump.coeffs[:32], 1e-12))
    x, u = oracles.crank_nicolson_rod(qb.bump_initial, 0.1)
    out.append(eq("diffusion_bump_crank_nicolson", bump(x, 0.1), u, 1e-4))
    xf = np.linspace(0, math.pi, 2049)
    for t in (0.01, 0.1, 1.0):
        out.append(ge(f"diffusion_nonnegative_t{t:g}", bump(xf, t), 0.0, 1e-6))
    # t = 0 is left out: the undamped series is still truncation-limited there
    masses = [bump.mass(t) for t in (0.01, 0.05, 0.1, 0.5, 1.0, 2.0)]
    out.append(le("diffusion_mass_nonincreasing", np.diff(masses), 0.0, 1e-15))
    out.append(eq("diffusion_absorbers", [bump(0.0, 0.3), bump(math.pi, 0.3)], [0.0, 0.0], 0.0))
    return out


# ---------------------------------------------------------------------------
# wigner


def suite_wigner(mass_tol: float = MASS_TOL) -> list[Check]:
    out = []
    for name in ("gaussian", "hermite1", "squeezed:2"):
        psi = wg.make_state(name)
        W = wg.wigner_transform(psi)
        tag = name.replace(":", "")
        out.append(eq(f"wigner_{tag}_mass", W.mass(), 1.0, 1e-6))
        out.append(le(f"wigner_{tag}_imag_residue", W.imag_residue, 0.0, 1e-10))
        out.append(eq(f"wigner_{tag}_x_marginal", W.x_marginal(), np.abs(psi.values) ** 2, 1e-6))
        ph = wg.momentum_wavefunction(psi, W.p)
        out.append(eq(f"wigner_{tag}_p_marginal", W.p_marginal(), np.abs(ph) ** 2, 1e-6))
        hud = wg.hudson_check(W)
        prod = wg.uncertainty_product(W)
        if name == "hermite1":
            out.append(eq("wigner_hermite1_origin", W.at(0, 0), -1 / math.pi, 1e-4))
            out.append(eq("wigner_hermite1_origin_quadrature",
                          oracles.wigner_point(lambda s: math.sqrt(2) * math.pi**-0.25 * s
                                               * math.exp(-s * s / 2), 0.0, 0.0),
                          -1 / math.pi, 1e-10))
            out.append(le("wigner_hermite1_negative", hud.min_value, -0.01, 0.0))
            out.append(eq("wigner_hermite1_product", prod, 1.5, 1e-3))
        else:
            out.append(ge(f"wigner_{tag}_min", hud.min_value, 0.0, 1e-10))
            out.append(ge(f"wigner_{tag}_product_bound", prod, 0.5, 1e-6))
        if name == "gaussian":
            out.append(eq("wigner_gaussian_origin", W.at(0, 0), 1 / math.pi, 1e-10))
            out.append(eq("wigner_gaussian_closed_form", W.values,
                          np.exp(-np.add.outer(W.x**2, W.p**2)) / math.pi, 1e-10))
            out.append(eq("wigner_gaussian_product", prod, 0.5, 1e-6))
    W = wg.wigner_transform(wg.gaussian_state(center=1.5))
    out.append(eq("wigner_translation_mean", W.moments()["mean_x"], 1.5, 1e-10))
    return out


SUITES: dict[str, Callable[..., list[Check]]] = {
    "series": suite_series,
    "transforms": suite_transforms,
    "mixtures": suite_mixtures,
    "quasibayes": suite_quasibayes,
    "wigner": suite_wigner,
}


def run_suite(name: str, tol: float | None = None, grid_points: int = 4097,
              mass_tol: float = MASS_TOL, series_order: int = SERIES_ORDER) -> list[Check]:
    """Run one suite or ``"all"``; ``tol`` overrides every check's tolerance."""
    names = list(SUITES) if name == "all" else [name]
    if any(n not in SUITES for n in names):
        raise KeyError(f"unknown suite {name!r}")
    checks: list[Check] = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for n in names:
            if n == "series":
                checks += suite_series(order=series_order, mass_tol=mass_tol)
            elif n == "transforms":
                checks += suite_transforms(grid_points=grid_points, mass_tol=mass_tol)
            else:
                checks += SUITES[n](mass_tol=mass_tol)
    seen = set()
    for c in checks:
        if c.check in seen:
            raise RuntimeError(f"duplicate check name {c.check!r}")
        seen.add(c.check)
    if tol is not None:
        checks = [c.with_tol(tol) for c in checks]
    return checks
