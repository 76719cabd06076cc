"""Acceptance criteria, one test each, at the stated tolerances."""

import math
import warnings

import numpy as np
from scipy import integrate

import quasiprob.mixtures as mx
import quasiprob.quasibayes as qb
import quasiprob.series as sr
import quasiprob.transforms as tr
import quasiprob.wigner as wg
from quasiprob import oracles
from quasiprob.core import GridDensity, PowerSeries, uniform_grid
from quasiprob.verify import pg_convention_report


def test_01_feynman_marginals(criterion):
    pmf = qb.total_probability(qb.feynman_table())
    err = np.max(np.abs(pmf.weights - [0.09, 0.78, 0.13]))
    assert criterion(1, err <= 1e-12, f"max err {err:.2e} (tol 1e-12)")


def test_02_halfcoin(criterion):
    hc = sr.halfcoin_coeffs(64)
    c = sr.series_mul(hc, hc).coeffs
    e01 = max(abs(c[0] - 0.5), abs(c[1] - 0.5))
    tail = np.max(np.abs(c[2:]))
    newton = sr.series_sqrt(PowerSeries(np.r_[0.5, 0.5, np.zeros(63)]))
    en = np.max(np.abs(newton.coeffs - hc.coeffs))
    ok = e01 <= 1e-12 and tail < 1e-10 and en <= 1e-9
    assert criterion(2, ok, f"c0/c1 err {e01:.2e}, tail {tail:.2e}, Newton vs Catalan {en:.2e}")


def test_03_bartlett_reciprocal(criterion):
    b = sr.binomial_pgf(1, 0.3, 64)
    r = sr.series_reciprocal(b)
    delta = np.r_[1.0, np.zeros(64)]
    res = np.max(np.abs(sr.series_mul(b, r).coeffs - delta))
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        sr.series_reciprocal(sr.binomial_pgf(1, 0.7, 64))
    warned = any(issubclass(x.category, sr.ReciprocalDivergenceWarning) for x in w)
    ok = res < 1e-10 and warned
    assert criterion(3, ok, f"residual {res:.2e}, divergence warning {warned}")


def test_04_cauchy_laplace_duality(criterion):
    x = uniform_grid(30.0, 60001)
    lap = GridDensity(x, oracles.laplace_density(x))
    dual = tr.dual_density(lap)
    t = dual.x[np.abs(dual.x) <= 8]
    e1 = np.max(np.abs(dual(t) - oracles.cauchy_density(t)))
    dd = tr.dual_density(dual, pad=1, decay_tol=None)
    xs = dd.x[np.abs(dd.x) <= 8]
    e2 = np.max(np.abs(dd(xs) - oracles.laplace_density(xs)))
    ok = e1 < 1e-6 and e2 < 1e-6
    assert criterion(4, ok, f"dual vs Cauchy {e1:.2e}, double dual vs Laplace {e2:.2e}")


def test_05_mixing_transform(criterion):
    F = mx.laplace_mixing()
    D = tr.dual_mixing(F)
    xs = np.linspace(-5, 5, 101)
    e1 = np.max(np.abs(mx.smn_density(D, xs) - oracles.cauchy_density(xs)))
    DD = tr.dual_mixing(D)
    v = np.geomspace(0.1, 10, 101)
    e2 = max(abs(DD(u) / F(u) - 1) for u in v)
    ok = e1 <= 1e-6 and e2 <= 1e-8
    assert criterion(5, ok, f"Cauchy pointwise {e1:.2e}, involution rel {e2:.2e}")


def test_06_quartic_signed_mixture(criterion):
    Q = mx.quartic_mixing()
    xs = np.linspace(-5, 5, 101)
    f = mx.smn_density(Q, xs)
    e1 = np.max(np.abs(f - mx.quartic_density(xs)))
    # 1/(4 + x^4) over the half line is pi/8
    half, _ = integrate.quad(lambda z: mx.smn_density(Q, z) * math.pi / 4, 0, np.inf,
                             epsabs=1e-12, limit=400)
    e2 = abs(half - math.pi / 8)
    signed = min(Q(u) for u in np.geomspace(0.05, 50, 400)) < 0
    fmin = float(np.min(mx.smn_density(Q, np.linspace(-20, 20, 161))))
    ok = e1 < 1e-6 and e2 <= 1e-6 and signed and fmin >= -1e-10
    assert criterion(6, ok, f"sup err {e1:.2e}, half-line {e2:.2e}, mixing signed {signed}, "
                            f"min density {fmin:.3g}")


def test_07_complete_monotonicity(criterion):
    good = [tr.completely_monotone_test(f).passed for f in
            (lambda x: np.exp(-x), lambda x: np.exp(-np.sqrt(x)), lambda x: 1 / (1 + x))]
    g = tr.completely_monotone_test(lambda x: np.exp(-x * x))
    order = g.first_violation[1] if g.first_violation else None
    ok = all(good) and not g.passed and order == 2
    assert criterion(7, ok, f"CM passes {good}, exp(-x^2) first violation order {order}")


def test_08_levy_identity(criterion):
    e1 = max(tr.levy_half_identity_check(t).abs_err for t in (0.25, 1.0, 4.0))
    ph = tr.phi_half_measure()
    e2 = max(abs(tr.laplace_transform(ph, x) - math.exp(-math.sqrt(x))) for x in (1.0, 4.0, 9.0))
    ok = e1 <= 1e-8 and e2 <= 1e-8
    assert criterion(8, ok, f"identity {e1:.2e}, Laplace transform {e2:.2e}")


def test_09_linnik(criterion):
    xs = np.linspace(-5, 5, 41)
    e1 = np.max(np.abs(mx.linnik_density(2.0, xs) - oracles.laplace_density(xs)))
    worst_mass = worst_sym = 0.0
    for a in (0.5, 1.0, 1.5, 2.0):
        g = mx.linnik_grid(a)
        worst_mass = max(worst_mass, abs(g.mass() - 1))
        worst_sym = max(worst_sym, np.max(np.abs(g.values - g.values[::-1])))
    ok = e1 <= 1e-6 and worst_mass <= 1e-6 and worst_sym <= 1e-6
    assert criterion(9, ok, f"alpha=2 vs Laplace {e1:.2e}, mass {worst_mass:.2e}, "
                            f"symmetry {worst_sym:.2e}")


def test_10_gneiting_product(criterion):
    cat = mx.catalog()
    normal = mx.gneiting_product(cat["normal"])
    finite = {k: mx.gneiting_product(cat[k]) for k in ("normal", "normal_mixture")}
    div = {k: mx.gneiting_product(cat[k]) for k in ("laplace", "cauchy")}
    ok = (abs(normal - 1) <= 1e-6 and all(v >= 1 - 1e-6 for v in finite.values())
          and all(v == math.inf for v in div.values()))
    assert criterion(10, ok, f"normal {normal:.9f}, mixture {finite['normal_mixture']:.6f}, "
                             f"divergent {div}")


def test_11_signed_bayes(criterion):
    prior = qb.SignedMixturePrior.exponential([1.0, 2.0], [2.0, -1.0])
    lik = qb.ExpLikelihood()
    post, m = qb.signed_posterior(prior, lik, 1.0)
    e_m = abs(m - 5 / 18)
    e_w = np.max(np.abs(post.weights - [1.8, -0.8]))
    z = np.linspace(0.0, 30.0, 2049)
    dens = post.pdf(z)
    e_o = np.max(np.abs(dens - lik(1.0, z) * prior.pdf(z) / m))
    ok = e_m <= 1e-12 and e_w <= 1e-12 and dens.min() >= -1e-10 and e_o <= 1e-10
    assert criterion(11, ok, f"m err {e_m:.2e}, weights err {e_w:.2e}, min {dens.min():.2e}, "
                             f"oracle {e_o:.2e}")


def test_12_diffusion(criterion):
    one = qb.sine_coeffs(np.sin, 8)
    x = np.linspace(0, math.pi, 513)
    e1 = max(np.max(np.abs(one(x, t) - np.exp(-t) * np.sin(x))) for t in (0.1, 1.0, 2.0))
    bump = qb.bump_coeffs(256)
    xc, u = oracles.crank_nicolson_rod(qb.bump_initial, 0.1)
    e2 = np.max(np.abs(bump(xc, 0.1) - u))
    xf = np.linspace(0, math.pi, 2049)
    pmin = min(float(np.min(bump(xf, t))) for t in (0.01, 0.1, 1.0))
    mixed = bool(np.any(bump.coeffs < 0))
    ok = e1 <= 1e-12 and e2 < 1e-4 and pmin >= -1e-6 and mixed
    assert criterion(12, ok, f"single mode {e1:.2e}, Crank-Nicolson {e2:.2e}, min P {pmin:.2e}, "
                             f"mixed-sign p_n {mixed}")


def test_13_wigner(criterion):
    out = []
    ok = True
    for name in ("gaussian", "hermite1"):
        psi = wg.make_state(name)
        W = wg.wigner_transform(psi)
        mx_ = np.max(np.abs(W.x_marginal() - np.abs(psi.values) ** 2))
        mp_ = np.max(np.abs(W.p_marginal() - np.abs(wg.momentum_wavefunction(psi, W.p)) ** 2))
        prod = wg.uncertainty_product(W)
        ok &= mx_ <= 1e-6 and mp_ <= 1e-6
        if name == "gaussian":
            mn = wg.hudson_check(W).min_value
            ok &= mn >= -1e-10 and abs(prod - 0.5) <= 1e-6
            out.append(f"gaussian min {mn:.1e} product {prod:.9f}")
        else:
            w00 = W.at(0.0, 0.0)
            ok &= abs(w00 + 1 / math.pi) <= 1e-4 and abs(prod - 1.5) <= 1e-3
            out.append(f"hermite1 W(0,0)*pi {w00 * math.pi:.6f} product {prod:.6f}")
        out.append(f"marginals {max(mx_, mp_):.1e}")
    assert criterion(13, ok, ", ".join(out))


def test_14_polya_gamma_convention(criterion):
    rep = pg_convention_report(1.0, np.linspace(0.1, 5.0, 12))
    fits = ", ".join(f"{k}: b={v['b']:.4f} err {v['max_err']:.2e}" for k, v in rep["fits"].items())
    ok = len(rep["consistent"]) == 1
    assert criterion(14, ok, f"consistent {rep['consistent'] or 'none'} ({fits})")
