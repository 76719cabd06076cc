import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from quasiprob import oracles
from quasiprob.core import CharFn, GridDensity, SignedMixingMeasure, uniform_grid
from quasiprob.mixtures import laplace_mixing, smn_density
from quasiprob.transforms import (
    DecayError,
    cauchy_identity_check,
    charfn,
    completely_monotone_test,
    cos_tail_integral,
    dual_density,
    dual_mixing,
    invert_charfn,
    invert_charfn_at,
    laplace_transform,
    levy_half_identity_check,
    phi_half,
    phi_half_measure,
)


def normal_grid(n=4097, L=8.0, mu=0.0):
    x = uniform_grid(L, n)
    return GridDensity(x, np.exp(-0.5 * (x - mu) ** 2) / math.sqrt(2 * math.pi), normalized=True)


def test_normal_charfn():
    phi = charfn(normal_grid())
    sel = np.abs(phi.t) <= 6
    assert np.max(np.abs(phi.values[sel] - np.exp(-0.5 * phi.t[sel] ** 2))) < 1e-12
    assert phi.at_zero().real == pytest.approx(1.0, abs=1e-14)
    assert phi.hermitian_residual() < 1e-14


def test_shifted_normal_phase():
    phi = charfn(normal_grid(L=10.0, mu=1.0))
    sel = np.abs(phi.t) <= 4
    t = phi.t[sel]
    assert np.max(np.abs(phi.values[sel] - np.exp(1j * t - 0.5 * t * t))) < 1e-12


def test_round_trip():
    d = normal_grid()
    back = invert_charfn(charfn(d))
    assert np.max(np.abs(back(d.x) - d.values)) < 1e-12
    assert back.normalized


def test_decay_error():
    x = uniform_grid(3.0, 601)
    with pytest.raises(DecayError):
        charfn(GridDensity(x, np.exp(-0.5 * x * x)))


def test_non_hermitian_rejected():
    t = uniform_grid(5.0, 101)
    with pytest.raises(ValueError):
        invert_charfn(CharFn(t, np.exp(-t * t) * (1 + 0.1j * t * t)))


@pytest.mark.parametrize("beta", [1.5, 2.0, 3.0])
@pytest.mark.parametrize("x", [0.3, 2.0, 40.0])
def test_cos_tail_against_quadrature(x, beta):
    T = 5.0
    ref, _ = integrate.quad(lambda t: t**-beta, T, np.inf, weight="cos", wvar=x)
    assert cos_tail_integral(np.array([x]), T, beta)[0] == pytest.approx(ref, abs=1e-10)


def test_cos_tail_at_zero():
    assert cos_tail_integral(np.array([0.0]), 2.0, 2.0)[0] == pytest.approx(0.5)
    assert math.isinf(cos_tail_integral(np.array([0.0]), 2.0, 1.0)[0])


def test_pointwise_inversion_with_tail():
    # 1/(1+t^2) truncated at T = 50 and completed by its t^-2 - t^-4 tail
    t = np.arange(-5000, 5001) * 0.01
    phi = CharFn(t, 1 / (1 + t * t))
    x = np.array([0.0, 0.5, 2.0])
    got = invert_charfn_at(phi, x, tail=[(1.0, 2.0), (-1.0, 4.0), (1.0, 6.0)])
    assert np.max(np.abs(got - oracles.laplace_density(x))) < 1e-8


def test_laplace_dual_is_cauchy():
    x = uniform_grid(30.0, 60001)
    dual = dual_density(GridDensity(x, oracles.laplace_density(x)))
    t = dual.x[np.abs(dual.x) <= 8]
    assert np.max(np.abs(dual(t) - oracles.cauchy_density(t))) < 1e-6
    assert dual.normalized


def test_normal_is_self_dual():
    d = dual_density(normal_grid())
    t = d.x[np.abs(d.x) <= 5]
    assert np.max(np.abs(d(t) - np.exp(-0.5 * t * t) / math.sqrt(2 * math.pi))) < 1e-6


def test_dual_mixing_laplace_to_cauchy():
    D = dual_mixing(laplace_mixing())
    x = np.array([0.0, 1.0, 4.0])
    assert np.max(np.abs(smn_density(D, x) - oracles.cauchy_density(x))) < 1e-10


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.floats(0.2, 5.0), st.floats(0.1, 1.0)), min_size=1, max_size=4))
def test_dual_mixing_atoms_involution(atoms):
    v = np.array(sorted({round(a, 6) for a, _ in atoms}))
    w = np.linspace(1.0, 2.0, v.size)
    w = w / w.sum()
    F = SignedMixingMeasure.atoms(v, w)
    DD = dual_mixing(dual_mixing(F))
    order = np.argsort(DD.locations)
    assert np.allclose(DD.locations[order], v, rtol=1e-12)
    assert np.allclose(DD.weights[order], w, rtol=1e-10)


def test_dual_density_signed_pair():
    F = SignedMixingMeasure.atoms([1.0, 4.0], [1.5, -0.5])
    D = dual_mixing(F)
    assert D.total_mass() == pytest.approx(1.0, abs=1e-12)


def test_phi_half_and_laplace():
    assert phi_half(0.0) == 0.0
    ph = phi_half_measure()
    for x in (1.0, 4.0, 9.0):
        assert laplace_transform(ph, x) == pytest.approx(math.exp(-math.sqrt(x)), abs=1e-10)
    with pytest.raises(ValueError):
        laplace_transform(ph, 0.0)


@pytest.mark.parametrize("t", [0.25, 1.0, 4.0])
def test_levy_identity(t):
    r = levy_half_identity_check(t)
    assert r.holds(1e-8)


def test_levy_identity_value_at_quarter():
    assert phi_half(0.25) == pytest.approx(0.830215, abs=1e-6)


def test_cauchy_exponential_mixtures():
    r = cauchy_identity_check(1.5)
    assert r["sin"].holds(1e-10)
    assert not r["t^-1/2 sin"].holds(1e-3)


@pytest.mark.parametrize("f", [lambda x: np.exp(-x), lambda x: np.exp(-np.sqrt(x)),
                               lambda x: 1 / (1 + x), lambda x: x**-0.5])
def test_cm_accepts(f):
    assert completely_monotone_test(f).passed


def test_cm_rejects_gaussian_at_order_two():
    r = completely_monotone_test(lambda x: np.exp(-x * x))
    assert not r.passed and r.first_violation[1] == 2


@pytest.mark.parametrize("alpha, ok", [(0.5, True), (1.0, True), (1.5, False), (2.0, False)])
def test_cm_exponential_power_boundary(alpha, ok):
    # exp(-x^a) is completely monotone exactly for a <= 1
    assert completely_monotone_test(lambda x: np.exp(-x**alpha)).passed is ok


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(0.05, 3.0), min_size=5, max_size=5),
       st.lists(st.floats(0.01, 1.0), min_size=5, max_size=5))
def test_random_cm_mixtures_pass(rates, weights):
    s = np.array(rates)
    w = np.array(weights)
    assert completely_monotone_test(lambda x: np.exp(-np.multiply.outer(x, s)) @ w).passed


def test_cm_argument_errors():
    with pytest.raises(ValueError):
        completely_monotone_test(np.exp, domain=(-1.0, 1.0))
    with pytest.raises(ValueError):
        completely_monotone_test(np.exp, order=11)
