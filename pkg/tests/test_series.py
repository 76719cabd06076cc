import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasiprob import oracles
from quasiprob.core import PowerSeries
from quasiprob.series import (
    ReciprocalDivergenceWarning,
    binom_half,
    binomial_pgf,
    bn_mixing_density,
    catalan,
    factorization_check,
    halfcoin_coeffs,
    pg_laplace,
    series_mul,
    series_reciprocal,
    series_sqrt,
)

small = st.integers(-50, 50)


@given(st.lists(small, min_size=1, max_size=12), st.lists(small, min_size=1, max_size=12))
def test_cauchy_product_matches_exact(a, b):
    n = max(len(a), len(b)) - 1
    got = series_mul(PowerSeries(a), PowerSeries(b)).coeffs
    exact = oracles.exact_cauchy_product([Fraction(x) for x in a], [Fraction(x) for x in b], n)
    assert np.array_equal(got, [float(c) for c in exact])


@given(st.lists(st.floats(-0.3, 0.3), min_size=1, max_size=20))
def test_reciprocal_inverts(tail):
    a = PowerSeries([1.0] + tail)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ReciprocalDivergenceWarning)
        b = series_reciprocal(a)
    prod = series_mul(a, b).coeffs
    scale = max(1.0, np.max(np.abs(b.coeffs)))
    assert abs(prod[0] - 1) < 1e-12
    assert np.max(np.abs(prod[1:]), initial=0.0) < 1e-12 * scale * len(prod)


@given(st.floats(0.1, 4.0), st.lists(st.floats(-1, 1), min_size=1, max_size=16))
def test_sqrt_squares_back(c0, tail):
    a = PowerSeries([c0] + tail)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ReciprocalDivergenceWarning)
        r = series_sqrt(a)
    sq = series_mul(r, r).coeffs
    scale = max(1.0, np.max(np.abs(r.coeffs))) ** 2
    assert np.max(np.abs(sq - a.coeffs)) < 1e-9 * scale


def test_reciprocal_errors_and_warning():
    with pytest.raises(ZeroDivisionError):
        series_reciprocal(PowerSeries([0.0, 1.0]))
    with pytest.warns(ReciprocalDivergenceWarning):
        series_reciprocal(binomial_pgf(1, 0.7))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        series_reciprocal(binomial_pgf(1, 0.3))


def test_sqrt_rejects_nonpositive():
    with pytest.raises(ValueError):
        series_sqrt(PowerSeries([-1.0, 1.0]))


def test_catalan_numbers():
    assert [catalan(n) for n in range(8)] == [1, 1, 2, 5, 14, 42, 132, 429]
    assert binom_half(1) == Fraction(1, 2)
    assert binom_half(2) == Fraction(-1, 8)
    assert binom_half(3) == Fraction(1, 16)


def test_halfcoin_squares_to_fair_coin():
    hc = halfcoin_coeffs(64)
    sq = series_mul(hc, hc).coeffs
    assert sq[0] == pytest.approx(0.5, abs=1e-15)
    assert sq[1] == pytest.approx(0.5, abs=1e-15)
    assert np.max(np.abs(sq[2:])) < 1e-15
    assert hc.mass() == pytest.approx(1.0, abs=1e-2)  # slowly convergent at s = 1
    assert not hc.is_ordinary()
    with pytest.raises(ValueError):
        halfcoin_coeffs(-1)


def test_factorization_report():
    hc = halfcoin_coeffs(32)
    fair = PowerSeries(np.r_[0.5, 0.5, np.zeros(31)])
    rep = factorization_check(hc, hc, fair)
    assert rep.residual < 1e-15
    assert not rep.is_fundamental_example
    b = binomial_pgf(2, 0.4, 8)
    rep = factorization_check(binomial_pgf(1, 0.4, 8), binomial_pgf(1, 0.4, 8), b)
    assert rep.is_fundamental_example and rep.residual < 1e-15


@given(st.integers(1, 6), st.floats(-0.5, 1.5))
def test_binomial_pgf_mass_and_inverse(n, p):
    f = binomial_pgf(n, p, 16)
    assert f.mass() == pytest.approx(1.0, abs=1e-10)
    if abs(1 - p) > 0.2:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ReciprocalDivergenceWarning)
            g = binomial_pgf(-n, p, 16)
        prod = series_mul(f, g).coeffs
        scale = max(1.0, np.max(np.abs(g.coeffs)))
        assert np.max(np.abs(prod - np.r_[1.0, np.zeros(16)])) < 1e-10 * scale


def test_pg_laplace_conventions():
    assert pg_laplace(1.0, 0.0) == 1.0
    assert pg_laplace(2.0, 4.0) == pytest.approx(math.cosh(2.0) ** -2)
    assert pg_laplace(1.0, 8.0, "half-argument") == pytest.approx(1 / math.cosh(2.0))
    assert np.isfinite(pg_laplace(1.0, 1e6))
    with pytest.raises(ValueError):
        pg_laplace(1.0, -1.0)
    with pytest.raises(ValueError):
        pg_laplace(1.0, 1.0, "other")


def test_bn_density_delta_one_closed_form():
    # delta = 1: sum_n (-1)^(n-1) n^2 exp(-n^2 u / 2)
    u = 0.7
    n = np.arange(1, 60)
    ref = np.sum((-1.0) ** (n - 1) * n**2 * np.exp(-(n**2) * u / 2))
    val, tail = bn_mixing_density(1.0, u)
    assert val == pytest.approx(ref, abs=1e-14)
    assert tail < 1e-14
    _, tail_small = bn_mixing_density(1.0, 1e-4, K=20)
    assert tail_small > 1e-3
    with pytest.raises(ValueError):
        bn_mixing_density(0.0, 1.0)


def test_bn_laplace_transform_closed_forms():
    for t in (0.3, 2.0):
        x = math.pi * math.sqrt(2 * t)
        assert oracles.bn_laplace_transform(1.0, t) == pytest.approx(x / math.sinh(x), abs=1e-10)
        assert oracles.bn_laplace_transform(0.5, t) == pytest.approx(1 / math.cosh(x), abs=1e-10)
