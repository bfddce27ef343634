import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gammaln

from ancs import power_series as ps
from ancs.errors import SeriesError

coeff = st.floats(-1.0, 1.0, allow_nan=False)


def series(values, c0=None):
    c = np.array(values, dtype=float)
    if c0 is not None:
        c[0] = c0
    return ps.TruncatedSeries(c)


def test_constructors():
    assert list(ps.identity(3).coeffs) == [1, 0, 0, 0]
    assert list(ps.zero(2).coeffs) == [0, 0, 0]
    assert list(ps.monomial(4, 2, 3.0).coeffs) == [0, 0, 3, 0, 0]
    e = ps.exp_series(10, 2.0).coeffs
    assert np.allclose(e, 2.0 ** np.arange(11) / np.exp(gammaln(np.arange(11) + 1)), rtol=1e-15)


def test_rejects_bad_input():
    with pytest.raises(SeriesError):
        ps.TruncatedSeries([])
    with pytest.raises(SeriesError):
        ps.TruncatedSeries([1.0, math.nan])
    with pytest.raises(SeriesError):
        ps.series_mul(ps.identity(2), ps.identity(3))
    with pytest.raises(SeriesError):
        ps.series_div(ps.identity(2), ps.monomial(2, 1))
    with pytest.raises(SeriesError):
        ps.series_log(ps.monomial(3, 1))


def test_mul_matches_numpy_convolution():
    rng = np.random.default_rng(0)
    a, b = rng.normal(size=9), rng.normal(size=9)
    got = ps.series_mul(series(a), series(b)).coeffs
    assert np.allclose(got, np.convolve(a, b)[:9], rtol=0, atol=1e-14)


def test_log_of_geometric():
    # log 1/(1-u) = sum u^k / k
    c = np.ones(15)
    f = ps.series_log(series(c)).coeffs
    assert f[0] == 0.0
    assert np.allclose(f[1:], 1.0 / np.arange(1, 15), rtol=1e-14)


def test_pow_half_is_binomial_series():
    # sqrt(1 + u)
    s = ps.series_pow(series([1.0, 1.0] + [0.0] * 10), 0.5).coeffs
    k = np.arange(12)
    ref = [math.comb(1, 0)] + [np.prod([0.5 - j for j in range(n)]) / math.factorial(n) for n in k[1:]]
    assert np.allclose(s, ref, rtol=1e-13, atol=1e-16)


def test_evaluation_derivative_and_rescale():
    a = series([1.0, 2.0, 3.0])
    assert a(2.0) == 17.0
    assert list(a.derivative().coeffs) == [2.0, 6.0]
    assert list(a.rescale_argument(0.5).coeffs) == [1.0, 1.0, 0.75]
    assert a.truncate(1).order == 1


def test_coeff_comparison():
    # relative above the small threshold, absolute below it
    a = np.array([1.0, 1e-12, 2.0])
    b = np.array([1.0, 3e-12, 2.0 * (1 + 1e-13)])
    assert ps.max_coeff_deviation(a, b) == pytest.approx(2e-12, rel=1e-3)
    assert ps.coeffs_close(a, b, rtol=1e-11)
    assert not ps.coeffs_close(a, b, rtol=1e-12)
    assert not ps.coeffs_close(a, b[:2])


@settings(max_examples=60, deadline=None)
@given(st.lists(coeff, min_size=2, max_size=12))
def test_exp_log_roundtrip(values):
    a = series(values, c0=1.0)
    assert ps.max_coeff_deviation(ps.series_exp(ps.series_log(a)), a, small=1e-6) < 1e-9


@settings(max_examples=60, deadline=None)
@given(st.lists(coeff, min_size=2, max_size=12), st.lists(coeff, min_size=12, max_size=12))
def test_division_inverts_multiplication(values, other):
    a = series(values, c0=1.0)
    b = series(other[: a.order + 1], c0=2.0)
    back = ps.series_div(ps.series_mul(a, b), b)
    assert np.allclose(back.coeffs, a.coeffs, atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.lists(coeff, min_size=2, max_size=10), st.floats(0.1, 3.0), st.floats(0.1, 3.0))
def test_pow_is_exponential_in_t(values, s, t):
    a = series(values, c0=1.0)
    lhs = ps.series_mul(ps.series_pow(a, s), ps.series_pow(a, t))
    rhs = ps.series_pow(a, s + t)
    assert np.allclose(lhs.coeffs, rhs.coeffs, atol=1e-8 * max(1.0, np.abs(rhs.coeffs).max()))
