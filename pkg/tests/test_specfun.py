import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from ancs.errors import DomainError, IntegrationWarning
from ancs.specfun import (bessel_i, bessel_j_array, bessel_j_batch, integrate, lambert_w0,
                          log_bessel_i, log_binomial, log_binomial_array,
                          log_generalized_factorials, miller_start)


@pytest.mark.parametrize("z", [0.0, 1e-8, 0.3, 2.0, 17.5, 80.0, 300.0, 700.0, 1500.0])
def test_bessel_j_against_scipy(z):
    n = np.arange(41)
    got = bessel_j_batch(40, z)
    ref = special.jv(n, z)
    scale = max(1.0, np.abs(ref).max())
    assert np.max(np.abs(got - ref)) < 1e-13 * scale + 1e-15


def test_bessel_j_array_matches_batch():
    zs = np.array([0.5, 3.0, 40.0])
    arr = bessel_j_array(10, zs)
    for i, z in enumerate(zs):
        assert np.allclose(arr[:, i], bessel_j_batch(10, z), rtol=1e-15, atol=1e-300)


def test_miller_start_even_and_beyond_z():
    for n, z in ((0, 0.0), (5, 10.0), (40, 700.0)):
        m = miller_start(n, z)
        assert m % 2 == 0 and m > n + z


@pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, 3.0, 9.0, 30.0])
@pytest.mark.parametrize("z", [1e-6, 0.2, 3.0, 40.0, 200.0, 700.0])
def test_bessel_i_against_scipy_ive(nu, z):
    ref = math.log(special.ive(nu, z)) + z
    assert abs(log_bessel_i(nu, z) - ref) <= 1e-13 * max(1.0, abs(ref))


def test_bessel_i_small_values():
    assert bessel_i(0.0, 0.0) == 1.0
    assert bessel_i(2.0, 0.0) == 0.0
    assert math.isclose(bessel_i(1.0, 2.0), special.iv(1, 2.0), rel_tol=1e-14)


@settings(max_examples=200, deadline=None)
@given(st.floats(-1 / math.e, 0.0))
def test_lambert_w_inverse(x):
    w = lambert_w0(x)
    assert w >= -1.0
    assert abs(w * math.exp(w) - x) <= 1e-14 * max(1.0, abs(x))


def test_lambert_w_against_scipy_and_domain():
    for x in (-0.3678, -0.2, -1e-3, 0.0):
        assert math.isclose(lambert_w0(x), special.lambertw(x).real, rel_tol=1e-12, abs_tol=1e-15)
    assert lambert_w0(-1 / math.e) == pytest.approx(-1.0, abs=1e-7)
    with pytest.raises(DomainError):
        lambert_w0(-0.5)
    with pytest.raises(DomainError):
        lambert_w0(0.5)


def test_log_binomial():
    assert log_binomial(10, 5) == pytest.approx(math.log(252), abs=1e-13)
    assert log_binomial(7, 0) == 0.0
    n = np.array([10, 20, 30])
    k = np.array([3, 10, 29])
    ref = [math.log(math.comb(int(a), int(b))) for a, b in zip(n, k)]
    assert np.allclose(log_binomial_array(n, k), ref, rtol=1e-14)


def test_log_generalized_factorials_convention():
    got = log_generalized_factorials([0.0, 1.0, 2.0, 3.0])
    assert np.allclose(got, np.log([1, 1, 2, 6]), atol=1e-15)


def test_integrate_finite_and_infinite():
    r = integrate(np.sin, 0.0, math.pi)
    assert r.converged and abs(r.value - 2.0) < 1e-12
    r = integrate(lambda u: 1.0 / (1.0 + u * u), 0.0)
    assert abs(r.value - math.pi / 2) < 1e-9


def test_integrate_oscillatory_tail():
    # int_0^inf J_1(2t)^2 / t dt = 1/2
    def f(t):
        t = np.atleast_1d(t)
        safe = np.where(t > 0, t, 1.0)
        return np.where(t > 0, special.jv(1, 2 * safe) ** 2 / safe, 0.0)

    r = integrate(f, 0.0, tail_period=math.pi / 2)
    assert abs(r.value - 0.5) < 1e-9


def test_integrate_warns_when_budget_exhausted():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        r = integrate(lambda u: np.sin(200 * u) ** 2, 0.0, 50.0, rtol=1e-14, max_subdivisions=3)
    assert not r.converged
    assert any(issubclass(w.category, IntegrationWarning) for w in caught)
