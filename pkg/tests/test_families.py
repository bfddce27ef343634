import math

import mpmath
import numpy as np
import pytest
from scipy import special

from ancs.an_core import distribution, invert_nbar, moments, series_moments
from ancs.errors import DomainError
from ancs.families import (KINDS, FamilySpec, abel_log_xfactorials, abel_x, bose_einstein_pmf,
                           hermite_inverse_xfactorials, limit_checks, make_family, poisson_pmf,
                           resolution_diagonal, scaled_negative_binomial, sg_h_series,
                           sgm_norm_closed, sgm_norm_series)


def test_spec_validation_and_aliases():
    assert FamilySpec("bg", {"kappa": 1}).kind == "barut_girardello"
    assert FamilySpec("su2", {"n_j": 3}).kind == "spin"
    assert FamilySpec("barut_girardello", {"kappa": 0.5}).params == {"kappa": 0.5}
    for kind, params in (("nope", {}), ("spin", {"n_j": 2.5}), ("spin", {}),
                         ("perelomov", {"kappa": 0.5}), ("hermite", {"a": 0}),
                         ("abel", {"beta": -1}), ("gs", {"a": 1})):
        with pytest.raises(ValueError):
            FamilySpec(kind, params)


@pytest.mark.parametrize("kind,params", [("gs", {}), ("spin", {"n_j": 4}), ("perelomov", {"kappa": 2}),
                                         ("barut_girardello", {"kappa": 2}), ("hermite", {"a": 1}),
                                         ("abel", {"beta": 2}), ("sg", {}), ("sgm", {})])
def test_h_matches_probs(kind, params):
    f = make_family(kind, **params)
    u = min(1.3, 0.5 * f.u_max)
    p = distribution(f, u).probs
    for n in range(min(p.size, 8)):
        assert u ** n * f.h(n, u) ** 2 == pytest.approx(p[n], rel=1e-10, abs=1e-300)


def test_all_kinds_build():
    assert set(KINDS) == {"gs", "spin", "perelomov", "barut_girardello", "hermite", "abel", "sg", "sgm"}


def test_barut_girardello_against_mpmath():
    f = make_family("barut_girardello", kappa=1.5)
    u = 7.0
    z = 2 * mpmath.sqrt(u)
    nbar = mpmath.sqrt(u) * mpmath.besseli(3, z) / mpmath.besseli(2, z)
    assert moments(f, u).nbar == pytest.approx(float(nbar), rel=1e-13)


def test_hermite_explicit_sum_and_closed_forms():
    a = 0.8
    inv = hermite_inverse_xfactorials(a, 10)
    # 1/x_n! is the u^n coefficient of exp(u + a u^2 / 2), computed exactly by mpmath
    ref = mpmath.taylor(lambda t: mpmath.exp(t + a * t * t / 2), 0, 10)
    assert np.allclose(inv, [float(c) for c in ref], rtol=1e-14)
    f = make_family("hermite", a=a)
    nb = 2.5
    u = invert_nbar(f, nb)
    s = series_moments(f, u)
    assert s.nbar == pytest.approx(nb, rel=1e-12)
    assert s.mandel_q == pytest.approx(f.closed("mandel_of_nbar", nb), rel=1e-10)


def test_abel_factorials_against_lambert_series():
    beta = 3.0
    n = np.arange(12)
    ref = mpmath.taylor(lambda t: mpmath.exp(-beta * mpmath.lambertw(-t / beta)), 0, 11)
    assert np.allclose(np.exp(-abel_log_xfactorials(beta, n)), [float(c) for c in ref], rtol=1e-12)


def test_abel_x_not_bounded_by_beta_over_e():
    # x_n tends to beta/e from above, so the bound x_n <= beta/e fails for every beta
    for beta in (0.5, 2.0, 10.0):
        x = abel_x(beta, np.arange(1, 200))
        assert np.all(x[-50:] > beta / math.e)
        assert x[-1] == pytest.approx(beta / math.e, rel=1e-2)


def test_abel_radius_and_sup():
    f = make_family("abel", beta=2.0)
    assert f.radius_sq == pytest.approx(2.0 / math.e)
    # nbar = u F'(u) diverges at the branch point
    assert f.nbar_sup == math.inf
    assert moments(f, 0.999 * f.radius_sq).nbar > 10


def test_sg_small_u_series_matches_bessel():
    for n in range(4):
        u = 2e-4
        direct = (n + 1) * special.jv(n + 1, 2 * math.sqrt(u)) / u ** ((n + 1) / 2)
        assert sg_h_series(n, u) == pytest.approx(direct, rel=1e-12)


def test_sgm_norm_closed_vs_series():
    for u in (1e-9, 1e-5, 0.1, 3.0, 45.0):
        assert sgm_norm_closed(u) == pytest.approx(sgm_norm_series(u), rel=1e-12, abs=1e-15)
    assert sgm_norm_closed(0.0) == 1.0


def test_sgm_second_moment_closed_vs_series():
    f = make_family("sgm")
    for u in (0.05, 2.0, 30.0):
        assert moments(f, u).n2bar == pytest.approx(series_moments(f, u).n2bar, rel=1e-10)


def test_limit_pmfs():
    assert poisson_pmf(0.0, 3).tolist() == [1, 0, 0, 0]
    assert bose_einstein_pmf(2.0, 400).sum() == pytest.approx(1.0)
    # eta = 1 turns the negative binomial into Bose-Einstein
    assert np.allclose(scaled_negative_binomial(1.5, 1.0, 20), bose_einstein_pmf(1.5, 20))


def test_limit_checks():
    assert limit_checks(FamilySpec("spin", {"n_j": 1000})).max_deviation < 1e-2
    assert limit_checks(FamilySpec("spin", {"n_j": 10})).max_deviation > 1e-2
    assert limit_checks(FamilySpec("perelomov", {"kappa": 0.5001})).max_deviation < 1e-3
    assert limit_checks(FamilySpec("abel", {"beta": 1e6})).max_deviation < 1e-4
    assert limit_checks(FamilySpec("gs")).checks == ()


@pytest.mark.parametrize("spec,n", [(FamilySpec("gs"), 3), (FamilySpec("spin", {"n_j": 4}), 4),
                                    (FamilySpec("perelomov", {"kappa": 2.0}), 5),
                                    (FamilySpec("sgm"), 2)])
def test_resolution_diagonal(spec, n):
    assert resolution_diagonal(spec, n).value == pytest.approx(1.0, abs=1e-8)


def test_resolution_diagonal_rejects():
    with pytest.raises(DomainError):
        resolution_diagonal(FamilySpec("spin", {"n_j": 4}), 5)
