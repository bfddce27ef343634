import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from ancs import power_series as ps
from ancs.deformed_binomial import (DeformedSequence, abel_q, abel_sym_pmf, asym_law,
                                    asym_polynomials, cst_check, deformed_bernoulli,
                                    deformed_bernoulli_rhs, hypergeometric_p, prop1_check,
                                    prop2_check, sym_law, sym_polynomials)
from ancs.errors import DomainError
from ancs.families import make_family


def test_gs_laws_are_binomial():
    seq = DeformedSequence.gs(40)
    ref = stats.binom.pmf(np.arange(31), 30, 0.3)
    assert np.allclose(asym_law(seq, 30, 0.3).probs, ref, rtol=1e-12, atol=1e-300)
    assert np.allclose(sym_law(seq, 30, 0.3).probs, ref, rtol=1e-12, atol=1e-300)
    assert np.allclose(asym_polynomials(seq, None, 0.3, 10), 0.7 ** np.arange(11), rtol=1e-13)


def test_negative_binomial_symmetric_law_is_beta_binomial():
    m = 3.0
    seq = DeformedSequence.negative_binomial(m, 1.0, 30)
    for eta in (0.2, 0.6):
        ref = stats.betabinom.pmf(np.arange(21), 20, m * eta, m * (1 - eta))
        assert np.allclose(sym_law(seq, 20, eta).probs, ref, rtol=1e-11)


def test_hypergeometric_against_mpmath():
    for m, k, eta in ((4.0, 7, 0.3), (2.5, 12, 0.8), (1.0, 3, 0.5)):
        ref = float(mpmath.hyp2f1(-m, -k, 1 - k - m, eta))
        assert hypergeometric_p(m, k, eta) == pytest.approx(ref, rel=1e-13)
        seq = DeformedSequence.negative_binomial(m, 1.0, 20)
        assert asym_polynomials(seq, None, eta, k)[k] == pytest.approx(ref, rel=1e-12)


def test_general_path_matches_known_f_path():
    # the division and power recurrences agree with the exp path for moderate orders
    known = DeformedSequence.negative_binomial(2.0, 1.0, 12)
    plain = DeformedSequence.from_log_xfact(known.log_xfact)
    for eta in (0.25, 0.75):
        assert np.allclose(asym_polynomials(plain, None, eta, 12),
                           asym_polynomials(known, None, eta, 12), rtol=1e-9)
        assert np.allclose(sym_polynomials(plain, None, eta, 12),
                           sym_polynomials(known, None, eta, 12), rtol=1e-9)


def test_explicit_norm_is_validated():
    seq = DeformedSequence.gs(10)
    with pytest.raises(ValueError):
        asym_polynomials(seq, ps.exp_series(10, 2.0), 0.5, 5)
    out = asym_polynomials(seq, ps.exp_series(10), 0.5, 5)
    assert np.allclose(out, 0.5 ** np.arange(6))
    with pytest.raises(DomainError):
        asym_polynomials(seq, None, 1.5, 5)


def test_abel_closed_forms():
    seq = DeformedSequence.abel(2.0, 30)
    q = sym_polynomials(seq, None, 0.4, 10)
    assert np.allclose(q, [abel_q(2.0, n, 0.4) for n in range(11)], rtol=1e-12)
    assert np.allclose(sym_law(seq, 6, 0.4).probs, abel_sym_pmf(2.0, 6, 0.4), rtol=1e-12)
    assert abel_sym_pmf(2.0, 6, 0.4).sum() == pytest.approx(1.0, rel=1e-13)


def test_sequence_properties():
    assert DeformedSequence.gs(10).strictly_increasing
    assert DeformedSequence.negative_binomial(2.0, 1.0, 10).strictly_increasing
    x = DeformedSequence.abel(10.0, 300).x
    # increases first, then settles on beta/e from above: not monotone
    assert not DeformedSequence.abel(10.0, 300).strictly_increasing
    assert x[1] == 1.0


def test_string_probabilities_for_gs():
    law = asym_law(DeformedSequence.gs(10), 4, 0.3)
    k = np.arange(5)
    assert np.allclose(law.string_probs, 0.3 ** k * 0.7 ** (4 - k), rtol=1e-13)


def test_cst_classification():
    rep = cst_check(ps.exp_series(12), 12, (0.2, 0.5, 0.8))
    assert rep.in_sigma_plus and rep.poly_check_passed
    geo = ps.TruncatedSeries(np.ones(13))
    assert cst_check(geo, 12, (0.3,)).in_sigma_plus
    bad = ps.TruncatedSeries([1.0, 1.0, 0.1, 0.5] + [0.0] * 9)
    rep = cst_check(bad, 12, (0.2, 0.5, 0.8))
    assert not rep.in_sigma_plus
    assert rep.f_coeffs[2] < 0


def test_deformed_bernoulli_against_rhs():
    f = make_family("perelomov", kappa=1.5)
    for n in (0, 2, 5):
        assert deformed_bernoulli(f, 0.6, 0.4, n) == pytest.approx(
            deformed_bernoulli_rhs(f, 0.6, 0.4, n), rel=1e-10)
    with pytest.raises(DomainError):
        deformed_bernoulli(make_family("sg"), 1.0, 0.5, 1)


def test_variance_identity_and_log_bound_on_hermite():
    f = make_family("hermite", a=1.0)
    r1 = prop1_check(f, [0.5, 1.0, 2.0])
    assert r1.passed and all(r.extra > 0 for r in r1.rows)
    r2 = prop2_check(f, [0.5, 2.0, 5.0])
    assert r2.passed and all(r.lhs < r.rhs for r in r2.rows)


def test_variance_identity_negative_off_sigma_plus():
    # spin is sub-Poissonian, so its variance identity has a negative right side
    r1 = prop1_check(make_family("spin", n_j=4), [0.3, 0.5, 0.9])
    assert not r1.passed
    assert all(abs(r.lhs - r.rhs) < 1e-12 and r.rhs < 0 for r in r1.rows)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.5, 8.0), st.integers(1, 25), st.floats(0.0, 1.0))
def test_laws_are_probabilities(m, n, eta):
    seq = DeformedSequence.negative_binomial(m, 1.0, 40)
    for law in (asym_law(seq, n, eta), sym_law(seq, n, eta)):
        assert abs(law.total() - 1.0) < 1e-10
        assert law.probs.min() >= -1e-12


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["gs", "hermite", "abel", "nb"]), st.integers(1, 20), st.floats(0.0, 1.0))
def test_symmetric_law_reflection(kind, n, eta):
    seq = {"gs": DeformedSequence.gs(30), "hermite": DeformedSequence.hermite(0.5, 30),
           "abel": DeformedSequence.abel(2.0, 30),
           "nb": DeformedSequence.negative_binomial(2.5, 1.0, 30)}[kind]
    a, b = sym_law(seq, n, eta), sym_law(seq, n, 1.0 - eta)
    assert np.max(np.abs(a.probs - b.probs[::-1])) < 1e-12
    assert a.mean() == pytest.approx(eta * n, abs=1e-10)


def test_variance_identity_outside_convergence_raises():
    from ancs.errors import TruncationError
    with pytest.raises(TruncationError):
        prop1_check(make_family("spin", n_j=4), [1.5])
