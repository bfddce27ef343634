import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from ancs.an_core import (bernoulli_transform, distribution, invert_nbar, mandel_sign_changes,
                          mean_photon_number, moments, phase_space_point, series_moments)
from ancs.errors import DomainError
from ancs.families import make_family


def test_gs_is_poisson(fam):
    gs = fam("gs")
    d = distribution(gs, 4.5)
    ref = stats.poisson.pmf(np.arange(d.probs.size), 4.5)
    assert np.max(np.abs(d.probs - ref)) < 1e-15
    assert d.tail_bound < 1e-14
    m = series_moments(gs, 4.5)
    assert m.nbar == pytest.approx(4.5, rel=1e-14)
    assert m.variance == pytest.approx(4.5, rel=1e-12)
    assert abs(m.mandel_q) < 1e-12


def test_spin_is_binomial(fam):
    d = distribution(fam("spin", n_j=7), 0.6)
    ref = stats.binom.pmf(np.arange(8), 7, 0.6 / 1.6)
    assert np.allclose(d.probs, ref, rtol=1e-13, atol=0)


def test_perelomov_is_negative_binomial(fam):
    d = distribution(fam("perelomov", kappa=1.5), 0.4)
    ref = stats.nbinom.pmf(np.arange(d.probs.size), 3, 0.6)
    assert np.allclose(d.probs, ref, rtol=1e-12, atol=1e-300)


def test_vacuum_at_origin(fam):
    d = distribution(fam("hermite", a=1.0), 0.0)
    assert list(d.probs) == [1.0]


def test_domain_errors(fam):
    with pytest.raises(DomainError):
        distribution(fam("perelomov", kappa=2.0), 1.0)
    with pytest.raises(DomainError):
        distribution(fam("gs"), -1.0)
    with pytest.raises(DomainError):
        invert_nbar(fam("spin", n_j=4), 4.0)
    with pytest.raises(DomainError):
        bernoulli_transform(distribution(fam("gs"), 1.0), 1.5)
    with pytest.raises(KeyError):
        moments(fam("sg"), 1.0, method="closed")


def test_moment_methods_agree(fam):
    f = fam("barut_girardello", kappa=2.0)
    a, b = moments(f, 3.0), moments(f, 3.0, method="series")
    assert a.nbar == pytest.approx(b.nbar, rel=1e-12)
    assert a.mandel_q == pytest.approx(b.mandel_q, rel=1e-10)


def test_q_at_origin(fam):
    assert moments(fam("spin", n_j=4), 0.0).mandel_q == 0.0
    assert moments(fam("sgm"), 0.0).mandel_q < 0


def test_phase_space_point(fam):
    z = phase_space_point(fam("gs"), 1.0 + 1.0j)
    assert z == pytest.approx(1.0 + 1.0j, abs=1e-14)
    assert phase_space_point(fam("gs"), 0) == 0


def test_mandel_sign_changes_none_for_gs_like(fam):
    assert mandel_sign_changes(fam("spin", n_j=4), np.linspace(0.1, 5, 10)) == []


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([("gs", {}), ("spin", {"n_j": 6}), ("perelomov", {"kappa": 2.0}),
                        ("barut_girardello", {"kappa": 1.0}), ("hermite", {"a": 0.7}),
                        ("abel", {"beta": 2.0}), ("sg", {}), ("sgm", {})]),
       st.floats(0.01, 0.9))
def test_normalized_and_invertible(kind_params, frac):
    kind, p = kind_params
    f = make_family(kind, **p)
    u = frac * min(f.u_max, 20.0)
    d = distribution(f, u)
    assert abs(d.total() - 1.0) < 1e-10
    assert d.probs.min() >= 0.0
    nb = mean_photon_number(f, u)
    assert invert_nbar(f, nb) == pytest.approx(u, rel=1e-8)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 8.0), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_bernoulli_semigroup_and_mean(u, e1, e2):
    d = distribution(make_family("hermite", a=1.0), u)
    once = bernoulli_transform(d, e1 * e2)
    twice = bernoulli_transform(bernoulli_transform(d, e1), e2)
    n = min(once.probs.size, twice.probs.size)
    assert np.max(np.abs(once.probs[:n] - twice.probs[:n])) < 1e-12
    assert once.mean() == pytest.approx(e1 * e2 * d.mean(), rel=1e-12, abs=1e-14)
    assert abs(once.total() - 1.0) < 1e-12
