import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ancs.errors import DomainError
from ancs.families import make_family
from ancs.helstrom import (delta, find_hb_zeros, helstrom_of_nbar, helstrom_pure,
                           overlap_of_nbar, sign_summary)


def naive(o, xi0):
    return 0.5 * (1 - math.sqrt(1 - 4 * xi0 * (1 - xi0) * o))


@settings(max_examples=200)
@given(st.floats(0.0, 1.0), st.floats(0.01, 0.99))
def test_pure_bound_matches_textbook_form(o, xi0):
    p = helstrom_pure(o, xi0)
    assert p == pytest.approx(naive(o, xi0), abs=1e-15)
    assert 0.0 <= p <= min(xi0, 1 - xi0) + 1e-16


def test_pure_bound_small_overlap_is_accurate():
    # the naive form loses every digit here
    assert helstrom_pure(1e-20, 0.5) == pytest.approx(0.25e-20, rel=1e-15)


def test_pure_bound_domain():
    with pytest.raises(DomainError):
        helstrom_pure(1.5)
    with pytest.raises(DomainError):
        helstrom_pure(0.5, 1.0)


def test_gs_delta_vanishes():
    gs = make_family("gs")
    assert all(abs(delta(gs, x)) < 1e-15 for x in np.linspace(0, 10, 21))
    assert helstrom_of_nbar(gs, 2.0).p_h == pytest.approx(naive(math.exp(-2.0), 0.5), rel=1e-14)


def test_overlap_without_closed_form():
    # barut-girardello: h_0^2 = 1 / N(u)
    f = make_family("barut_girardello", kappa=2.0)
    o = overlap_of_nbar(f, 1.5)
    assert 0 < o < 1
    assert delta(f, 1.5) < 0


def test_efficiency_rescales_nbar():
    f = make_family("spin", n_j=6)
    assert delta(f, 4.0, eta=0.5) == pytest.approx(delta(f, 2.0), abs=1e-15)
    with pytest.raises(DomainError):
        helstrom_of_nbar(f, 1.0, eta=0.0)


def test_sign_summary_categories():
    grid = np.linspace(0.1, 3.0, 30)
    assert sign_summary(make_family("gs"), grid).category == "all_zero"
    assert sign_summary(make_family("spin", n_j=4), grid).category == "all_nonpositive"
    assert sign_summary(make_family("hermite", a=1.0), grid).category == "all_nonnegative"


def test_zeros_and_their_values():
    zs = find_hb_zeros(make_family("sg"), 0.0, 6.0)
    assert [round(z.nbar, 3) for z in zs] == [2.338, 5.001]
    assert all(z.residual < 1e-12 for z in zs)
    zs = find_hb_zeros(make_family("sgm"), 0.0, 6.0)
    assert [round(z.nbar, 3) for z in zs] == [2.082, 4.551]
    assert helstrom_of_nbar(make_family("sgm"), zs[0].nbar).p_h < 1e-12


def test_zeros_need_oscillating_family():
    with pytest.raises(DomainError):
        find_hb_zeros(make_family("gs"), 0.0, 6.0)
    with pytest.raises(DomainError):
        find_hb_zeros(make_family("sg"), 3.0, 1.0)
