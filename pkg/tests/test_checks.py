import pytest

from ancs.checks import SUITES, run_suite


def test_suites_registered():
    assert set(SUITES) == {"power_series", "specfun", "an_core", "families",
                           "deformed_binomial", "helstrom"}


@pytest.mark.parametrize("suite", ["power_series", "specfun", "an_core", "families",
                                   "deformed_binomial", "helstrom"])
def test_suite_passes(suite):
    failed = [(r.name, r.deviation, r.tolerance) for r in run_suite(suite) if not r.passed]
    assert failed == []


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("bogus")
