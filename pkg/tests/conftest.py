import pytest

from ancs.families import FamilySpec, make_family


@pytest.fixture
def fam():
    def build(kind, **params):
        return make_family(FamilySpec(kind, params))
    return build
