import pytest

from helpers import make_project


@pytest.fixture
def project():
    return make_project()
