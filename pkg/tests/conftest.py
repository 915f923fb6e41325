import pytest

from videofoley.synthetic import build_golden, build_multiobject


@pytest.fixture(scope="session")
def golden(tmp_path_factory):
    return build_golden(tmp_path_factory.mktemp("golden"))


@pytest.fixture(scope="session")
def multiobject(tmp_path_factory):
    return build_multiobject(tmp_path_factory.mktemp("multi"))
