import pytest

from fullfield.bundles import Bundle
from fullfield.chiral import ChiralData
from fullfield.fixtures import REGULAR, load_fixture

_BUNDLES: dict[str, Bundle] = {}
_CHIRAL: dict[str, ChiralData] = {}


def get_bundle(name: str) -> Bundle:
    if name not in _BUNDLES:
        _BUNDLES[name] = load_fixture(name)
    return _BUNDLES[name]


def get_chiral(name: str) -> ChiralData:
    # shared so the pairing/dual caches warm up once per session
    if name not in _CHIRAL:
        _CHIRAL[name] = ChiralData(get_bundle(name))
    return _CHIRAL[name]


@pytest.fixture(scope="session", params=REGULAR)
def fixture_name(request):
    return request.param


@pytest.fixture(scope="session")
def ising():
    return get_chiral("ising")


@pytest.fixture(scope="session")
def fibonacci():
    return get_chiral("fibonacci")


@pytest.fixture(scope="session")
def z2():
    return get_chiral("z2k1")


@pytest.fixture(scope="session")
def z4():
    return get_chiral("z4k2")


@pytest.fixture(scope="session")
def trivial():
    return get_chiral("trivial")
