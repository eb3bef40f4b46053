import pytest

from helpers import CONNECTED, family


@pytest.fixture
def two_pairs_and_triple():
    return family("two_pairs_and_triple")


@pytest.fixture
def all_subsets_of_3():
    return family("all_subsets_of_3")


@pytest.fixture
def nested_chain():
    return family("nested_chain")


@pytest.fixture
def path_with_ground():
    return family("path_with_ground")


@pytest.fixture
def pairs_of_3():
    return family("pairs_of_3")


@pytest.fixture(params=sorted(CONNECTED))
def any_connected(request):
    return family(request.param)
