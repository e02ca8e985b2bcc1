import pytest

from relext import verify


@pytest.fixture(scope="session")
def a2():
    return verify.instance("A2")


@pytest.fixture(scope="session")
def a3():
    return verify.instance("A3-RR")


@pytest.fixture(scope="session")
def a3rl():
    return verify.instance("A3-RL")


@pytest.fixture(scope="session")
def st3():
    return verify.instance("stmod3")


@pytest.fixture(scope="session")
def st4():
    return verify.instance("stmod4")


@pytest.fixture(scope="session", params=["A2", "A3-RR", "A3-RL", "stmod3", "stmod4"])
def small(request):
    return verify.instance(request.param)
