import pytest

from hurwitzlab.quadfield import AlphaParam, make_field


@pytest.fixture(scope="session")
def f2():
    return make_field(2)


@pytest.fixture(scope="session")
def f3():
    return make_field(3)


@pytest.fixture(scope="session")
def f5():
    return make_field(5)


@pytest.fixture(scope="session")
def f10():
    return make_field(10)


@pytest.fixture(scope="session")
def alpha2p():
    """(2 + sqrt(2)) / 4, the workhorse test parameter."""
    return AlphaParam.make(4, 2, 1, 2)


@pytest.fixture(scope="session")
def alpha2m():
    return AlphaParam.make(4, 2, -1, 2)


@pytest.fixture(scope="session")
def alpha3p():
    return AlphaParam.make(5, 3, 1, 3)
