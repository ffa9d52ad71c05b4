import pytest

from hlprimes.sieve import Method, build_counter


@pytest.fixture(scope="session")
def counter_1e6():
    return build_counter(10**6, Method.SIEVE_TABLE)


@pytest.fixture(scope="session")
def counter_1e6_sub():
    return build_counter(10**6, Method.SUBLINEAR)


@pytest.fixture(scope="session")
def counter_1e8():
    return build_counter(10**8 + 2000, Method.SIEVE_TABLE)
