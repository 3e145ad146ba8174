"""Shared builds for the test suite, constructed once per session."""

import pytest

from seqent.construct import (
    build_log_infty,
    build_log_m,
    minimal_schedule,
)


@pytest.fixture(scope="session")
def m2k3():
    return build_log_m(2, 3, minimal_schedule(2, 3))


@pytest.fixture(scope="session")
def m2k2():
    return build_log_m(2, 2, minimal_schedule(2, 2))


@pytest.fixture(scope="session")
def m3k2():
    return build_log_m(3, 2, minimal_schedule(3, 2))


@pytest.fixture(scope="session")
def m3k3():
    return build_log_m(3, 3, minimal_schedule(3, 3))


@pytest.fixture(scope="session")
def dense4():
    return build_log_infty(4)


@pytest.fixture(scope="session")
def dense2():
    return build_log_infty(2)
