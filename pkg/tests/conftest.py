import os
from functools import lru_cache

import pytest

from eulerchi.catalog import group_by_name

SLOW = os.environ.get("EULER_SLOW", "") not in ("", "0")


@lru_cache(maxsize=None)
def named(name: str):
    """Cached catalog group (the universe); use ``.whole()`` for the subgroup handle."""
    return group_by_name(name)


@pytest.fixture(scope="session")
def gl32():
    return named("GL(3,2)")


@pytest.fixture(scope="session")
def m11():
    return named("M11")


def pytest_collection_modifyitems(config, items):
    if SLOW:
        return
    skip = pytest.mark.skip(reason="slow; set EULER_SLOW=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    """Keep the call-phase report on the item so fixtures can see the outcome."""
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep
