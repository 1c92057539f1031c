"""Shared bundles.  Builds are cached per session because the numba kernels
compile once and the truncations are reused across modules."""

from __future__ import annotations

import pytest

from dcomplex.builders import build_C, build_D, d2_of
from dcomplex.domains import SurfaceModel


@pytest.fixture(scope="session")
def model05():
    return SurfaceModel(0, 5)


@pytest.fixture(scope="session")
def model12():
    return SurfaceModel(1, 2)


@pytest.fixture(scope="session")
def model04():
    return SurfaceModel(0, 4)


@pytest.fixture(scope="session")
def model11():
    return SurfaceModel(1, 1)


@pytest.fixture(scope="session")
def d05(model05):
    return build_D((0, 5), 2, model=model05)


@pytest.fixture(scope="session")
def d05_d2(d05):
    return d2_of(d05)


@pytest.fixture(scope="session")
def d12(model12):
    return build_D((1, 2), 2, model=model12)


@pytest.fixture(scope="session")
def d04(model04):
    return build_D((0, 4), 3, model=model04)


@pytest.fixture(scope="session")
def d11(model11):
    return build_D((1, 1), 3, model=model11)


@pytest.fixture(scope="session")
def c05(model05):
    return build_C((0, 5), 2, model=model05)


ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = {}


@pytest.fixture
def acceptance(request):
    """Results table filled by the acceptance tests, printed in the summary."""
    return request.config.stash[ACCEPTANCE]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(ACCEPTANCE, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
