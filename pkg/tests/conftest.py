import os
import sys

import pytest

from smtffa import conway

DATA = os.path.join(os.path.dirname(__file__), "data")


@pytest.fixture(autouse=True)
def _sandbox(tmp_path, monkeypatch):
    # keep Conway caches out of the working directory
    monkeypatch.setenv(conway.ENV_CACHE, str(tmp_path / "conway.txt"))
    monkeypatch.chdir(tmp_path)
    conway.set_default_cache(conway.ConwayCache(autosave=False))
    yield
    conway.set_default_cache(None)


@pytest.fixture
def data_path():
    return lambda name: os.path.join(DATA, name)


@pytest.fixture
def self_solver():
    """Command line that runs this package as a stand-in external solver."""
    return (sys.executable, "-m", "smtffa", "solve", "{file}")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
