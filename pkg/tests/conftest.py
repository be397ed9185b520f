import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from proust.environment import EMPTY_ENV, postulate
from proust.protocol import build_env_from_script, load_corpus
from proust.terms import TypeSort


@pytest.fixture(scope="session")
def prop_env():
    """Three postulated atoms."""
    env = EMPTY_ENV
    for name in ("A", "B", "C"):
        env = postulate(env, name, TypeSort())
    return env


@pytest.fixture(scope="session")
def church_env():
    return build_env_from_script(load_corpus("church.pr"))


@pytest.fixture(scope="session")
def peano_env():
    return build_env_from_script(load_corpus("peano.pr"))


@pytest.fixture(scope="session")
def classical_env():
    return build_env_from_script(load_corpus("classical.pr"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(sys.modules.get("test_acceptance"), "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for line in results:
            terminalreporter.write_line(line)
