import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from midlayer.layer_graph import build_layer_graph
from midlayer.mis_engine import list_mis

settings.register_profile(
    "default",
    max_examples=int(os.environ.get("HYPOTHESIS_EXAMPLES", "60")),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def b32():
    return build_layer_graph(3, 2)


@pytest.fixture(scope="session")
def b53():
    return build_layer_graph(5, 3)


@pytest.fixture(scope="session")
def b74():
    return build_layer_graph(7, 4)


@pytest.fixture(scope="session")
def mis_b32(b32):
    return list_mis(b32)


@pytest.fixture(scope="session")
def mis_b53(b53):
    return list_mis(b53)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.summary_lines():
        terminalreporter.write_line(line)
