from __future__ import annotations

from importlib import resources

import numpy as np
import pytest

from snc.formats import parse_kernels, parse_matrix, parse_network
from snc.gf import FieldSpec
from snc.lnc import LinearNetworkCode
from snc.network import Network

DATA = resources.files("snc") / "data"

# lines reported by the acceptance module, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def fig3() -> tuple[Network, FieldSpec]:
    return parse_network(DATA / "fig3.net")


@pytest.fixture(scope="session")
def fig3_code(fig3) -> LinearNetworkCode:
    net, f = fig3
    return parse_kernels(DATA / "fig3.kern", net, f)


@pytest.fixture(scope="session")
def fig3_q(fig3) -> np.ndarray:
    return parse_matrix(DATA / "fig3.Q", fig3[1])
