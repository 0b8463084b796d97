import math

import pytest

from hybrid_blockade.model import SystemParams

# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture
def hpb_params() -> SystemParams:
    D = math.sqrt(2 / 3) * 10.0
    return SystemParams(g1=10.0, g2=10.0, Delta=D, delta=4 * D, eta=0.1)
