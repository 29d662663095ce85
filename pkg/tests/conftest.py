import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from idmtree import _kernels  # noqa: E402


@pytest.fixture(params=_kernels.available())
def backend(request):
    """Run the test once per available kernel backend."""
    previous = _kernels.use(request.param)
    yield request.param
    _kernels.use(previous)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
