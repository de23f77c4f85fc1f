import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "racg" / "fixtures"


@pytest.fixture
def fixtures():
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion, after the usual report."""
    rows = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if getattr(rep, "when", "call") != "call" or "test_acceptance.py::test_criterion_" not in rep.nodeid:
                continue
            name = rep.nodeid.split("::")[-1]
            rows.append((name, "PASS" if rep.passed else "FAIL"))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in sorted(rows):
        num = name.split("_")[2]
        terminalreporter.write_line(f"criterion {int(num):2d} {status}  {name}")
