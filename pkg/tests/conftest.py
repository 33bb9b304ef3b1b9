import pathlib

import pytest

from neron.polyring import QQ, GF, make_ring

ROOT = pathlib.Path(__file__).resolve().parent.parent
PROBLEMS = ROOT / "problems"


@pytest.fixture
def problems():
    return PROBLEMS


@pytest.fixture
def R3():
    """x1..x3 over QQ with four algebra variables."""
    return make_ring(QQ, x=("base", 3), Y=("algebra", 4))


@pytest.fixture
def F101():
    return make_ring(GF(101), x=("base", 3), Y=("algebra", 3))


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("acceptance")
    if mark is None or call.when != "call":
        return
    number, title = mark.args[:2]
    ok = call.excinfo is None
    line = f"ACCEPTANCE {number} {'PASS' if ok else 'FAIL'} ({call.duration:.2f}s): {title}"
    item.config._acceptance_lines = getattr(item.config, "_acceptance_lines", []) + [line]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
