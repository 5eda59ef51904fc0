from __future__ import annotations

import pytest

import qmlc
from qmlc.compiler import compile_program
from qmlc.parser import parse_source
from qmlc.typecheck import check

ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = []


@pytest.fixture
def acceptance_log(request):
    return request.config.stash[ACCEPTANCE]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line[1])


@pytest.fixture(scope="session")
def teleport_source() -> str:
    return qmlc.TELEPORT.read_text()


@pytest.fixture(scope="session")
def teleport_program(teleport_source):
    return parse_source(teleport_source)


@pytest.fixture(scope="session")
def teleport_typed(teleport_program):
    return check(teleport_program)


@pytest.fixture(scope="session")
def teleport(teleport_program, teleport_typed):
    return compile_program(teleport_program, teleport_typed)
