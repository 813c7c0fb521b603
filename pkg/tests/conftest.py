from __future__ import annotations

import pytest
from hypothesis import settings

from tests.helpers import ACCEPTANCE, code_for

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def torus33():
    return code_for("hex-torus", 3, 3)


@pytest.fixture(scope="session")
def tri3():
    return code_for("tri-666", 3)


@pytest.fixture(scope="session")
def tri488_5():
    return code_for("tri-488", 5)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        label, ok = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {label}")
