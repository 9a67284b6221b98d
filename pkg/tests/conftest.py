import json
from pathlib import Path

import pytest

from qdiff.config import bundled_config, load_config

DATA = Path(__file__).parent / "data"
BUNDLED = ["t1_q3", "t2_q4", "t3_q6", "t4_q6"]


@pytest.fixture(scope="session")
def oracle():
    return json.loads((DATA / "oracle.json").read_text())


@pytest.fixture(scope="session")
def bundled():
    """Problem specs of the shipped configurations, keyed by name."""
    return {name: load_config(bundled_config(name)) for name in BUNDLED}


# -- acceptance summary -----------------------------------------------------

ACCEPTANCE = {}


@pytest.fixture
def record():
    """Store the outcome of one acceptance criterion for the summary."""
    def _record(number, title, passed, detail=""):
        ACCEPTANCE[number] = (title, bool(passed), detail)
        return passed
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, passed, detail = ACCEPTANCE[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:2d}. {title}: {detail}")
