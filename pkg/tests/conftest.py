import os
import sys
from functools import lru_cache

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from genset.analysis import Analysis  # noqa: E402

EXTENDED = os.environ.get("GENSET_EXTENDED") == "1"

# groups up to order 60 small enough for full generating-graph oracles
SMALL_GROUPS = ["Sn:3", "Sn:4", "ElemAb:2,2", "ElemAb:3,2", "Cn:6", "Cn:12", "Cn:30",
                "Affine:2,2,3", "Affine:5,1,2", "Affine:5,1,4", "Affine:7,1,3",
                "custom:4|(1,2,3,4);(1,3)", "An:5"]


@lru_cache(maxsize=None)
def analysis(spec: str, cap: int = 5000) -> Analysis:
    return Analysis(spec, cap=cap)


@pytest.fixture
def get():
    return analysis


def pytest_configure(config):
    config.addinivalue_line("markers", "extended: slow checks, run with GENSET_EXTENDED=1")


def pytest_collection_modifyitems(config, items):
    if EXTENDED:
        return
    skip = pytest.mark.skip(reason="extended check; set GENSET_EXTENDED=1")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def record(criterion: str, ok: bool, detail: str) -> bool:
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'} [{criterion}] {detail}")
    print(ACCEPTANCE_LINES[-1])
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
