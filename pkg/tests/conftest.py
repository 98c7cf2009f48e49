from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import settings

settings.register_profile("seqcalc", max_examples=60, deadline=None)
settings.load_profile("seqcalc")

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def snapshot_dir() -> Path:
    return DATA / "oeis_snapshot"


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
