import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture(autouse=True)
def _no_ambient_dataset(monkeypatch, request):
    # keep unit tests independent of a developer's EDGEBENCH_DATA
    if "dataset" not in request.keywords:
        monkeypatch.delenv("EDGEBENCH_DATA", raising=False)


# -- acceptance summary --------------------------------------------------------

_results = []


def record(criterion: str, passed, detail: str = "") -> None:
    """Note an outcome; ``passed=None`` marks a criterion that could not run."""
    _results.append((criterion, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for crit, passed, detail in _results:
        status = "SKIP" if passed is None else "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{status}  {crit}" + (f"  [{detail}]" if detail else ""))
