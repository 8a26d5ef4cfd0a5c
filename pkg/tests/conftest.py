import os
import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from pdreason.parser import parse_aa, parse_pd  # noqa: E402

DATA = Path(__file__).parent / "data"

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def load_pd(name: str):
    return parse_pd((DATA / name).read_text())


def load_aa(name: str):
    return parse_aa((DATA / name).read_text())


@pytest.fixture
def data_dir() -> Path:
    return DATA


ACCEPTANCE: list[str] = []  # filled by test_acceptance, one line per criterion


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
