import random

import pytest

from posdkit.data import default_lexicon, paradigm_templates
from posdkit.paradigms import PARADIGM_IDS, REFERENCE_SEEDS, build_quad

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()


@pytest.fixture(scope="session")
def templates():
    return {pid: paradigm_templates(pid) for pid in PARADIGM_IDS}


@pytest.fixture(scope="session")
def reference_quads(lexicon, templates):
    """The documented example quad for each paradigm."""
    return {
        pid: build_quad(pid, lexicon, templates[pid], random.Random(REFERENCE_SEEDS[pid]))
        for pid in PARADIGM_IDS
    }


@pytest.fixture(scope="session")
def acceptance_report():
    def record(name: str, passed: bool, detail: str = ""):
        status = "PASS" if passed else "FAIL"
        suffix = f" ({detail})" if detail else ""
        ACCEPTANCE_LINES.append(f"ACCEPTANCE {name}: {status}{suffix}")
        assert passed, f"{name}{suffix}"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
