"""Shared fixtures: acceptance reporting and a small citation corpus."""

import pytest

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance():
    """Collect one pass/fail line per acceptance test for the final summary."""

    def record(line):
        ACCEPTANCE_LINES.append(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


TINY_CONTENT = """\
n1 1 0 0 0 A
n2 1 1 0 0 A
n3 0 1 0 0 A
n4 1 0 0 0 A
n5 0 0 1 1 B
n6 0 0 0 1 B
n7 0 0 1 0 B
n8 0 0 1 1 B
"""

# one reciprocal duplicate (n1/n2) and one dangling citation (n9)
TINY_CITES = """\
n1 n2
n2 n1
n2 n3
n3 n4
n1 n4
n1 n3
n5 n6
n6 n7
n7 n8
n5 n8
n5 n7
n4 n5
n9 n1
"""

TINY_STATS = {"n": 8, "m": 11, "K": 4, "classes": 2,
              "attr_entries": 11, "duplicates": 1, "dangling": 1}


@pytest.fixture
def tiny_corpus(tmp_path):
    """Write the 8-node citation corpus; returns (content, cites, stats)."""
    content = tmp_path / "tiny.content"
    cites = tmp_path / "tiny.cites"
    content.write_text(TINY_CONTENT, encoding="utf-8")
    cites.write_text(TINY_CITES, encoding="utf-8")
    return content, cites, dict(TINY_STATS)
