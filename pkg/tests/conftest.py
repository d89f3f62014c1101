from __future__ import annotations

import pytest

from wilfcollapse.automaton import build_class
from wilfcollapse.words import Alphabet

import report


@pytest.fixture(scope="session")
def layered():
    """Sum closure of {1, 21}: layered permutations with layers of size at most 2."""
    return build_class({"kind": "alphabet", "letters": ["1", "21"]})


@pytest.fixture(scope="session")
def poly():
    return build_class({"kind": "basis", "basis": ["231", "312", "321", "2143"]})


@pytest.fixture(scope="session")
def abstract():
    return build_class({"kind": "abstract", "letters": ["a", "b", "c", "d"],
                        "forbidden": ["a.b.c", "d.b.d.b.c"]})


@pytest.fixture(scope="session")
def ab2():
    return Alphabet.from_permutations(["1", "21"])


@pytest.fixture(scope="session")
def ab3():
    return Alphabet.from_permutations(["1", "21", "231"])


def pytest_terminal_summary(terminalreporter):
    if report.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(report.RESULTS):
            terminalreporter.write_line(report.RESULTS[n])
