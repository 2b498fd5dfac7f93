"""Shared fixtures and the acceptance summary printed at the end of every run."""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pwtd.graph import Graph, blowup_graph, clique_graph, cycle_graph, path_graph  # noqa: E402

# criterion id -> (description, outcome)
ACCEPTANCE: dict[str, tuple[str, str]] = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None or call.when != "call":
        return
    ident, desc = marker.args
    passed = call.excinfo is None
    prev = ACCEPTANCE.get(ident)
    outcome = "PASS" if passed and (prev is None or prev[1] == "PASS") else "FAIL"
    ACCEPTANCE[ident] = (desc, outcome)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for ident in sorted(ACCEPTANCE, key=lambda s: int(s[2:])):
        desc, outcome = ACCEPTANCE[ident]
        terminalreporter.write_line(f"{ident} {outcome}: {desc}")


NAMED = {
    "P1": path_graph(1),
    "P4": path_graph(4),
    "P7": path_graph(7),
    "C4": cycle_graph(4),
    "C5": cycle_graph(5),
    "C8": cycle_graph(8),
    "K3": clique_graph(3),
    "K5": clique_graph(5),
    "E3": Graph.from_edges(3, []),
    "star5": Graph.from_edges(6, [(0, i) for i in range(1, 6)]),
    "K33": Graph.from_edges(6, [(i, j) for i in range(3) for j in range(3, 6)]),
    "petersen": Graph.from_edges(
        10,
        [(i, (i + 1) % 5) for i in range(5)] + [(5 + i, 5 + (i + 2) % 5) for i in range(5)] + [(i, i + 5) for i in range(5)],
    ),
    "bl32": blowup_graph(3, 2),
    "bl41": blowup_graph(4, 1),
    "bl42": blowup_graph(4, 2),
}


@pytest.fixture(params=sorted(NAMED))
def named_graph(request):
    return request.param, NAMED[request.param]
