"""Shared fixtures and the acceptance-report hook.

The three fixtures are the hand-checked cases everything else is anchored to:
a single water-fill instance small enough to solve by hand, the two-BS
topology whose equilibrium (r = (5, 5, 8)) is known exactly, and the
two-client fixture whose optimal allocations form a one-parameter family with
identical throughput.
"""

import numpy as np
import pytest

from ratagg import ScenarioParams, Topology, WaterfillInput, generate_random
from ratagg.scenarios import alpha_family_example

# (criterion number, passed, one-line detail), filled by tests/test_acceptance.py
ACCEPTANCE_LINES: list[tuple[int, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(ACCEPTANCE_LINES):
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {verdict} - {detail}")


@pytest.fixture
def pencil_waterfill():
    """Three clients, keys 0.2 / 0.0 / 0.8; solution theta=0.6, k=2."""
    return WaterfillInput(
        bs_index=0,
        clients=np.array([0, 1, 2]),
        ext_throughput=np.array([2.0, 0.0, 4.0]),
        weights=np.ones(3),
        rates=np.array([10.0, 10.0, 5.0]),
    )


@pytest.fixture
def embedded_topo():
    """3 clients x 2 BSs; from equal split the dynamics settle at r=(5,5,8)."""
    return Topology(
        rates=np.array([[10.0, 4.0], [10.0, 0.0], [5.0, 8.0]]),
        weights=np.ones(3),
        bs_tech=("wifi", "cellular"),
    )


@pytest.fixture
def alpha_fixture():
    """Topology with a one-parameter optimal family, all with r=(1,2)."""
    return alpha_family_example()


@pytest.fixture
def random_topo():
    return generate_random(ScenarioParams(num_clients=10, num_bss=10, seed=7))
