"""Shared fixtures: the two small reference machines used throughout."""

from __future__ import annotations

import pytest

from critnet import Fsm, Network

# Filled by the acceptance tests; echoed after the run so the per-criterion
# lines survive output capture.
acceptance_lines: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)


def make_fsm_a() -> Fsm:
    """Two-state loop p -a-> q -b-> p with q critical; critically observable."""
    return Fsm(
        states=["p", "q"],
        initial=["p"],
        alphabet=["a", "b"],
        transitions=[("p", "a", "q"), ("q", "b", "p")],
        critical=["q"],
    )


def make_fsm_b() -> Fsm:
    """Branching machine r -a-> {s, t} with t critical; not critically observable."""
    return Fsm(
        states=["r", "s", "t"],
        initial=["r"],
        alphabet=["a"],
        transitions=[("r", "a", "s"), ("r", "a", "t")],
        critical=["t"],
    )


def make_converse_pair() -> Network:
    """Network that is observable even though its first member is not.

    The first member branches blindly into a critical and a non-critical
    state, so on its own the estimate after "a" straddles. The second member
    also owns "a" and lands in a critical state there, which makes every
    product state after "a" critical; the ambiguity stops mattering.
    """
    m1 = Fsm(
        states=["1", "2", "3"],
        initial=["1"],
        alphabet=["a", "b", "c"],
        transitions=[
            ("1", "a", "2"),
            ("1", "a", "3"),
            ("2", "b", "1"),
            ("3", "c", "1"),
        ],
        critical=["3"],
    )
    m2 = Fsm(
        states=["5", "6"],
        initial=["5"],
        alphabet=["a", "b", "c"],
        transitions=[
            ("5", "a", "6"),
            ("6", "b", "5"),
            ("6", "c", "5"),
        ],
        critical=["6"],
    )
    return Network((("P", m1), ("Q", m2)))


@pytest.fixture
def fsm_a() -> Fsm:
    return make_fsm_a()


@pytest.fixture
def fsm_b() -> Fsm:
    return make_fsm_b()


@pytest.fixture
def net_ab() -> Network:
    return Network((("A", make_fsm_a()), ("B", make_fsm_b())))
