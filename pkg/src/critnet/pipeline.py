"""End-to-end decision procedures with comparable cost accounting.

Two routes decide the same question. The baseline materializes every local
observer and their full composition, then scans for a flagged estimate that
escapes the critical set. The reduced route first drops members bisimilar to
an earlier one, then runs the on-the-fly exploration, which stores only
per-member pieces and stops at the first straddling aggregate.

Stored work is measured uniformly: a transition between aggregates costs the
sizes of all source and target estimates plus one for the label, and every
stored state carries one unit for its output bit. Time counts stored
transitions. Candidates rejected or abandoned before storage cost nothing,
so a first-step straddle yields a time ledger of zero.
"""

from __future__ import annotations

from dataclasses import dataclass

from .compose import Network
from .equivalence import EquivalenceClasses, quotient_network
from .observer import (
    DecentralizedObserver,
    ObserverFsm,
    Verdict,
    build_decentralized,
    compose_decentralized,
)
from .onthefly import OnTheFlyOutcome, run_onthefly, straddle_test

DEFAULT_STATE_BUDGET = 1_000_000


@dataclass(frozen=True)
class CostLedger:
    """Stored-data units (space) and stored-transition count (time)."""

    space: int
    time: int


@dataclass(frozen=True)
class PipelineReport:
    """Verdict plus the artifacts and costs a pipeline run produced."""

    algorithm: str
    verdict: Verdict
    locals: tuple[tuple[str, ObserverFsm], ...] | None
    classes: EquivalenceClasses | None
    ledger: CostLedger
    ledger_baseline: CostLedger | None = None


def _parts(z) -> tuple:
    return z if isinstance(z, tuple) else (z,)


def _estimate_size(z) -> int:
    return sum(len(part) for part in _parts(z))


def _observer_units(obs: ObserverFsm) -> tuple[int, int, int]:
    """(transition units, output units, transition count) for one machine."""
    triples = obs.transitions()
    s1 = sum(_estimate_size(src) + _estimate_size(dst) + 1 for src, _, dst in triples)
    return s1, len(obs.states), len(triples)


def ledger_for_observers(observers: list[ObserverFsm]) -> CostLedger:
    s1 = s2 = time = 0
    for obs in observers:
        a, b, t = _observer_units(obs)
        s1, s2, time = s1 + a, s2 + b, time + t
    return CostLedger(space=s1 + s2, time=time)


def ledger_for_outcome(outcome: OnTheFlyOutcome) -> CostLedger:
    """Cost of what the on-the-fly run actually stored.

    On the observable outcome that is the finalized projected locals; on an
    abort it is the states and transitions witnessed up to the straddle.
    """
    if outcome.locals is not None:
        return ledger_for_observers([obs for _, obs in outcome.locals])
    s1 = sum(
        len(src) + len(dst) + 1
        for member in outcome.witnessed_transitions
        for src, _, dst in member
    )
    s2 = sum(len(member) for member in outcome.witnessed_states)
    time = sum(len(member) for member in outcome.witnessed_transitions)
    return CostLedger(space=s1 + s2, time=time)


def check_aggregate_observer(
    composed: ObserverFsm, criticals: list[frozenset[str]]
) -> Verdict:
    """Scan a composed bank for a flagged aggregate not wholly critical.

    Works on aggregate states without expanding their product: an aggregate
    is flagged-but-escaping exactly when its parts straddle. States go in
    discovery order, so the witness is reproducible.
    """
    for z in composed.states:
        if straddle_test(_parts(z), criticals):
            return Verdict(False, z)
    return Verdict(True)


def run_algorithm1(
    network: Network, max_states: int | None = DEFAULT_STATE_BUDGET
) -> PipelineReport:
    """Baseline: build all local observers, compose them, scan the product.

    The ledger charges every stored artifact: each full local observer and,
    for multi-member networks, the composed bank as well.
    """
    bank = build_decentralized(network, max_states)
    composed = compose_decentralized(bank, max_states)
    criticals = [m.critical for m in network.machines]
    verdict = check_aggregate_observer(composed, criticals)
    stored = list(bank.observers)
    if len(bank.locals) > 1:
        stored.append(composed)
    return PipelineReport(
        algorithm="1",
        verdict=verdict,
        locals=bank.locals,
        classes=None,
        ledger=ledger_for_observers(stored),
    )


def run_algorithm3(
    network: Network,
    max_states: int | None = DEFAULT_STATE_BUDGET,
    run_baseline: bool = False,
) -> PipelineReport:
    """Reduce by bisimilarity, explore on the fly, lift the results back.

    The verdict transfers to the full network unchanged, and each original
    member is assigned the projected local observer of its class
    representative. With ``run_baseline`` the report also carries the
    baseline ledger on the original network for comparison.
    """
    reduced, classes = quotient_network(network)
    outcome = run_onthefly(reduced, max_states)
    locals_ = None
    if outcome.locals is not None:
        by_rep = dict(outcome.locals)
        locals_ = tuple(
            (name, by_rep[classes.rep_of(name)]) for name in network.names
        )
    baseline = None
    if run_baseline:
        baseline = run_algorithm1(network, max_states).ledger
    return PipelineReport(
        algorithm="3",
        verdict=outcome.verdict,
        locals=locals_,
        classes=classes,
        ledger=ledger_for_outcome(outcome),
        ledger_baseline=baseline,
    )


def run_onthefly_report(
    network: Network, max_states: int | None = DEFAULT_STATE_BUDGET
) -> PipelineReport:
    """On-the-fly exploration of the network as given, no reduction."""
    outcome = run_onthefly(network, max_states)
    return PipelineReport(
        algorithm="otf",
        verdict=outcome.verdict,
        locals=outcome.locals,
        classes=None,
        ledger=ledger_for_outcome(outcome),
    )
