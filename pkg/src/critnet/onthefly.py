"""Integrated decision and synthesis without materializing the composition.

The explorer walks aggregates (one estimate per member) breadth first, the
way the composed bank would, but stores only the per-member pieces. A fresh
aggregate whose combined estimate straddles the critical boundary settles
the question immediately: not observable, stop. If exploration drains the
frontier instead, the recorded pieces already span the projected local
observers and the network is observable.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from itertools import chain

from .compose import Network
from .errors import BudgetExceededError
from .fsm import step
from .observer import ObserverFsm, Verdict, state_sort_key

# One estimate per member, in member order.
AggregateState = tuple[frozenset[str], ...]


def straddle_test(parts: AggregateState, criticals: list[frozenset[str]]) -> bool:
    """Whether a combined estimate mixes critical and non-critical states.

    The combined estimate is the cartesian product of the parts, where a
    tuple is critical as soon as one component is. The product touches the
    critical set iff some part intersects its member's critical set, and is
    contained in it iff some part is a subset of one. This closed form
    avoids enumerating the product.
    """
    touches = any(z & c for z, c in zip(parts, criticals))
    if not touches:
        return False
    contained = any(z <= c for z, c in zip(parts, criticals))
    return not contained


@dataclass(frozen=True)
class OnTheFlyOutcome:
    """Result of the integrated exploration.

    ``locals`` holds the projected local observers (per member, in member
    order) and is None when the network is not observable. The witnessed
    fields expose what had been recorded when exploration stopped; on the
    observable outcome the finalized locals extend the witnessed transitions
    with every transition of the full local observer whose endpoints both
    survived the projection.
    """

    verdict: Verdict
    locals: tuple[tuple[str, ObserverFsm], ...] | None
    aggregates_seen: int
    generations: int
    witnessed_states: tuple[tuple[frozenset[str], ...], ...]
    witnessed_transitions: tuple[
        tuple[tuple[frozenset[str], str, frozenset[str]], ...], ...
    ]


def _aggregate_key(agg: AggregateState):
    return tuple(state_sort_key(z) for z in agg)


def run_onthefly(
    network: Network,
    max_states: int | None = None,
    on_generation: Callable[[int, int, int], None] | None = None,
) -> OnTheFlyOutcome:
    """Decide observability and synthesize projected locals in one pass.

    Exploration is breadth first by generation; aggregates within a
    generation go in canonical order and labels in sorted order, so the
    first straddling aggregate (the witness) is reproducible. The optional
    ``on_generation`` callback receives (generation index, frontier size,
    aggregates seen so far) at the start of each generation.
    """
    machines = network.machines
    names = network.names
    criticals = [m.critical for m in machines]
    alphabet = sorted(set(chain.from_iterable(m.alphabet for m in machines)))
    owners = {
        label: tuple(i for i, m in enumerate(machines) if label in m.alphabet)
        for label in alphabet
    }

    init = tuple(frozenset(m.initial) for m in machines)
    # The initial aggregate is never straddle-tested: construction forces
    # each member's initial states to one side of its critical set, which
    # puts the initial product wholly on one side too.
    seen: set[AggregateState] = {init}
    rec_states: list[dict[frozenset[str], None]] = [
        dict.fromkeys([z]) for z in init
    ]
    rec_trans: list[dict[tuple[frozenset[str], str], frozenset[str]]] = [
        {} for _ in machines
    ]

    def outcome(verdict: Verdict, locals_) -> OnTheFlyOutcome:
        return OnTheFlyOutcome(
            verdict=verdict,
            locals=locals_,
            aggregates_seen=len(seen),
            generations=generation,
            witnessed_states=tuple(tuple(d) for d in rec_states),
            witnessed_transitions=tuple(
                tuple((src, label, dst) for (src, label), dst in d.items())
                for d in rec_trans
            ),
        )

    generation = 0
    frontier = [init]
    while frontier:
        if on_generation is not None:
            on_generation(generation, len(frontier), len(seen))
        next_frontier: list[AggregateState] = []
        for agg in sorted(frontier, key=_aggregate_key):
            for label in alphabet:
                parts = list(agg)
                blocked = False
                for i in owners[label]:
                    image = step(machines[i], agg[i], label)
                    if not image:
                        blocked = True
                        break
                    parts[i] = image
                if blocked:
                    continue
                successor = tuple(parts)
                if successor not in seen:
                    if straddle_test(successor, criticals):
                        return outcome(Verdict(False, successor), None)
                    seen.add(successor)
                    if max_states is not None and len(seen) > max_states:
                        raise BudgetExceededError(
                            f"exploration exceeded {max_states} aggregates"
                        )
                    next_frontier.append(successor)
                for i in owners[label]:
                    if successor[i] not in rec_states[i]:
                        rec_states[i][successor[i]] = None
                    rec_trans[i][(agg[i], label)] = successor[i]
        frontier = next_frontier
        generation += 1

    locals_ = tuple(
        (names[i], _finalize_local(machines[i], rec_states[i]))
        for i in range(len(machines))
    )
    return outcome(Verdict(True), locals_)


def _finalize_local(m, kept: dict[frozenset[str], None]) -> ObserverFsm:
    """Full local observer restricted to the states the composition visits."""
    states = list(kept)
    trans: dict[tuple[frozenset[str], str], frozenset[str]] = {}
    for z in states:
        for label in sorted(m.alphabet):
            image = step(m, z, label)
            if image and image in kept:
                trans[(z, label)] = image
    outputs = {z: 1 if z & m.critical else 0 for z in states}
    return ObserverFsm(states, frozenset(m.initial), m.alphabet, trans, outputs)
