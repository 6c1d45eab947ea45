"""Observers: deterministic estimate-tracking machines with boolean outputs.

The observer of a machine tracks, after each event, the set of states the
machine could be in. Its output flags whether that estimate touches the
critical set. A machine is critically observable exactly when every flagged
estimate lies wholly inside the critical set, so the flag is never ambiguous.

A decentralized observer keeps one local observer per network member and
combines their flags with OR; composing the bank yields a machine isomorphic
to the observer of the composed network.
"""

from __future__ import annotations

import random
from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

from .compose import Network
from .errors import (
    BudgetExceededError,
    InvalidInputError,
    MalformedFsmError,
    TraceError,
)
from .fsm import Fsm, Word, step

# An estimate is a nonempty frozenset of plant states. Composed banks use
# tuples of estimates, one per member, as their states.
ObserverState = object


def state_text(z: ObserverState) -> str:
    """Canonical text for an observer state: "{p,q}" or "({p},{q,r})"."""
    if isinstance(z, frozenset):
        return "{" + ",".join(sorted(z)) + "}"
    if isinstance(z, tuple):
        return "(" + ",".join(state_text(part) for part in z) + ")"
    return str(z)


def state_sort_key(z: ObserverState):
    if isinstance(z, frozenset):
        return (len(z), tuple(sorted(z)))
    return tuple(state_sort_key(part) for part in z)


def _nonempty(z: ObserverState) -> bool:
    if isinstance(z, frozenset):
        return bool(z)
    if isinstance(z, tuple):
        return bool(z) and all(_nonempty(part) for part in z)
    return False


class ObserverFsm:
    """Deterministic machine over state estimates, with a 0/1 output per state.

    States are kept in discovery order so that "first violating state" means
    the same thing on every run. Equality is structural and order-free.
    """

    __slots__ = (
        "states",
        "initial",
        "alphabet",
        "outputs",
        "_trans",
        "_moves",
        "_state_set",
        "_key",
    )

    def __init__(
        self,
        states: Sequence[ObserverState],
        initial: ObserverState,
        alphabet: Iterable[str],
        transitions: Mapping[tuple[ObserverState, str], ObserverState],
        outputs: Mapping[ObserverState, int],
    ):
        self.states = tuple(states)
        self._state_set = frozenset(self.states)
        self.initial = initial
        self.alphabet = frozenset(alphabet)
        self._trans = dict(transitions)
        self.outputs = dict(outputs)

        if len(self._state_set) != len(self.states):
            raise MalformedFsmError("duplicate observer states")
        if initial not in self._state_set:
            raise MalformedFsmError("initial estimate missing from state set")
        for z in self.states:
            if not _nonempty(z):
                raise MalformedFsmError("the empty estimate cannot be an observer state")
            if self.outputs.get(z) not in (0, 1):
                raise MalformedFsmError(f"state {state_text(z)} needs a 0/1 output")
        if len(self.outputs) != len(self.states):
            raise MalformedFsmError("outputs given for unknown states")
        self._moves: dict[ObserverState, dict[str, ObserverState]] = {}
        for (src, label), dst in self._trans.items():
            if src not in self._state_set or dst not in self._state_set:
                raise MalformedFsmError("transition endpoint is not an observer state")
            if label not in self.alphabet:
                raise MalformedFsmError(f"transition label {label!r} not in alphabet")
            self._moves.setdefault(src, {})[label] = dst

        seen = {initial}
        frontier = deque([initial])
        while frontier:
            z = frontier.popleft()
            for dst in self._moves.get(z, {}).values():
                if dst not in seen:
                    seen.add(dst)
                    frontier.append(dst)
        if seen != self._state_set:
            unreachable = sorted(state_text(z) for z in self._state_set - seen)
            raise MalformedFsmError(f"unreachable observer states: {unreachable}")

        self._key = (
            self._state_set,
            self.initial,
            self.alphabet,
            frozenset(self._trans.items()),
            frozenset(self.outputs.items()),
        )

    def succ_state(self, z: ObserverState, label: str) -> ObserverState | None:
        """Unique successor estimate, or None when the word leaves the language."""
        return self._trans.get((z, label))

    def moves(self, z: ObserverState) -> Mapping[str, ObserverState]:
        return self._moves.get(z, {})

    def output(self, z: ObserverState) -> int:
        return self.outputs[z]

    def transitions(self) -> list[tuple[ObserverState, str, ObserverState]]:
        """Transition triples in canonical (source, label) order."""
        return sorted(
            ((src, label, dst) for (src, label), dst in self._trans.items()),
            key=lambda t: (state_sort_key(t[0]), t[1]),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ObserverFsm):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return (
            f"ObserverFsm(states={len(self.states)}, "
            f"initial={state_text(self.initial)}, alphabet={sorted(self.alphabet)})"
        )


@dataclass(frozen=True)
class Verdict:
    """Outcome of an observability check.

    When not observable, ``witness`` is the first estimate found that raises
    the flag without lying wholly inside the critical set.
    """

    observable: bool
    witness: ObserverState | None = None

    def __str__(self) -> str:
        if self.observable:
            return "observable"
        return f"not observable, witness {state_text(self.witness)}"


def build_observer(m: Fsm, max_states: int | None = None) -> ObserverFsm:
    """Subset construction seeded at the full initial-state estimate."""
    z0 = frozenset(m.initial)
    states: list[frozenset[str]] = [z0]
    seen = {z0}
    trans: dict[tuple[ObserverState, str], ObserverState] = {}
    outputs: dict[ObserverState, int] = {z0: 1 if z0 & m.critical else 0}
    labels = sorted(m.alphabet)
    frontier = deque([z0])
    while frontier:
        if max_states is not None and len(seen) > max_states:
            raise BudgetExceededError(f"observer exceeded {max_states} states")
        z = frontier.popleft()
        for label in labels:
            image = step(m, z, label)
            if not image:
                continue
            trans[(z, label)] = image
            if image not in seen:
                seen.add(image)
                states.append(image)
                outputs[image] = 1 if image & m.critical else 0
                frontier.append(image)
    return ObserverFsm(states, z0, m.alphabet, trans, outputs)


def check_observable(obs: ObserverFsm, critical: Iterable[str]) -> Verdict:
    """Decide critical observability from a built observer.

    The machine it observes is critically observable exactly when every
    flagged estimate is contained in ``critical``. States are scanned in
    discovery order, so the witness is reproducible.
    """
    crit = frozenset(critical)
    for z in obs.states:
        if not isinstance(z, frozenset):
            raise InvalidInputError(
                "check_observable needs estimate states; composed banks are "
                "checked through the pipeline"
            )
        if obs.output(z) == 1 and not z <= crit:
            return Verdict(False, z)
    return Verdict(True)


def observer_run(obs: ObserverFsm, word: Word) -> list[tuple[ObserverState, int]]:
    """Estimate/output trajectory along a word, the initial estimate included."""
    for label in word:
        if label not in obs.alphabet:
            raise InvalidInputError(f"label {label!r} not in observer alphabet")
    z = obs.initial
    out = [(z, obs.output(z))]
    for i, label in enumerate(word):
        z = obs.succ_state(z, label)
        if z is None:
            raise TraceError(
                f"word is not a trace of the observed machine "
                f"(no move on {label!r} at position {i})"
            )
        out.append((z, obs.output(z)))
    return out


@dataclass(frozen=True)
class DecentralizedObserver:
    """A bank of local observers, one per network member, OR-combined."""

    locals: tuple[tuple[str, ObserverFsm], ...]

    def __post_init__(self):
        if not self.locals:
            raise InvalidInputError("a decentralized observer needs at least one local")
        names = [name for name, _ in self.locals]
        if len(set(names)) != len(names):
            raise InvalidInputError(f"duplicate local names in {names}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.locals)

    @property
    def observers(self) -> tuple[ObserverFsm, ...]:
        return tuple(obs for _, obs in self.locals)


def build_decentralized(
    network: Network, max_states: int | None = None
) -> DecentralizedObserver:
    """One full local observer per member, no composition performed."""
    return DecentralizedObserver(
        tuple((name, build_observer(m, max_states)) for name, m in network.members)
    )


def compose_decentralized(
    d: DecentralizedObserver, max_states: int | None = None
) -> ObserverFsm:
    """Synchronous product of the bank, flags OR-combined.

    States are aggregates: one estimate per member. A shared label moves
    every local owning it, and blocks when any of them has no move. With a
    single local the bank composes to that local itself.
    """
    if len(d.locals) == 1:
        return d.locals[0][1]
    observers = d.observers
    alphabet: set[str] = set()
    for obs in observers:
        alphabet |= obs.alphabet
    labels = sorted(alphabet)
    owners = {
        label: tuple(i for i, obs in enumerate(observers) if label in obs.alphabet)
        for label in labels
    }

    z0 = tuple(obs.initial for obs in observers)
    states: list[ObserverState] = [z0]
    seen = {z0}
    trans: dict[tuple[ObserverState, str], ObserverState] = {}
    outputs: dict[ObserverState, int] = {
        z0: 1 if any(obs.output(z) for obs, z in zip(observers, z0)) else 0
    }
    frontier = deque([z0])
    while frontier:
        if max_states is not None and len(seen) > max_states:
            raise BudgetExceededError(f"composed bank exceeded {max_states} states")
        agg = frontier.popleft()
        for label in labels:
            parts = list(agg)
            blocked = False
            for i in owners[label]:
                nxt = observers[i].succ_state(agg[i], label)
                if nxt is None:
                    blocked = True
                    break
                parts[i] = nxt
            if blocked:
                continue
            successor = tuple(parts)
            trans[(agg, label)] = successor
            if successor not in seen:
                seen.add(successor)
                states.append(successor)
                outputs[successor] = (
                    1 if any(obs.output(z) for obs, z in zip(observers, successor)) else 0
                )
                frontier.append(successor)
    return ObserverFsm(states, z0, alphabet, trans, outputs)


def validate_critical_observer(obs: ObserverFsm, m: Fsm) -> bool:
    """Exact check that ``obs`` classifies every run of ``m`` correctly.

    Walks all reachable (plant state, observer state) pairs that share a
    trace and compares the flag with actual criticality at every step. This
    covers every run of any length, not a sample.
    """
    if obs.alphabet != m.alphabet:
        raise InvalidInputError("observer and machine must share an alphabet")
    pairs = {(x, obs.initial) for x in m.initial}
    frontier = deque(pairs)
    while frontier:
        x, z = frontier.popleft()
        if obs.output(z) != (1 if x in m.critical else 0):
            return False
        for label, dsts in m.moves(x).items():
            z2 = obs.succ_state(z, label)
            if z2 is None:
                # The plant can move but the observer cannot follow the run.
                return False
            for x2 in dsts:
                if (x2, z2) not in pairs:
                    pairs.add((x2, z2))
                    frontier.append((x2, z2))
    return True


def sampled_runs_agree(
    obs: ObserverFsm,
    m: Fsm,
    rng: random.Random,
    runs: int = 100,
    max_len: int = 10,
) -> bool:
    """Spot-check observer flags along random runs of the plant.

    A False answer is definitive; True only says the sample found nothing.
    """
    if obs.alphabet != m.alphabet:
        raise InvalidInputError("observer and machine must share an alphabet")
    for _ in range(runs):
        x = rng.choice(sorted(m.initial))
        z = obs.initial
        if obs.output(z) != (1 if x in m.critical else 0):
            return False
        for _ in range(max_len):
            enabled = [
                (label, dst)
                for label in sorted(m.moves(x))
                for dst in sorted(m.succ(x, label))
            ]
            if not enabled:
                break
            label, x = rng.choice(enabled)
            z = obs.succ_state(z, label)
            if z is None:
                return False
            if obs.output(z) != (1 if x in m.critical else 0):
                return False
    return True
