"""Parallel composition of machines and networks.

Members synchronize on shared labels and interleave on private ones. A shared
label fires only when every member owning it has at least one successor;
otherwise it blocks. A product state is critical as soon as one component is.

Product states are flattened to N-tuples with the textual encoding
"(x1,x2,...,xN)". Re-composing an already composed machine flattens again, so
association order changes neither state names nor structure. The encoding
assumes member state names do not themselves contain top-level commas inside
parentheses except as produced by composition.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import product

from .errors import BudgetExceededError, InvalidInputError, MalformedFsmError
from .fsm import Fsm


@dataclass(frozen=True)
class Network:
    """An ordered collection of named machines composed by synchronization."""

    members: tuple[tuple[str, Fsm], ...]

    def __post_init__(self):
        if not self.members:
            raise InvalidInputError("a network needs at least one member")
        names = [name for name, _ in self.members]
        if len(set(names)) != len(names):
            raise InvalidInputError(f"duplicate member names in {names}")
        if any(not name for name in names):
            raise InvalidInputError("member names must be nonempty")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.members)

    @property
    def machines(self) -> tuple[Fsm, ...]:
        return tuple(m for _, m in self.members)

    def alphabet(self) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for _, m in self.members:
            out |= m.alphabet
        return out

    def get(self, name: str) -> Fsm:
        for member_name, m in self.members:
            if member_name == name:
                return m
        raise KeyError(name)


def tuple_parts(name: str) -> tuple[str, ...]:
    """Split a product-encoded state name into its components.

    Names of the form "(a,b,c)" split at top-level commas; anything else is
    atomic. Single-component parentheses stay atomic so that composition
    never renames a state that merely looks bracketed.
    """
    if len(name) < 2 or not (name.startswith("(") and name.endswith(")")):
        return (name,)
    inner = name[1:-1]
    parts: list[str] = []
    depth = 0
    start = 0
    for i, ch in enumerate(inner):
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
            if depth < 0:
                return (name,)
        elif ch == "," and depth == 0:
            parts.append(inner[start:i])
            start = i + 1
    if depth != 0:
        return (name,)
    parts.append(inner[start:])
    if len(parts) < 2 or not all(parts):
        return (name,)
    return tuple(parts)


def product_state_name(member_states: Sequence[str]) -> str:
    """Canonical flattened name for a tuple of member states."""
    flat: list[str] = []
    for state in member_states:
        flat.extend(tuple_parts(state))
    return "(" + ",".join(flat) + ")"


def compose_many(machines: Sequence[Fsm], max_states: int | None = None) -> Fsm:
    """Accessible part of the synchronous product of the given machines.

    With a single machine this is the identity. ``max_states`` bounds the
    number of product states explored before giving up.
    """
    if not machines:
        raise InvalidInputError("nothing to compose")
    if len(machines) == 1:
        return machines[0]

    alphabet: set[str] = set()
    for m in machines:
        alphabet |= m.alphabet
    owners = {
        label: tuple(i for i, m in enumerate(machines) if label in m.alphabet)
        for label in alphabet
    }
    labels = sorted(alphabet)

    initial = sorted(product(*(sorted(m.initial) for m in machines)))
    seen: set[tuple[str, ...]] = set(initial)
    frontier: deque[tuple[str, ...]] = deque(initial)
    triples: list[tuple[tuple[str, ...], str, tuple[str, ...]]] = []
    while frontier:
        if max_states is not None and len(seen) > max_states:
            raise BudgetExceededError(f"product exceeded {max_states} states")
        parts = frontier.popleft()
        for label in labels:
            images: dict[int, frozenset[str]] = {}
            blocked = False
            for i in owners[label]:
                img = machines[i].succ(parts[i], label)
                if not img:
                    blocked = True
                    break
                images[i] = img
            if blocked:
                continue
            choices = [
                sorted(images[i]) if i in images else (parts[i],)
                for i in range(len(machines))
            ]
            for successor in product(*choices):
                triples.append((parts, label, successor))
                if successor not in seen:
                    seen.add(successor)
                    frontier.append(successor)

    names: dict[tuple[str, ...], str] = {}
    used: set[str] = set()
    for parts in seen:
        name = product_state_name(parts)
        if name in used:
            raise MalformedFsmError(f"product name collision at {name!r}")
        used.add(name)
        names[parts] = name
    critical = {
        names[parts]
        for parts in seen
        if any(x in m.critical for x, m in zip(parts, machines))
    }
    return Fsm(
        names.values(),
        (names[parts] for parts in initial),
        alphabet,
        ((names[a], label, names[b]) for a, label, b in triples),
        critical,
    )


def compose2(m1: Fsm, m2: Fsm, max_states: int | None = None) -> Fsm:
    """Parallel composition of two machines."""
    return compose_many([m1, m2], max_states=max_states)


def compose_network(network: Network, max_states: int | None = None) -> Fsm:
    """Monolithic machine equivalent to the whole network."""
    return compose_many(network.machines, max_states=max_states)
