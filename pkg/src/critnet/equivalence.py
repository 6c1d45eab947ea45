"""Machine equivalences: isomorphism, bisimulation, and network reduction.

Isomorphism here is structural identity up to state renaming, outputs and
initial states included. Bisimulation is the coarser behavioural match used
to drop redundant network members before synthesis: bisimilar members add no
information to the composed estimate, only state-space volume.
"""

from __future__ import annotations

import random
from collections import Counter, deque
from dataclasses import dataclass
from itertools import product

from .compose import Network, compose_network
from .fsm import Fsm, reachable_states
from .observer import (
    ObserverFsm,
    Verdict,
    build_observer,
    check_observable,
    sampled_runs_agree,
    validate_critical_observer,
)

Machine = Fsm | ObserverFsm


class _View:
    """Uniform read access to a machine-with-outputs of either kind."""

    __slots__ = ("states", "initials", "alphabet", "_succ", "_out")

    def __init__(self, m: Machine):
        if isinstance(m, Fsm):
            self.states = frozenset(m.states)
            self.initials = frozenset(m.initial)
            self.alphabet = m.alphabet
            self._succ = m.succ
            self._out = lambda x: 1 if x in m.critical else 0
        else:
            self.states = frozenset(m.states)
            self.initials = frozenset([m.initial])
            self.alphabet = m.alphabet
            self._succ = lambda z, a: (
                frozenset([m.succ_state(z, a)]) if m.succ_state(z, a) is not None else frozenset()
            )
            self._out = m.output

    def succ(self, state, label) -> frozenset:
        return self._succ(state, label)

    def output(self, state) -> int:
        return self._out(state)

    def accessible_states(self) -> frozenset:
        seen = set(self.initials)
        frontier = deque(self.initials)
        while frontier:
            x = frontier.popleft()
            for label in self.alphabet:
                for y in self.succ(x, label):
                    if y not in seen:
                        seen.add(y)
                        frontier.append(y)
        return frozenset(seen)

    def deterministic(self) -> bool:
        if len(self.initials) != 1:
            return False
        return all(
            len(self.succ(x, label)) <= 1 for x in self.states for label in self.alphabet
        )


@dataclass(frozen=True)
class IsoWitness:
    """A bijection on states witnessing isomorphism."""

    mapping: dict

    def __getitem__(self, state):
        return self.mapping[state]


def is_iso_witness(m1: Machine, m2: Machine, mapping: dict) -> bool:
    """Check a candidate bijection against the isomorphism conditions.

    The map must be a bijection of the full state sets that sends initial
    states onto initial states, preserves every output, and commutes with
    the transition relation on all reachable states.
    """
    v1, v2 = _View(m1), _View(m2)
    if v1.alphabet != v2.alphabet:
        return False
    if set(mapping) != set(v1.states):
        return False
    if set(mapping.values()) != set(v2.states) or len(mapping) != len(v2.states):
        return False
    if {mapping[x] for x in v1.initials} != set(v2.initials):
        return False
    if any(v1.output(x) != v2.output(mapping[x]) for x in v1.states):
        return False
    for x in v1.accessible_states():
        for label in v1.alphabet:
            image = {mapping[y] for y in v1.succ(x, label)}
            if image != set(v2.succ(mapping[x], label)):
                return False
    return True


def _refinement_classes(views: list[_View], states: list[tuple[int, object]]):
    """Iterated signature refinement over a disjoint union of machines.

    Two tagged states end in the same class only if an isomorphism (or
    bisimulation, which shares the invariant) could relate them.
    """
    labels = sorted(set().union(*(v.alphabet for v in views)))
    cls = {
        s: (views[s[0]].output(s[1]), s[1] in views[s[0]].initials) for s in states
    }
    while True:
        sig = {}
        for s in states:
            tag, x = s
            succ_sig = tuple(
                frozenset(cls[(tag, y)] for y in views[tag].succ(x, label))
                if label in views[tag].alphabet
                else frozenset()
                for label in labels
            )
            sig[s] = (cls[s], succ_sig)
        renumber = {v: i for i, v in enumerate(sorted(set(sig.values()), key=repr))}
        new_cls = {s: renumber[sig[s]] for s in states}
        if len(set(new_cls.values())) == len(set(cls.values())):
            return new_cls
        cls = new_cls


def _search_bijection(v1: _View, v2: _View, acc1: list, acc2: list) -> dict | None:
    """Backtracking bijection search on accessible parts, class-pruned."""
    cls = _refinement_classes([v1, v2], [(0, x) for x in acc1] + [(1, y) for y in acc2])
    by_class: dict[int, list] = {}
    for y in acc2:
        by_class.setdefault(cls[(1, y)], []).append(y)
    # Fewer candidates first keeps the tree narrow.
    order = sorted(acc1, key=lambda x: len(by_class.get(cls[(0, x)], [])))
    labels = sorted(v1.alphabet)
    mapping: dict = {}
    used: set = set()

    def consistent(x, y) -> bool:
        for label in labels:
            s1, s2 = v1.succ(x, label), v2.succ(y, label)
            if len(s1) != len(s2):
                return False
            for a in s1:
                if a in mapping and mapping[a] not in s2:
                    return False
        for a, b in mapping.items():
            for label in labels:
                if x in v1.succ(a, label) and y not in v2.succ(b, label):
                    return False
                if y in v2.succ(b, label) and x not in v1.succ(a, label):
                    return False
        return True

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        x = order[i]
        for y in by_class.get(cls[(0, x)], []):
            if y in used or cls[(1, y)] != cls[(0, x)]:
                continue
            if not consistent(x, y):
                continue
            mapping[x] = y
            used.add(y)
            if extend(i + 1):
                return True
            del mapping[x]
            used.discard(y)
        return False

    return dict(mapping) if extend(0) else None


def iso_check(m1: Machine, m2: Machine) -> IsoWitness | None:
    """Find an isomorphism witness, or None when the machines differ.

    Deterministic machines with a single initial state are compared by
    synchronized forward exploration, which is exact. Other machines get a
    backtracking search over the accessible parts; unreachable states are
    then paired by output, which is all the conditions require of them.
    """
    v1, v2 = _View(m1), _View(m2)
    if v1.alphabet != v2.alphabet or len(v1.states) != len(v2.states):
        return None
    acc1, acc2 = v1.accessible_states(), v2.accessible_states()
    if len(acc1) != len(acc2):
        return None
    rest1 = sorted(v1.states - acc1, key=repr)
    rest2 = sorted(v2.states - acc2, key=repr)
    if Counter(v1.output(x) for x in rest1) != Counter(v2.output(y) for y in rest2):
        return None

    if v1.deterministic() and v2.deterministic():
        core = _paired_exploration(v1, v2)
    else:
        core = _search_bijection(v1, v2, sorted(acc1, key=repr), sorted(acc2, key=repr))
    if core is None:
        return None

    leftovers2 = {0: [], 1: []}
    for y in rest2:
        leftovers2[v2.output(y)].append(y)
    for x in rest1:
        core[x] = leftovers2[v1.output(x)].pop()
    if not is_iso_witness(m1, m2, core):
        return None
    return IsoWitness(core)


def _paired_exploration(v1: _View, v2: _View) -> dict | None:
    (x0,) = v1.initials
    (y0,) = v2.initials
    mapping = {x0: y0}
    inverse = {y0: x0}
    frontier = deque([(x0, y0)])
    labels = sorted(v1.alphabet)
    while frontier:
        x, y = frontier.popleft()
        if v1.output(x) != v2.output(y):
            return None
        for label in labels:
            s1, s2 = v1.succ(x, label), v2.succ(y, label)
            if len(s1) != len(s2):
                return None
            if not s1:
                continue
            (a,), (b,) = tuple(s1), tuple(s2)
            if a in mapping or b in inverse:
                if mapping.get(a) != b or inverse.get(b) != a:
                    return None
                continue
            mapping[a] = b
            inverse[b] = a
            frontier.append((a, b))
    return mapping


@dataclass(frozen=True)
class BisimRelation:
    """The largest bisimulation between two machines, as state pairs."""

    pairs: frozenset[tuple[str, str]]

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def related(self, x: str) -> frozenset[str]:
        return frozenset(b for a, b in self.pairs if a == x)


def largest_bisimulation(m1: Fsm, m2: Fsm) -> frozenset[tuple[str, str]]:
    """All pairs related by some bisimulation between the two machines.

    Computed by partition refinement on the disjoint union, with blocks
    seeded by the (critical, initial) signature. The union of all
    bisimulations is itself one, so the block relation is the largest.
    """
    v1, v2 = _View(m1), _View(m2)
    states = [(0, x) for x in sorted(v1.states)] + [(1, y) for y in sorted(v2.states)]
    cls = _refinement_classes([v1, v2], states)
    by_class: dict[int, list] = {}
    for s in states:
        by_class.setdefault(cls[s], []).append(s)
    pairs = set()
    for members in by_class.values():
        left = [x for tag, x in members if tag == 0]
        right = [y for tag, y in members if tag == 1]
        pairs.update(product(left, right))
    return frozenset(pairs)


def bisim_check(m1: Fsm, m2: Fsm) -> BisimRelation | None:
    """Largest bisimulation, if the machines are interchangeable as members.

    That takes more than related states: the alphabets must be equal, since
    a member blocks a shared label it owns but cannot fire, while a member
    that does not own the label lets everyone else fire it. And each initial
    state must be matched by one of the other machine, so a relation missing
    an initial state on either side does not count.
    """
    if m1.alphabet != m2.alphabet:
        return None
    pairs = largest_bisimulation(m1, m2)
    left_covered = {a for a, _ in pairs}
    right_covered = {b for _, b in pairs}
    if not m1.initial <= left_covered or not m2.initial <= right_covered:
        return None
    return BisimRelation(pairs)


@dataclass(frozen=True)
class EquivalenceClasses:
    """Grouping of network members by pairwise bisimilarity."""

    classes: tuple[tuple[str, ...], ...]
    representatives: tuple[str, ...]

    def rep_of(self, name: str) -> str:
        for cls, rep in zip(self.classes, self.representatives):
            if name in cls:
                return rep
        raise KeyError(name)


def quotient_network(network: Network) -> tuple[Network, EquivalenceClasses]:
    """Drop members bisimilar to an earlier one, keeping lowest-index reps.

    Bisimilarity between machines is transitive, so a union-find over the
    pairwise checks partitions the members consistently.
    """
    members = network.members
    parent = list(range(len(members)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            if find(i) == find(j):
                continue
            if bisim_check(members[i][1], members[j][1]) is not None:
                parent[find(j)] = find(i)

    grouped: dict[int, list[int]] = {}
    for i in range(len(members)):
        grouped.setdefault(find(i), []).append(i)
    roots = sorted(grouped, key=lambda r: min(grouped[r]))
    classes = tuple(tuple(members[i][0] for i in sorted(grouped[r])) for r in roots)
    rep_indices = [min(grouped[r]) for r in roots]
    reps = tuple(members[i][0] for i in rep_indices)
    reduced = Network(tuple(members[i] for i in rep_indices))
    return reduced, EquivalenceClasses(classes, reps)


@dataclass(frozen=True)
class PreservationReport:
    """Side-by-side evidence that reduction preserves the analysis."""

    classes: EquivalenceClasses
    verdict_full: Verdict
    verdict_reduced: Verdict
    verdicts_agree: bool
    observer_serves_full: bool
    observer_serves_reduced: bool
    sampled_full: bool
    sampled_reduced: bool


def preservation_check(
    network: Network,
    runs: int = 100,
    max_len: int = 10,
    seed: int = 0,
    max_states: int | None = None,
) -> PreservationReport:
    """Confirm on one network that the quotient preserves the verdict.

    Builds both composed machines, compares observability verdicts, and
    validates the reduced network's observer against runs of the full one,
    both exactly (all reachable run pairs) and by seeded random sampling.
    """
    reduced, classes = quotient_network(network)
    full_m = compose_network(network, max_states=max_states)
    red_m = compose_network(reduced, max_states=max_states)
    verdict_full = check_observable(build_observer(full_m, max_states), full_m.critical)
    verdict_reduced = check_observable(build_observer(red_m, max_states), red_m.critical)

    # Merged members share an alphabet, so both compositions do too and the
    # reduced observer is directly comparable against the full machine.
    red_obs = build_observer(red_m, max_states)
    serves_full = validate_critical_observer(red_obs, full_m)
    serves_reduced = validate_critical_observer(red_obs, red_m)
    rng = random.Random(seed)
    sampled_full = sampled_runs_agree(red_obs, full_m, rng, runs, max_len)
    sampled_reduced = sampled_runs_agree(red_obs, red_m, rng, runs, max_len)
    return PreservationReport(
        classes=classes,
        verdict_full=verdict_full,
        verdict_reduced=verdict_reduced,
        verdicts_agree=verdict_full.observable == verdict_reduced.observable,
        observer_serves_full=serves_full,
        observer_serves_reduced=serves_reduced,
        sampled_full=sampled_full,
        sampled_reduced=sampled_reduced,
    )
