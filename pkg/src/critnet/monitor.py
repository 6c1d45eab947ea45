"""Replaying event streams through a bank of local observers.

A session holds one local observer per member. Each incoming event moves
every local whose alphabet contains it and leaves the others untouched, so
each local sees exactly the projection of the stream onto its alphabet. The
session flag is the OR of the local flags and is recomputed once per event,
after all affected locals have stepped.

Sessions are the one mutable thing in this package and expect a single
writer. An event no run of the plant allows poisons the session: the step is
not applied and every later feed fails fast.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .errors import DesyncError, InvalidInputError
from .fsm import Word
from .observer import DecentralizedObserver, ObserverFsm


@dataclass(frozen=True)
class StepRecord:
    """What one event did: who moved, the local flags, the combined flag."""

    index: int
    label: str
    moved: tuple[bool, ...]
    outputs: tuple[int, ...]
    flag: int

    def line(self) -> str:
        bits = "".join(str(y) for y in self.outputs)
        return f"{self.index} {self.label} {bits} {self.flag}"


class MonitorSession:
    """Stateful replay of an event stream through local observers."""

    def __init__(self, locals_: Sequence[tuple[str, ObserverFsm]]):
        if not locals_:
            raise InvalidInputError("a session needs at least one local observer")
        names = [name for name, _ in locals_]
        if len(set(names)) != len(names):
            raise InvalidInputError(f"duplicate local names in {names}")
        self._locals = tuple(locals_)
        self._states = [obs.initial for _, obs in self._locals]
        self.poisoned = False
        self.step_log: list[StepRecord] = []

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self._locals)

    @property
    def states(self) -> tuple:
        return tuple(self._states)

    @property
    def outputs(self) -> tuple[int, ...]:
        return tuple(
            obs.output(z) for (_, obs), z in zip(self._locals, self._states)
        )

    @property
    def flag(self) -> int:
        return 1 if any(self.outputs) else 0

    def feed(self, label: str) -> StepRecord:
        """Apply one event atomically and log the step.

        The label must belong to at least one local's alphabet. If some
        local that owns the label has no move, no local steps at all, the
        session is poisoned, and the desync is raised naming that local.
        """
        if self.poisoned:
            raise DesyncError("session poisoned by an earlier desync")
        owners = [
            i for i, (_, obs) in enumerate(self._locals) if label in obs.alphabet
        ]
        if not owners:
            raise InvalidInputError(f"label {label!r} is in no local's alphabet")
        targets = {}
        for i in owners:
            nxt = self._locals[i][1].succ_state(self._states[i], label)
            if nxt is None:
                self.poisoned = True
                raise DesyncError(
                    f"local {self._locals[i][0]!r} has no move on {label!r}: "
                    f"the stream is not a trace of the composed plant"
                )
            targets[i] = nxt
        for i, nxt in targets.items():
            self._states[i] = nxt
        record = StepRecord(
            index=len(self.step_log) + 1,
            label=label,
            moved=tuple(i in targets for i in range(len(self._locals))),
            outputs=self.outputs,
            flag=self.flag,
        )
        self.step_log.append(record)
        return record

    def replay(self, word: Word | Iterable[str]) -> list[StepRecord]:
        """Feed a whole word; the first desync propagates."""
        return [self.feed(label) for label in word]


def start_session(
    source: DecentralizedObserver | Sequence[tuple[str, ObserverFsm]],
) -> MonitorSession:
    """Open a session over a bank or over explicit (name, observer) pairs."""
    if isinstance(source, DecentralizedObserver):
        return MonitorSession(source.locals)
    return MonitorSession(tuple(source))
