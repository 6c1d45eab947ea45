"""Reading and writing networks, observer documents, and DOT graphs.

The network format is line oriented and diffable: `fsm <name>` opens a
member section, then `states`, `initial`, `alphabet`, `critical` list
tokens and each `trans <src> <label> <dst>` line adds one transition.
Repeating a directive accumulates. `#` starts a comment. Observer documents
mirror the layout with `observer` sections, estimate tokens like "{p,q}",
and a `flag` directive listing the states that raise the output.

Serialization sorts everything, so equal objects always produce identical
bytes. In word-level text the reserved token "eps" stands for the empty
word; it is not a label.
"""

from __future__ import annotations

from collections.abc import Sequence

from .compose import Network
from .errors import FormatError, MalformedFsmError
from .fsm import EPSILON_TOKEN, Fsm, Word
from .observer import ObserverFsm, state_sort_key, state_text

_FORBIDDEN = set('#"{}') | set(" \t\r\n")


def _check_token(token: str, what: str, line: int | None = None) -> str:
    if not token:
        raise FormatError(f"empty {what}", line)
    bad = sorted(set(token) & _FORBIDDEN)
    if bad:
        raise FormatError(f"{what} {token!r} contains forbidden {bad}", line)
    return token


def parse_word(text: str) -> Word:
    """Parse a space-separated word; "eps" (alone) is the empty word."""
    tokens = text.split()
    if tokens == [EPSILON_TOKEN]:
        return ()
    if EPSILON_TOKEN in tokens:
        raise FormatError(f"{EPSILON_TOKEN!r} denotes the empty word, not a label")
    return tuple(tokens)


def format_word(word: Word) -> str:
    return " ".join(word) if word else EPSILON_TOKEN


def _logical_lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield number, line.split()


class _FsmSection:
    def __init__(self, name: str, line: int):
        self.name = name
        self.line = line
        self.states: list[str] = []
        self.initial: list[str] = []
        self.alphabet: list[str] = []
        self.critical: list[str] = []
        self.trans: list[tuple[str, str, str]] = []
        self.seen_trans: set[tuple[str, str, str]] = set()


def parse_network(text: str) -> Network:
    """Parse a network document into named machines."""
    sections: list[_FsmSection] = []
    names: set[str] = set()
    current: _FsmSection | None = None
    for number, tokens in _logical_lines(text):
        directive, args = tokens[0], tokens[1:]
        if directive == "fsm":
            if len(args) != 1:
                raise FormatError("fsm takes exactly one name", number)
            name = _check_token(args[0], "member name", number)
            if name in names:
                raise FormatError(f"duplicate member name {name!r}", number)
            names.add(name)
            current = _FsmSection(name, number)
            sections.append(current)
            continue
        if current is None:
            raise FormatError(f"{directive!r} before any fsm section", number)
        if directive in ("states", "initial", "alphabet", "critical"):
            kind = "label" if directive == "alphabet" else "state"
            items = [_check_token(a, kind, number) for a in args]
            getattr(current, directive).extend(items)
        elif directive == "trans":
            if len(args) != 3:
                raise FormatError("trans takes source, label, target", number)
            src = _check_token(args[0], "state", number)
            label = _check_token(args[1], "label", number)
            dst = _check_token(args[2], "state", number)
            triple = (src, label, dst)
            if triple in current.seen_trans:
                raise FormatError(f"duplicate transition {' '.join(triple)}", number)
            current.seen_trans.add(triple)
            current.trans.append(triple)
        else:
            raise FormatError(f"unknown directive {directive!r}", number)
    if not sections:
        raise FormatError("document contains no fsm sections")

    members = []
    for section in sections:
        try:
            m = Fsm(
                section.states,
                section.initial,
                section.alphabet,
                section.trans,
                section.critical,
            )
        except MalformedFsmError as e:
            raise FormatError(f"fsm {section.name!r}: {e}", section.line) from e
        members.append((section.name, m))
    return Network(tuple(members))


def serialize_network(network: Network) -> str:
    """Canonical text for a network; equal networks give equal bytes."""
    chunks = []
    for name, m in network.members:
        _check_token(name, "member name")
        for state in m.states:
            _check_token(state, "state")
        for label in m.alphabet:
            _check_token(label, "label")
        lines = [f"fsm {name}"]
        lines.append("  states " + " ".join(sorted(m.states)))
        lines.append("  initial " + " ".join(sorted(m.initial)))
        if m.alphabet:
            lines.append("  alphabet " + " ".join(sorted(m.alphabet)))
        if m.critical:
            lines.append("  critical " + " ".join(sorted(m.critical)))
        for src, label, dst in m.transitions():
            lines.append(f"  trans {src} {label} {dst}")
        chunks.append("\n".join(lines))
    return "\n\n".join(chunks) + "\n"


def _split_estimate(token: str, line: int | None) -> frozenset[str]:
    if len(token) < 2 or not (token.startswith("{") and token.endswith("}")):
        raise FormatError(f"estimate {token!r} must look like {{p,q}}", line)
    inner = token[1:-1]
    parts: list[str] = []
    depth = 0
    start = 0
    for i, ch in enumerate(inner):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise FormatError(f"unbalanced parentheses in {token!r}", line)
        elif ch == "," and depth == 0:
            parts.append(inner[start:i])
            start = i + 1
    if depth != 0:
        raise FormatError(f"unbalanced parentheses in {token!r}", line)
    parts.append(inner[start:])
    if not all(parts):
        raise FormatError(f"estimate {token!r} has an empty component", line)
    for part in parts:
        _check_token(part, "state", line)
    return frozenset(parts)


class _ObserverSection:
    def __init__(self, name: str, line: int):
        self.name = name
        self.line = line
        self.states: list[frozenset[str]] = []
        self.initial: list[frozenset[str]] = []
        self.alphabet: list[str] = []
        self.flagged: list[frozenset[str]] = []
        self.trans: dict[tuple[frozenset[str], str], frozenset[str]] = {}


def parse_observers(text: str) -> tuple[tuple[str, ObserverFsm], ...]:
    """Parse one or more observer sections into (name, observer) pairs."""
    sections: list[_ObserverSection] = []
    names: set[str] = set()
    current: _ObserverSection | None = None
    for number, tokens in _logical_lines(text):
        directive, args = tokens[0], tokens[1:]
        if directive == "observer":
            if len(args) != 1:
                raise FormatError("observer takes exactly one name", number)
            name = _check_token(args[0], "observer name", number)
            if name in names:
                raise FormatError(f"duplicate observer name {name!r}", number)
            names.add(name)
            current = _ObserverSection(name, number)
            sections.append(current)
            continue
        if current is None:
            raise FormatError(f"{directive!r} before any observer section", number)
        if directive in ("states", "initial", "flag"):
            estimates = [_split_estimate(a, number) for a in args]
            target = {"states": current.states, "initial": current.initial, "flag": current.flagged}
            target[directive].extend(estimates)
        elif directive == "alphabet":
            current.alphabet.extend(_check_token(a, "label", number) for a in args)
        elif directive == "trans":
            if len(args) != 3:
                raise FormatError("trans takes source, label, target", number)
            src = _split_estimate(args[0], number)
            label = _check_token(args[1], "label", number)
            dst = _split_estimate(args[2], number)
            if (src, label) in current.trans:
                raise FormatError(
                    f"second transition from {args[0]} on {label!r}: "
                    "observers are deterministic",
                    number,
                )
            current.trans[(src, label)] = dst
        else:
            raise FormatError(f"unknown directive {directive!r}", number)
    if not sections:
        raise FormatError("document contains no observer sections")

    out = []
    for section in sections:
        if len(section.initial) != 1:
            raise FormatError(
                f"observer {section.name!r} needs exactly one initial estimate",
                section.line,
            )
        declared = set(section.states)
        for z in section.flagged:
            if z not in declared:
                raise FormatError(
                    f"observer {section.name!r} flags undeclared state {state_text(z)}",
                    section.line,
                )
        outputs = {z: (1 if z in set(section.flagged) else 0) for z in section.states}
        try:
            obs = ObserverFsm(
                list(dict.fromkeys(section.states)),
                section.initial[0],
                section.alphabet,
                section.trans,
                outputs,
            )
        except MalformedFsmError as e:
            raise FormatError(f"observer {section.name!r}: {e}", section.line) from e
        out.append((section.name, obs))
    return tuple(out)


def serialize_observer(name: str, obs: ObserverFsm) -> str:
    """Canonical text for one local observer with estimate states."""
    _check_token(name, "observer name")
    for z in obs.states:
        if not isinstance(z, frozenset):
            raise FormatError(
                "only estimate-state observers serialize; composed banks do not"
            )
    ordered = sorted(obs.states, key=state_sort_key)
    lines = [f"observer {name}"]
    lines.append("  states " + " ".join(state_text(z) for z in ordered))
    lines.append("  initial " + state_text(obs.initial))
    if obs.alphabet:
        lines.append("  alphabet " + " ".join(sorted(obs.alphabet)))
    flagged = [z for z in ordered if obs.output(z) == 1]
    if flagged:
        lines.append("  flag " + " ".join(state_text(z) for z in flagged))
    for src, label, dst in obs.transitions():
        lines.append(f"  trans {state_text(src)} {label} {state_text(dst)}")
    return "\n".join(lines) + "\n"


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(machine: Fsm | ObserverFsm, name: str = "critnet") -> str:
    """Graphviz text; critical or flagged states get a double circle.

    Output is a pure function of the machine, byte for byte.
    """
    lines = [f"digraph {_quote(name)} {{", "  rankdir=LR;", "  node [shape=circle];"]
    if isinstance(machine, Fsm):
        ordered = sorted(machine.states)
        initials = sorted(machine.initial)
        texts = {x: x for x in ordered}
        doubled = machine.critical
        edges = list(machine.transitions())
    else:
        ordered = sorted(machine.states, key=state_sort_key)
        initials = [machine.initial]
        texts = {z: state_text(z) for z in ordered}
        doubled = {z for z in ordered if machine.output(z) == 1}
        edges = machine.transitions()
    for i in range(len(initials)):
        lines.append(f'  "__start{i}" [shape=point, label=""];')
    for x in ordered:
        shape = " [shape=doublecircle]" if x in doubled else ""
        lines.append(f"  {_quote(texts[x])}{shape};")
    for i, x in enumerate(initials):
        lines.append(f'  "__start{i}" -> {_quote(texts[x])};')
    for src, label, dst in edges:
        lines.append(
            f"  {_quote(texts[src])} -> {_quote(texts[dst])} [label={_quote(label)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
