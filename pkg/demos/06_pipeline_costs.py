"""What each synthesis route stores, on a network with redundant members.

The ledger charges one unit per stored state and, per stored transition,
the sizes of both estimate tuples plus one. The baseline route pays for
every local observer and the composed bank; the reduction route quotients
bisimilar members first and explores on the fly, so the copies cost
nothing.
"""

from critnet import Fsm, Network, run_algorithm1, run_algorithm3, run_onthefly_report


def renamed(m: Fsm, prefix: str) -> Fsm:
    return Fsm(
        [prefix + s for s in m.states],
        [prefix + s for s in m.initial],
        m.alphabet,
        [(prefix + x, label, prefix + y) for x, label, y in m.transitions()],
        [prefix + s for s in m.critical],
    )


line = Fsm(["p", "q"], ["p"], ["a", "b"], [("p", "a", "q"), ("q", "b", "p")], ["q"])
pacer = Fsm(["u", "v"], ["u"], ["a", "b"], [("u", "a", "v"), ("v", "b", "u")], [])
net = Network(
    (
        ("A", line),
        ("A2", renamed(line, "u_")),
        ("A3", renamed(line, "v_")),
        ("D", pacer),
    )
)
print(f"network: {', '.join(net.names)} (A2, A3 are renamed copies of A)\n")

baseline = run_algorithm1(net)
onthefly = run_onthefly_report(net)
reduced = run_algorithm3(net, run_baseline=True)

print(f"{'route':<28}{'space':>8}{'time':>8}")
print(f"{'build all, then compose':<28}{baseline.ledger.space:>8}{baseline.ledger.time:>8}")
print(f"{'on the fly, no reduction':<28}{onthefly.ledger.space:>8}{onthefly.ledger.time:>8}")
print(f"{'reduce, then on the fly':<28}{reduced.ledger.space:>8}{reduced.ledger.time:>8}")

assert reduced.ledger_baseline == baseline.ledger
assert reduced.classes is not None
kept = ", ".join(reduced.classes.representatives)
print(f"\nverdict everywhere: {reduced.verdict}")
print(f"the reduction route only ever touched: {kept}")
