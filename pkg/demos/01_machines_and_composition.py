"""Two machines, one shared label, and what composition does with it.

Labels shared between members fire only when every owner can move, so a
member with no successor for a shared label blocks the whole network on it.
Private labels interleave freely.
"""

from critnet import Fsm, Network, compose_network, in_language

line = Fsm(
    states=["p", "q"],
    initial=["p"],
    alphabet=["a", "b"],
    transitions=[("p", "a", "q"), ("q", "b", "p")],
    critical=["q"],
)
cell = Fsm(
    states=["r", "s", "t"],
    initial=["r"],
    alphabet=["a"],
    transitions=[("r", "a", "s"), ("r", "a", "t")],
    critical=["t"],
)

net = Network((("A", line), ("B", cell)))
print("members:")
for name, m in net.members:
    print(f"  {name}: {m}")

composed = compose_network(net)
print("\ncomposed machine:")
print(f"  states:   {sorted(composed.states)}")
print(f"  critical: {sorted(composed.critical)}")
print("  transitions:")
for src, label, dst in composed.transitions():
    print(f"    {src} --{label}--> {dst}")

# "a" is shared: it needs both A and B to move. After one "a" the cell is
# stuck in s or t, so a second "a" is blocked even though A could fire it.
# "b" belongs to A alone and interleaves.
for word in [("a",), ("a", "b"), ("a", "b", "a")]:
    verdict = "in" if in_language(composed, word) else "NOT in"
    print(f"\n  {' '.join(word)!r} is {verdict} the composed language")
