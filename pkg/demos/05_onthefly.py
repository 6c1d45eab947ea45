"""Deciding observability without ever building the composition.

The integrated run explores tuples of local estimates generation by
generation and tests each fresh tuple for a straddle: some coordinate
touching its critical set while no coordinate is contained in its own. A
straddle is a counterexample, and the run stops before storing anything
about it, so hopeless networks can be refuted at almost no cost.
"""

from critnet import Fsm, Network, run_onthefly

line = Fsm(["p", "q"], ["p"], ["a", "b"], [("p", "a", "q"), ("q", "b", "p")], ["q"])
cell = Fsm(["r", "s", "t"], ["r"], ["a"], [("r", "a", "s"), ("r", "a", "t")], ["t"])


def trace_generation(gen: int, frontier: int, seen: int) -> None:
    print(f"  generation {gen}: frontier {frontier}, aggregates seen {seen}")


print("network {A, B} (B mixes a critical and a safe successor):")
outcome = run_onthefly(
    Network((("A", line), ("B", cell))), on_generation=trace_generation
)
print(f"  verdict: {outcome.verdict}")
stored = sum(len(member) for member in outcome.witnessed_transitions)
print(f"  transitions stored before the refutation: {stored}")

print("\nnetwork {A} alone:")
outcome = run_onthefly(Network((("A", line),)), on_generation=trace_generation)
print(f"  verdict: {outcome.verdict}")
assert outcome.locals is not None
for name, local in outcome.locals:
    print(f"  local observer for {name}: {len(local.states)} states, "
          f"{len(local.transitions())} transitions")
