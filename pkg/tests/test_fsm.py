"""Core machine model: construction rules, stepping, language, reachability."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from critnet import (
    Fsm,
    InvalidInputError,
    MalformedFsmError,
    accessible,
    extended_delta,
    in_language,
    project_word,
    reachable_states,
    step,
)
from genutil import random_fsm
from oracles import estimates_by_word, naive_step


class TestConstruction:
    def test_basic_fields(self, fsm_a):
        assert fsm_a.states == frozenset({"p", "q"})
        assert fsm_a.initial == frozenset({"p"})
        assert fsm_a.alphabet == frozenset({"a", "b"})
        assert fsm_a.critical == frozenset({"q"})
        assert fsm_a.succ("p", "a") == frozenset({"q"})
        assert fsm_a.succ("q", "a") == frozenset()

    def test_transitions_canonical_order(self, fsm_b):
        assert list(fsm_b.transitions()) == [("r", "a", "s"), ("r", "a", "t")]

    def test_duplicate_transitions_collapse(self):
        m = Fsm(["x"], ["x"], ["a"], [("x", "a", "x"), ("x", "a", "x")])
        assert list(m.transitions()) == [("x", "a", "x")]

    def test_empty_states_rejected(self):
        with pytest.raises(MalformedFsmError):
            Fsm([], [], ["a"], [])

    def test_empty_initial_rejected(self):
        with pytest.raises(MalformedFsmError):
            Fsm(["x"], [], ["a"], [])

    def test_initial_outside_states_rejected(self):
        with pytest.raises(MalformedFsmError, match="initial"):
            Fsm(["x"], ["y"], ["a"], [])

    def test_critical_outside_states_rejected(self):
        with pytest.raises(MalformedFsmError, match="critical"):
            Fsm(["x"], ["x"], ["a"], [], critical=["y"])

    def test_mixed_initial_criticality_rejected(self):
        with pytest.raises(MalformedFsmError, match="all critical or all non-critical"):
            Fsm(["x", "y"], ["x", "y"], ["a"], [], critical=["x"])

    def test_all_critical_initials_allowed(self):
        m = Fsm(["x", "y"], ["x", "y"], ["a"], [], critical=["x", "y"])
        assert m.initial <= m.critical

    def test_bad_transition_endpoints_rejected(self):
        with pytest.raises(MalformedFsmError, match="source"):
            Fsm(["x"], ["x"], ["a"], [("z", "a", "x")])
        with pytest.raises(MalformedFsmError, match="target"):
            Fsm(["x"], ["x"], ["a"], [("x", "a", "z")])
        with pytest.raises(MalformedFsmError, match="label"):
            Fsm(["x"], ["x"], ["a"], [("x", "b", "x")])

    def test_eps_label_reserved(self):
        with pytest.raises(MalformedFsmError, match="eps"):
            Fsm(["x"], ["x"], ["eps"], [])

    def test_empty_label_rejected(self):
        with pytest.raises(MalformedFsmError):
            Fsm(["x"], ["x"], [""], [])

    def test_empty_state_name_rejected(self):
        with pytest.raises(MalformedFsmError):
            Fsm(["", "x"], ["x"], ["a"], [])

    def test_labels_without_transitions_allowed(self):
        m = Fsm(["x"], ["x"], ["a", "b"], [("x", "a", "x")])
        assert m.alphabet == frozenset({"a", "b"})
        assert m.succ("x", "b") == frozenset()

    def test_equality_ignores_input_order(self):
        m1 = Fsm(["x", "y"], ["x"], ["a"], [("x", "a", "y"), ("x", "a", "x")])
        m2 = Fsm(["y", "x"], ["x"], ["a"], [("x", "a", "x"), ("x", "a", "y")])
        assert m1 == m2
        assert hash(m1) == hash(m2)

    def test_inequality_on_critical(self):
        m1 = Fsm(["x", "y"], ["x"], ["a"], [("x", "a", "y")])
        m2 = Fsm(["x", "y"], ["x"], ["a"], [("x", "a", "y")], critical=["y"])
        assert m1 != m2


class TestDeterministic:
    def test_fixture_a_deterministic(self, fsm_a):
        assert fsm_a.deterministic

    def test_fixture_b_not_deterministic(self, fsm_b):
        assert not fsm_b.deterministic

    def test_multiple_initials_not_deterministic(self):
        m = Fsm(["x", "y"], ["x", "y"], ["a"], [])
        assert not m.deterministic


class TestStepping:
    def test_step_on_fixture_a(self, fsm_a):
        assert step(fsm_a, {"p"}, "a") == frozenset({"q"})
        assert step(fsm_a, {"p"}, "b") == frozenset()
        assert step(fsm_a, {"p", "q"}, "a") == frozenset({"q"})

    def test_extended_delta_empty_word(self, fsm_a):
        assert extended_delta(fsm_a, {"p"}, ()) == frozenset({"p"})

    def test_extended_delta_fixture_a(self, fsm_a):
        assert extended_delta(fsm_a, fsm_a.initial, ("a",)) == frozenset({"q"})
        assert extended_delta(fsm_a, fsm_a.initial, ("a", "b")) == frozenset({"p"})
        assert extended_delta(fsm_a, fsm_a.initial, ("a", "a")) == frozenset()

    def test_extended_delta_fixture_b(self, fsm_b):
        assert extended_delta(fsm_b, fsm_b.initial, ("a",)) == frozenset({"s", "t"})
        assert extended_delta(fsm_b, fsm_b.initial, ("a", "a")) == frozenset()

    def test_extended_delta_rejects_unknown_state(self, fsm_a):
        with pytest.raises(InvalidInputError):
            extended_delta(fsm_a, {"nope"}, ())

    def test_extended_delta_rejects_unknown_label(self, fsm_a):
        with pytest.raises(InvalidInputError):
            extended_delta(fsm_a, {"p"}, ("z",))

    def test_in_language(self, fsm_a, fsm_b):
        assert in_language(fsm_a, ())
        assert in_language(fsm_a, ("a", "b", "a"))
        assert not in_language(fsm_a, ("b",))
        assert in_language(fsm_b, ("a",))
        assert not in_language(fsm_b, ("a", "a"))

    def test_in_language_rejects_foreign_label(self, fsm_a):
        with pytest.raises(InvalidInputError):
            in_language(fsm_a, ("z",))


class TestProjection:
    def test_project_word_examples(self):
        assert project_word(("a", "b", "a"), {"a"}) == ("a", "a")
        assert project_word(("a", "b", "a"), {"b"}) == ("b",)
        assert project_word(("a", "b"), {"c"}) == ()
        assert project_word((), {"a"}) == ()

    @given(
        st.lists(st.sampled_from("abcd"), max_size=12),
        st.sets(st.sampled_from("abcd")),
    )
    def test_project_word_idempotent_and_ordered(self, word, keep):
        out = project_word(tuple(word), keep)
        assert project_word(out, keep) == out
        assert all(label in keep for label in out)
        # Order preservation: out is a subsequence of word.
        it = iter(word)
        assert all(any(label == w for w in it) for label in out)


class TestReachability:
    def test_reachable_states(self, fsm_a):
        assert reachable_states(fsm_a) == frozenset({"p", "q"})

    def test_unreachable_pruned(self):
        m = Fsm(
            ["x", "y", "z"],
            ["x"],
            ["a"],
            [("x", "a", "y"), ("z", "a", "x")],
            critical=["z"],
        )
        assert reachable_states(m) == frozenset({"x", "y"})
        acc = accessible(m)
        assert acc.states == frozenset({"x", "y"})
        assert acc.critical == frozenset()
        assert acc.alphabet == m.alphabet
        assert list(acc.transitions()) == [("x", "a", "y")]

    def test_accessible_identity_when_all_reachable(self, fsm_a):
        assert accessible(fsm_a) is fsm_a


class TestRandomizedAgainstOracles:
    def test_extended_delta_matches_word_enumeration(self):
        rng = random.Random(101)
        for _ in range(40):
            m = random_fsm(rng, max_states=4)
            table = estimates_by_word(m, max_len=4)
            for word, est in table.items():
                assert extended_delta(m, m.initial, word) == est
                assert in_language(m, word)

    def test_step_matches_naive_union(self):
        rng = random.Random(102)
        for _ in range(40):
            m = random_fsm(rng, max_states=5)
            states = frozenset(rng.sample(sorted(m.states), rng.randint(1, len(m.states))))
            for label in m.alphabet:
                assert step(m, states, label) == naive_step(m, states, label)

    def test_reachable_closed_under_transitions(self):
        rng = random.Random(103)
        for _ in range(40):
            m = random_fsm(rng, max_states=6)
            reach = reachable_states(m)
            assert m.initial <= reach
            for x in reach:
                for dsts in m.moves(x).values():
                    assert dsts <= reach


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_random_fsm_generator_is_well_formed(seed):
    rng = random.Random(seed)
    m = random_fsm(rng)
    assert m.initial <= m.states
    assert m.critical <= m.states
    assert m.initial <= m.critical or not (m.initial & m.critical)
