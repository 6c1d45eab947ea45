"""Observer construction, observability verdicts, decentralized banks."""

from __future__ import annotations

import random

import pytest

from critnet import (
    BudgetExceededError,
    Fsm,
    InvalidInputError,
    MalformedFsmError,
    Network,
    ObserverFsm,
    TraceError,
    build_decentralized,
    build_observer,
    check_observable,
    compose_decentralized,
    compose_network,
    iso_check,
    observer_run,
    sampled_runs_agree,
    state_text,
    validate_critical_observer,
)
from conftest import make_converse_pair
from genutil import observable_fsm, random_fsm, random_network
from oracles import estimates_by_word, semantic_observable


class TestStateText:
    def test_estimate_text(self):
        assert state_text(frozenset({"q", "p"})) == "{p,q}"
        assert state_text(frozenset({"x"})) == "{x}"

    def test_aggregate_text(self):
        agg = (frozenset({"p"}), frozenset({"s", "t"}))
        assert state_text(agg) == "({p},{s,t})"


class TestBuildObserver:
    def test_fixture_a(self, fsm_a):
        obs = build_observer(fsm_a)
        zp, zq = frozenset({"p"}), frozenset({"q"})
        assert obs.states == (zp, zq)
        assert obs.initial == zp
        assert obs.outputs == {zp: 0, zq: 1}
        assert obs.succ_state(zp, "a") == zq
        assert obs.succ_state(zq, "b") == zp
        assert obs.succ_state(zp, "b") is None

    def test_fixture_b(self, fsm_b):
        obs = build_observer(fsm_b)
        zr, zst = frozenset({"r"}), frozenset({"s", "t"})
        assert obs.states == (zr, zst)
        assert obs.outputs == {zr: 0, zst: 1}
        assert obs.succ_state(zst, "a") is None

    def test_observer_is_deterministic_by_construction(self):
        rng = random.Random(301)
        for _ in range(30):
            m = random_fsm(rng, max_states=5)
            obs = build_observer(m)
            for z in obs.states:
                assert isinstance(z, frozenset) and z
                for label, dst in obs.moves(z).items():
                    assert obs.succ_state(z, label) == dst

    def test_estimates_match_word_enumeration(self):
        rng = random.Random(302)
        for _ in range(25):
            m = random_fsm(rng, max_states=4)
            obs = build_observer(m)
            for word, est in estimates_by_word(m, max_len=4).items():
                run = observer_run(obs, word)
                z, flag = run[-1]
                assert z == est
                assert flag == (1 if est & m.critical else 0)

    def test_budget_enforced(self, fsm_a):
        with pytest.raises(BudgetExceededError):
            build_observer(fsm_a, max_states=1)

    def test_critical_initial_flagged_immediately(self):
        m = Fsm(["x"], ["x"], ["a"], [("x", "a", "x")], critical=["x"])
        obs = build_observer(m)
        assert obs.output(obs.initial) == 1


class TestObserverFsmValidation:
    def _z(self, *names):
        return frozenset(names)

    def test_duplicate_states_rejected(self):
        z = self._z("x")
        with pytest.raises(MalformedFsmError, match="duplicate"):
            ObserverFsm([z, z], z, ["a"], {}, {z: 0})

    def test_missing_initial_rejected(self):
        with pytest.raises(MalformedFsmError, match="initial"):
            ObserverFsm([self._z("x")], self._z("y"), ["a"], {}, {self._z("x"): 0})

    def test_empty_estimate_rejected(self):
        z = frozenset()
        with pytest.raises(MalformedFsmError, match="empty estimate"):
            ObserverFsm([z], z, ["a"], {}, {z: 0})

    def test_non_binary_output_rejected(self):
        z = self._z("x")
        with pytest.raises(MalformedFsmError, match="0/1"):
            ObserverFsm([z], z, ["a"], {}, {z: 2})

    def test_unreachable_state_rejected(self):
        z1, z2 = self._z("x"), self._z("y")
        with pytest.raises(MalformedFsmError, match="unreachable"):
            ObserverFsm([z1, z2], z1, ["a"], {}, {z1: 0, z2: 0})

    def test_foreign_transition_label_rejected(self):
        z = self._z("x")
        with pytest.raises(MalformedFsmError, match="label"):
            ObserverFsm([z], z, ["a"], {(z, "b"): z}, {z: 0})

    def test_structural_equality_ignores_order(self):
        z1, z2 = self._z("x"), self._z("y")
        trans = {(z1, "a"): z2, (z2, "a"): z1}
        o1 = ObserverFsm([z1, z2], z1, ["a"], trans, {z1: 0, z2: 1})
        o2 = ObserverFsm([z1, z2], z1, ["a"], dict(reversed(list(trans.items()))), {z2: 1, z1: 0})
        assert o1 == o2 and hash(o1) == hash(o2)


class TestCheckObservable:
    def test_fixture_a_observable(self, fsm_a):
        v = check_observable(build_observer(fsm_a), fsm_a.critical)
        assert v.observable
        assert v.witness is None
        assert str(v) == "observable"

    def test_fixture_b_not_observable(self, fsm_b):
        v = check_observable(build_observer(fsm_b), fsm_b.critical)
        assert not v.observable
        assert v.witness == frozenset({"s", "t"})
        assert str(v) == "not observable, witness {s,t}"

    def test_witness_is_first_in_discovery_order(self):
        # Both "a" and "b" lead to straddling estimates; discovery explores
        # labels in sorted order so the witness comes from "a".
        m = Fsm(
            ["x", "c1", "n1", "c2", "n2"],
            ["x"],
            ["a", "b"],
            [
                ("x", "a", "c1"),
                ("x", "a", "n1"),
                ("x", "b", "c2"),
                ("x", "b", "n2"),
            ],
            critical=["c1", "c2"],
        )
        v = check_observable(build_observer(m), m.critical)
        assert not v.observable
        assert v.witness == frozenset({"c1", "n1"})

    def test_matches_semantic_walk(self):
        rng = random.Random(303)
        for _ in range(60):
            m = random_fsm(rng, max_states=5)
            got = check_observable(build_observer(m), m.critical)
            want_obs, _ = semantic_observable(m)
            assert got.observable == want_obs

    def test_rejects_aggregate_states(self, net_ab):
        bank = build_decentralized(net_ab)
        composed = compose_decentralized(bank)
        with pytest.raises(InvalidInputError):
            check_observable(composed, frozenset())


class TestObserverRun:
    def test_run_on_fixture_a(self, fsm_a):
        obs = build_observer(fsm_a)
        run = observer_run(obs, ("a", "b", "a"))
        assert run == [
            (frozenset({"p"}), 0),
            (frozenset({"q"}), 1),
            (frozenset({"p"}), 0),
            (frozenset({"q"}), 1),
        ]

    def test_run_leaves_language(self, fsm_a):
        obs = build_observer(fsm_a)
        with pytest.raises(TraceError, match="position 0"):
            observer_run(obs, ("b",))

    def test_run_foreign_label(self, fsm_a):
        obs = build_observer(fsm_a)
        with pytest.raises(InvalidInputError):
            observer_run(obs, ("z",))


class TestDecentralized:
    def test_bank_contents(self, net_ab, fsm_a, fsm_b):
        bank = build_decentralized(net_ab)
        assert bank.names == ("A", "B")
        assert bank.observers[0] == build_observer(fsm_a)
        assert bank.observers[1] == build_observer(fsm_b)

    def test_single_local_composes_to_itself(self, fsm_a):
        bank = build_decentralized(Network((("A", fsm_a),)))
        assert compose_decentralized(bank) is bank.locals[0][1]

    def test_composed_bank_on_fixture_network(self, net_ab):
        composed = compose_decentralized(build_decentralized(net_ab))
        z0 = (frozenset({"p"}), frozenset({"r"}))
        z1 = (frozenset({"q"}), frozenset({"s", "t"}))
        z2 = (frozenset({"p"}), frozenset({"s", "t"}))
        assert composed.states == (z0, z1, z2)
        assert composed.outputs == {z0: 0, z1: 1, z2: 1}
        assert composed.succ_state(z0, "a") == z1
        assert composed.succ_state(z1, "b") == z2
        # B cannot follow another "a", so the shared label blocks.
        assert composed.succ_state(z2, "a") is None

    def test_composed_bank_isomorphic_to_monolithic_observer(self, net_ab):
        composed = compose_decentralized(build_decentralized(net_ab))
        mono = build_observer(compose_network(net_ab))
        witness = iso_check(composed, mono)
        assert witness is not None

    def test_converse_pair_behaves_as_designed(self):
        net = make_converse_pair()
        m1 = net.get("P")
        assert not check_observable(build_observer(m1), m1.critical).observable
        c = compose_network(net)
        assert check_observable(build_observer(c), c.critical).observable


class TestValidation:
    def test_exact_validator_on_fixtures(self, fsm_a, fsm_b):
        assert validate_critical_observer(build_observer(fsm_a), fsm_a)
        # B is not observable, so its own observer misclassifies some run.
        assert not validate_critical_observer(build_observer(fsm_b), fsm_b)

    def test_exact_validator_alphabet_gate(self, fsm_a, fsm_b):
        with pytest.raises(InvalidInputError):
            validate_critical_observer(build_observer(fsm_a), fsm_b)

    def test_sampled_validator_agrees_on_fixtures(self, fsm_a, fsm_b):
        rng = random.Random(304)
        assert sampled_runs_agree(build_observer(fsm_a), fsm_a, rng)
        assert not sampled_runs_agree(build_observer(fsm_b), fsm_b, rng, runs=200)

    def test_exact_validator_matches_observability(self):
        # For the machine's own observer, exact validity and observability
        # are the same thing.
        rng = random.Random(305)
        for _ in range(40):
            m = random_fsm(rng, max_states=5)
            obs = build_observer(m)
            assert validate_critical_observer(obs, m) == check_observable(
                obs, m.critical
            ).observable


class TestObservableGenerator:
    def test_generator_delivers_observable_machines(self):
        rng = random.Random(306)
        for _ in range(25):
            m = observable_fsm(rng, max_states=4)
            assert check_observable(build_observer(m), m.critical).observable

    def test_network_generator_bounds(self):
        rng = random.Random(307)
        for _ in range(25):
            net = random_network(rng, max_members=4, max_states=5, max_labels=4)
            assert 1 <= len(net.members) <= 4
            for _, m in net.members:
                assert len(m.states) <= 5
                assert len(m.alphabet) <= 4
