import random

import pytest

from scenplay import Event, Machine, Program, ScenarioThread, make_sync, replay, run
from scenplay.sync import INERT, MultiSync
from scenplay.events import Trace
from scenplay.verify import (ALL_ELIGIBLE, VerificationTask, canonical_bytes,
                             explore, forced_prefix_thread, snapshot)

from conftest import HOT, COLD, hot_cold_program, requester_thread

A, B, BAD = Event("a"), Event("b"), Event("bad")


class TestCanonicalBytes:
    def test_deterministic_for_sets(self):
        x = frozenset([(1, 2), (3, 4), ("a", "b")])
        assert canonical_bytes(x) == canonical_bytes(frozenset([("a", "b"), (3, 4), (1, 2)]))

    def test_distinguishes_types(self):
        assert canonical_bytes(1) != canonical_bytes("1")
        assert canonical_bytes(True) != canonical_bytes(1)
        assert canonical_bytes((1, 2)) != canonical_bytes((12,))

    def test_rejects_unserializable(self):
        with pytest.raises(TypeError):
            canonical_bytes(object())


class TestSnapshot:
    def test_fresh_copies_equal(self):
        assert snapshot(Machine(hot_cold_program())) == snapshot(Machine(hot_cold_program()))

    def test_changes_after_step(self):
        m = Machine(hot_cold_program())
        before = snapshot(m)
        m.step()
        assert snapshot(m) != before

    def test_digest_agrees_with_structural_equality(self):
        rng = random.Random(5)
        machines = []
        for _ in range(60):
            m = Machine(hot_cold_program())
            for _ in range(rng.randint(0, 6)):
                m.step()
            machines.append(m)
        for m1 in machines:
            for m2 in machines:
                assert (snapshot(m1) == snapshot(m2)) == (m1.config_key() == m2.config_key())


def two_hots_unsafe(trace: Trace, last: Event) -> bool:
    return len(trace) >= 2 and trace[-1].name == "Hot" and trace[-2].name == "Hot"


class TestExplore:
    def test_hot_cold_never_two_hots(self):
        task = VerificationTask(program_factory=hot_cold_program,
                                unsafe=two_hots_unsafe,
                                branching=ALL_ELIGIBLE, max_depth=20)
        result = explore(task)
        assert result.verdict == "Safe"
        assert result.states_visited >= 2

    def test_finds_counterexample(self):
        def loose_program():
            # hot/cold without the stabilizer: two Hots are reachable
            return Program([requester_thread("add_hot", HOT),
                            requester_thread("add_cold", COLD)])

        task = VerificationTask(program_factory=loose_program,
                                unsafe=two_hots_unsafe,
                                branching=ALL_ELIGIBLE, max_depth=5)
        result = explore(task)
        assert result.verdict == "Counterexample"
        ce = result.counterexample
        assert [e.name for e in ce][-2:] == ["Hot", "Hot"]
        assert replay(loose_program(), ce).ok
        assert two_hots_unsafe(ce, ce[-1])

    def test_bound_exceeded_reported(self):
        counter = ScenarioThread(
            "counter", 0,
            lambda s: MultiSync([make_sync(request=Event("tick", n=s))]),
            lambda s, e: s + 1)
        task = VerificationTask(program_factory=lambda: Program([counter]),
                                unsafe=lambda t, e: False,
                                branching=ALL_ELIGIBLE, max_depth=4)
        result = explore(task)
        assert result.verdict == "BoundExceeded"
        assert result.max_depth_reached == 4

    def test_max_states_bound(self):
        counter = ScenarioThread(
            "counter", 0,
            lambda s: MultiSync([make_sync(request=Event("tick", n=s))]),
            lambda s, e: s + 1)
        task = VerificationTask(program_factory=lambda: Program([counter]),
                                unsafe=lambda t, e: False,
                                branching=ALL_ELIGIBLE, max_depth=100,
                                max_states=10)
        result = explore(task)
        assert result.verdict == "BoundExceeded"
        assert result.states_visited <= 10

    def test_nondeterministic_factory_rejected(self):
        toggle = []

        def factory():
            toggle.append(None)
            return Program([requester_thread("t", Event("x", i=len(toggle)))])

        # the requested event differs between constructions, so the initial
        # declarations differ; starts still compare equal, catching this
        # requires stepping, so instead vary the start state itself
        def factory2():
            toggle.append(None)
            t = ScenarioThread("t", len(toggle), lambda s: INERT, lambda s, e: s)
            return Program([t])

        with pytest.raises(ValueError):
            explore(VerificationTask(program_factory=factory2,
                                     unsafe=lambda t, e: False))

    def test_digest_mode_matches_exact(self):
        for mode in ("exact", "digest"):
            task = VerificationTask(program_factory=hot_cold_program,
                                    unsafe=two_hots_unsafe,
                                    branching=ALL_ELIGIBLE, max_depth=12,
                                    visited_mode=mode)
            assert explore(task).verdict == "Safe"


class TestForcedPrefix:
    def test_every_trace_starts_with_prefix(self):
        prefix = [HOT, COLD, HOT]
        thread = forced_prefix_thread(prefix, block=[HOT, COLD], priority=100)
        prog = Program([requester_thread("add_hot", HOT),
                        requester_thread("add_cold", COLD), thread])
        result = run(prog, 6)
        assert list(result.trace[:3]) == prefix

    def test_inert_after_prefix(self):
        thread = forced_prefix_thread([HOT], block=[HOT, COLD], priority=100)
        prog = Program([requester_thread("add_hot", HOT),
                        requester_thread("add_cold", COLD), thread])
        result = run(prog, 5)
        # after the forced Hot, both events flow freely again (min-event order)
        assert result.trace[0] == HOT
        assert len(result.trace) == 5

    def test_explore_branches_resume_after_prefix(self):
        thread = forced_prefix_thread([COLD], block=[HOT, COLD], priority=100)

        def factory():
            return Program([requester_thread("add_hot", HOT),
                            requester_thread("add_cold", COLD),
                            forced_prefix_thread([COLD], block=[HOT, COLD],
                                                 priority=100)])

        seen = []

        def spy(trace, last):
            seen.append(tuple(e.name for e in trace))
            return False

        explore(VerificationTask(program_factory=factory, unsafe=spy,
                                 branching=ALL_ELIGIBLE, max_depth=2))
        assert all(names[0] == "Cold" for names in seen)
        assert ("Cold", "Hot") in seen and ("Cold", "Cold") in seen

    def test_empty_prefix_rejected(self):
        with pytest.raises(ValueError):
            forced_prefix_thread([], block=[HOT], priority=1)
