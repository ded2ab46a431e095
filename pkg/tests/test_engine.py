import random

import pytest
from hypothesis import given, settings, strategies as st

from scenplay import (Event, EventOrder, HARD, Machine, Program, ScenarioThread,
                      SeededRandom, ThreadStepError, effective_priorities,
                      eligible_events, make_sync, replay, run, select_event)
from scenplay.sync import MultiSync
from scenplay.events import Trace

from conftest import HOT, COLD, hot_cold_program, requester_thread
from oracles import classical_select, naive_select, random_declarations

E = Event("e")
A = Event("a")
B = Event("b")


def decls(*entries):
    return [(f"t{i}", MultiSync([s]) if not isinstance(s, MultiSync) else s)
            for i, s in enumerate(entries)]


class TestEffectivePriorities:
    def test_max_of_request_and_block(self):
        pm = effective_priorities(decls(
            make_sync(request={E}, request_priority=5),
            make_sync(soft_block={E}, block_priority=3)))
        assert pm[E] == (5, 3)

    def test_request_max(self):
        pm = effective_priorities(decls(
            make_sync(request={E}, request_priority=5),
            make_sync(request={E}, request_priority=7)))
        assert pm[E] == (7, None)

    def test_hard_block_wins(self):
        pm = effective_priorities(decls(
            make_sync(request={E}, request_priority=9),
            make_sync(hard_block={E})))
        assert pm[E] == (9, HARD)

    def test_unrequested_absent_r(self):
        pm = effective_priorities(decls(make_sync(soft_block={E}, block_priority=1)))
        assert pm[E] == (None, 1)


class TestEligibility:
    def test_strictly_higher_request_wins(self):
        assert eligible_events({E: (5, 3)}) == {(E, 5)}

    def test_tie_goes_to_block(self):
        assert eligible_events({E: (3, 3)}) == set()

    def test_hard_block_absolute(self):
        assert eligible_events({E: (9, HARD)}) == set()

    def test_unblocked(self):
        assert eligible_events({E: (1, None)}) == {(E, 1)}


class TestSelectEvent:
    def test_hot_cold_first_step(self):
        outcome = select_event(decls(
            make_sync(request={HOT}),
            make_sync(request={COLD}),
            make_sync(wait_for={HOT}, hard_block={COLD})))
        assert outcome.selected == HOT
        assert "t0" in [n for n, _p in outcome.requesters]

    def test_argmax(self):
        outcome = select_event(decls(
            make_sync(request={A}, request_priority=1),
            make_sync(request={B}, request_priority=2)))
        assert outcome.selected == B
        assert outcome.effective_request_priority == 2

    def test_event_order_tie_break(self):
        outcome = select_event(decls(
            make_sync(request={A, B}, request_priority=7)))
        assert outcome.selected == min(A, B)

    def test_seeded_random_tie_break_uniform(self):
        rng = random.Random(123)
        seen = set()
        for _ in range(50):
            outcome = select_event(
                decls(make_sync(request={A, B}, request_priority=7)),
                SeededRandom(0), rng)
            seen.add(outcome.selected)
        assert seen == {A, B}

    def test_none_when_nothing_eligible(self):
        outcome = select_event(decls(make_sync(request={E}),
                                     make_sync(hard_block={E})))
        assert outcome.selected is None
        assert "no event" in outcome.explanation

    def test_overridden_blocks_reported(self):
        outcome = select_event(decls(
            make_sync(request={E}, request_priority=5),
            make_sync(soft_block={E}, block_priority=3)))
        assert outcome.selected == E
        assert outcome.overridden_blocks == (("t1", 3),)
        assert "overrode" in outcome.explanation


class TestSelectionOracle:
    def test_matches_naive_reference(self):
        rng = random.Random(4242)
        for _ in range(2000):
            declarations = random_declarations(rng)
            ours = select_event(declarations).selected
            assert ours == naive_select(declarations)

    def test_matches_classical_oracle(self):
        rng = random.Random(31337)
        for _ in range(500):
            declarations = random_declarations(rng, classical=True)
            ours = select_event(declarations).selected
            assert ours == classical_select(declarations)


class TestRun:
    def test_hot_cold_alternation(self, hotcold):
        result = run(hotcold, 6)
        assert [e.name for e in result.trace] == ["Hot", "Cold"] * 3
        assert result.stopped == "max_steps"

    def test_empty_program(self):
        result = run(Program([]), 10)
        assert len(result.trace) == 0
        assert result.stopped == "all_done"

    def test_one_shot_thread_halts(self):
        ms = MultiSync([make_sync(request={E})])
        thread = ScenarioThread("once", 0, lambda s: ms,
                                lambda s, e: __import__("scenplay").DONE)
        result = run(Program([thread]), 10)
        assert list(result.trace) == [E]
        assert result.stopped in ("no_eligible", "all_done")

    def test_outcomes_align_with_trace(self, hotcold):
        result = run(hotcold, 4)
        assert [o.selected for o in result.outcomes] == list(result.trace)

    def test_thread_error_reported(self):
        ms = MultiSync([make_sync(request={E}, wait_for={E})])

        def bad_advance(s, e):
            raise RuntimeError("boom")

        thread = ScenarioThread("bad", 0, lambda s: ms, bad_advance)
        with pytest.raises(ThreadStepError) as err:
            run(Program([thread]), 5)
        assert err.value.thread_name == "bad"
        assert err.value.step_index == 1

    def test_negative_max_steps_rejected(self, hotcold):
        with pytest.raises(ValueError):
            run(hotcold, -1)


class TestReplay:
    def test_replays_own_run(self, hotcold):
        result = run(hotcold, 7)
        assert replay(hot_cold_program(), result.trace).ok

    def test_divergence_index(self):
        assert replay(hot_cold_program(), Trace([COLD])).divergence_index == 0

    def test_replay_of_seeded_runs(self):
        for seed in range(5):
            prog = Program([requester_thread("a", A), requester_thread("b", B)],
                           SeededRandom(seed))
            result = run(prog, 9)
            fresh = Program([requester_thread("a", A), requester_thread("b", B)],
                            SeededRandom(seed))
            assert replay(fresh, result.trace).ok


class TestDeterminism:
    def test_event_order_run_is_pure(self, hotcold):
        t1 = run(hotcold, 10).trace
        t2 = run(hot_cold_program(), 10).trace
        assert t1 == t2


@st.composite
def declaration_sets(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_declarations(random.Random(seed))


@given(declaration_sets())
@settings(max_examples=200, deadline=None)
def test_selection_soundness(declarations):
    outcome = select_event(declarations)
    if outcome.selected is None:
        return
    event = outcome.selected
    pm = effective_priorities(declarations)
    r, b = pm[event]
    assert r is not None, "selected event must be requested"
    assert b is not HARD, "selected event must not be hard-blocked"
    if b is not None:
        assert r > b, "soft block overridden only by strictly higher request"
    assert outcome.requesters, "requesters nonempty when selected"


@given(declaration_sets())
@settings(max_examples=200, deadline=None)
def test_selection_maximality(declarations):
    outcome = select_event(declarations)
    eligible = eligible_events(effective_priorities(declarations))
    if outcome.selected is None:
        assert not eligible
    else:
        top = max(r for _e, r in eligible)
        assert outcome.effective_request_priority == top


def test_resumption_exactness(hotcold):
    machine = Machine(hotcold)
    for _ in range(6):
        before = {t.name: machine.thread_state(t.name) for t in hotcold.threads}
        decl_map = dict(machine.declarations())
        outcome = machine.step()
        after = {t.name: machine.thread_state(t.name) for t in hotcold.threads}
        for name in before:
            touched = outcome.selected in decl_map[name].trigger
            if not touched:
                assert before[name] == after[name]
