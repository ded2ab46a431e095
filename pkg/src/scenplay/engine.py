"""Event selection and the engine that drives scenario threads.

At each synchronization point every live thread announces a multi-sync
declaration. An event is eligible when someone requests it and it is not
hard-blocked nor soft-blocked at a priority at or above its best request.
Among eligible events the engine selects one with maximal effective
request priority; ties go to the configured tie-break rule. Blocking wins
request/block priority ties.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Optional, Sequence, Union

from .events import Event, Trace
from .sync import MultiSync, as_multisync
from .threads import DONE, ScenarioThread


class _HardBlock:
    __slots__ = ()

    def __repr__(self) -> str:
        return "HARD"

    def __reduce__(self):
        return (_hard_singleton, ())


#: Marker for "blocked unconditionally" in effective-priority maps.
HARD = _HardBlock()


def _hard_singleton():
    return HARD


@dataclass(frozen=True)
class EventOrder:
    """Deterministic tie-break: least event under the event total order."""


@dataclass(frozen=True)
class SeededRandom:
    """Tie-break uniformly over the argmax set with a run-scoped generator."""

    seed: int = 0


TieBreak = Union[EventOrder, SeededRandom]

Declarations = Sequence[tuple[str, MultiSync]]


def effective_priorities(declarations: Declarations) -> dict[Event, tuple[Optional[int], Any]]:
    """Combine all statements into per-event (R, B) effective priorities.

    R(e) is the max request priority over statements requesting e, or None
    if unrequested. B(e) is HARD if any statement hard-blocks e, else the
    max block priority over soft blocks, or None if unblocked.
    """
    requests: dict[Event, int] = {}
    soft: dict[Event, int] = {}
    hard: set[Event] = set()
    for _name, multisync in declarations:
        if not multisync.has_requests_or_blocks:
            continue
        for stmt in multisync.statements:
            rp = stmt.request_priority
            for e in stmt.request:
                cur = requests.get(e)
                if cur is None or rp > cur:
                    requests[e] = rp
            bp = stmt.block_priority
            for e in stmt.soft_block:
                cur = soft.get(e)
                if cur is None or bp > cur:
                    soft[e] = bp
            hard.update(stmt.hard_block)
    result: dict[Event, tuple[Optional[int], Any]] = {}
    for e in set(requests) | set(soft) | hard:
        b = HARD if e in hard else soft.get(e)
        result[e] = (requests.get(e), b)
    return result


def eligible_events(priority_map: dict[Event, tuple[Optional[int], Any]]) -> set[tuple[Event, int]]:
    """Events selectable under the strict request-beats-block rule.

    Hard-blocked events are never eligible; a soft-blocked event needs a
    strictly higher request priority (blocking wins ties).
    """
    out = set()
    for e, (r, b) in priority_map.items():
        if r is None:
            continue
        if b is HARD:
            continue
        if b is not None and r <= b:
            continue
        out.add((e, r))
    return out


class SelectionOutcome:
    """The result of one synchronization point's event selection."""

    __slots__ = ("selected", "effective_request_priority", "requesters",
                 "overridden_blocks", "_explanation")

    def __init__(self, selected: Optional[Event], effective_request_priority: int = 0,
                 requesters: tuple[str, ...] = (),
                 overridden_blocks: tuple[tuple[str, int], ...] = ()):
        self.selected = selected
        self.effective_request_priority = effective_request_priority
        self.requesters = requesters
        self.overridden_blocks = overridden_blocks
        self._explanation = None

    @property
    def explanation(self) -> str:
        if self._explanation is None:
            if self.selected is None:
                text = "no event was eligible"
            else:
                who = ", ".join(f"{name}@{prio}" for name, prio in self.requesters)
                text = (f"{self.selected!r} selected at priority "
                        f"{self.effective_request_priority}; requested by {who}")
                if self.overridden_blocks:
                    blocks = ", ".join(f"{name}@{prio}" for name, prio in self.overridden_blocks)
                    text += f"; overrode soft blocks by {blocks}"
            self._explanation = text
        return self._explanation

    def __repr__(self) -> str:
        return f"SelectionOutcome({self.explanation})"


def select_event(declarations: Declarations, tie_break: TieBreak = EventOrder(),
                 rng: random.Random | None = None) -> SelectionOutcome:
    """Pick one event per the priority-extended selection rules.

    Returns an outcome with selected=None when nothing is eligible, which
    signals termination or deadlock to the caller.
    """
    requests: dict[Event, int] = {}
    requesters: dict[Event, list[tuple[str, int]]] = {}
    soft: dict[Event, int] = {}
    soft_by: dict[Event, list[tuple[str, int]]] = {}
    hard: set[Event] = set()
    for name, multisync in declarations:
        if not multisync.has_requests_or_blocks:
            continue
        for stmt in multisync.statements:
            if stmt.request:
                rp = stmt.request_priority
                for e in stmt.request:
                    cur = requests.get(e)
                    if cur is None or rp > cur:
                        requests[e] = rp
                    requesters.setdefault(e, []).append((name, rp))
            if stmt.soft_block:
                bp = stmt.block_priority
                for e in stmt.soft_block:
                    cur = soft.get(e)
                    if cur is None or bp > cur:
                        soft[e] = bp
                    soft_by.setdefault(e, []).append((name, bp))
            if stmt.hard_block:
                hard.update(stmt.hard_block)

    best: list[Event] = []
    best_r: Optional[int] = None
    for e, r in requests.items():
        if e in hard:
            continue
        b = soft.get(e)
        if b is not None and r <= b:
            continue
        if best_r is None or r > best_r:
            best = [e]
            best_r = r
        elif r == best_r:
            best.append(e)

    if best_r is None:
        return SelectionOutcome(None)

    if len(best) == 1:
        chosen = best[0]
    elif isinstance(tie_break, EventOrder):
        chosen = min(best)
    elif isinstance(tie_break, SeededRandom):
        if rng is None:
            rng = random.Random(tie_break.seed)
        chosen = rng.choice(sorted(best))
    else:
        raise TypeError(f"unknown tie-break {tie_break!r}")

    return SelectionOutcome(
        selected=chosen,
        effective_request_priority=best_r,
        requesters=tuple(requesters.get(chosen, ())),
        overridden_blocks=tuple(soft_by.get(chosen, ())),
    )


@dataclass(frozen=True)
class Program:
    """An ordered composition of scenario threads plus a tie-break rule."""

    threads: tuple[ScenarioThread, ...]
    tie_break: TieBreak = field(default_factory=EventOrder)

    def __init__(self, threads: Iterable[ScenarioThread], tie_break: TieBreak | None = None):
        threads = tuple(threads)
        names = [t.name for t in threads]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"duplicate thread names: {dupes}")
        object.__setattr__(self, "threads", threads)
        object.__setattr__(self, "tie_break", tie_break if tie_break is not None else EventOrder())


class ThreadStepError(RuntimeError):
    """A thread's transition raised; carries the thread name and step index."""

    def __init__(self, thread_name: str, step_index: int, cause: BaseException):
        super().__init__(f"thread {thread_name!r} failed at step {step_index}: {cause}")
        self.thread_name = thread_name
        self.step_index = step_index


class _Rt:
    """Per-thread runtime slot: current state and cached declaration.

    Slots are treated as immutable once stored so machine forks can share
    them; apply() replaces entries instead of mutating.
    """

    __slots__ = ("state", "decl", "done")

    def __init__(self, state, decl: MultiSync | None, done: bool):
        self.state = state
        self.decl = decl
        self.done = done


_DONE_RT = None  # initialized below


class Machine:
    """A program paused at a synchronization point.

    Owns per-thread runtime state; supports stepping, forking (cheap copy
    for search), and exposing the configuration key that identifies the
    paused program for hashing and visited-set pruning.
    """

    __slots__ = ("program", "_rts", "_rng", "steps")

    def __init__(self, program: Program, _fork_from: "Machine" = None):
        self.program = program
        if _fork_from is not None:
            self._rts = list(_fork_from._rts)  # slots are copy-on-write
            self._rng = None
            self.steps = _fork_from.steps
            return
        self._rng = (random.Random(program.tie_break.seed)
                     if isinstance(program.tie_break, SeededRandom) else None)
        self.steps = 0
        self._rts = []
        for thread in program.threads:
            try:
                stepped = thread.step(thread.start, None)
            except Exception as exc:  # noqa: BLE001 - rewrapped with context
                raise ThreadStepError(thread.name, 0, exc) from exc
            if stepped is DONE:
                self._rts.append(_Rt(DONE, None, True))
            else:
                state, decl = stepped
                self._rts.append(_Rt(state, decl, False))

    def fork(self) -> "Machine":
        return Machine(self.program, _fork_from=self)

    @property
    def all_done(self) -> bool:
        return all(rt.done for rt in self._rts)

    def config_key(self) -> tuple:
        """Hashable identity of the paused program: thread states + done flags."""
        return tuple(DONE if rt.done else rt.state for rt in self._rts)

    def declarations(self) -> list[tuple[str, MultiSync]]:
        threads = self.program.threads
        return [(threads[i].name, rt.decl)
                for i, rt in enumerate(self._rts) if not rt.done]

    def thread_state(self, name: str):
        for thread, rt in zip(self.program.threads, self._rts):
            if thread.name == name:
                return DONE if rt.done else rt.state
        raise KeyError(name)

    def select(self) -> SelectionOutcome:
        return select_event(self.declarations(), self.program.tie_break, self._rng)

    def priority_map(self) -> dict[Event, tuple[Optional[int], Any]]:
        return effective_priorities(self.declarations())

    def eligible(self) -> set[tuple[Event, int]]:
        return eligible_events(self.priority_map())

    def eligible_fast(self) -> list[tuple[Event, int]]:
        """Single-pass eligible-event computation for search loops."""
        requests: dict[Event, int] = {}
        soft: dict[Event, int] = {}
        hard = set()
        for rt in self._rts:
            if rt.done:
                continue
            decl = rt.decl
            if not decl.has_requests_or_blocks:
                continue
            for stmt in decl.statements:
                if stmt.request:
                    rp = stmt.request_priority
                    for e in stmt.request:
                        cur = requests.get(e)
                        if cur is None or rp > cur:
                            requests[e] = rp
                if stmt.soft_block:
                    bp = stmt.block_priority
                    for e in stmt.soft_block:
                        cur = soft.get(e)
                        if cur is None or bp > cur:
                            soft[e] = bp
                if stmt.hard_block:
                    hard.update(stmt.hard_block)
        out = []
        for e, r in requests.items():
            if e in hard:
                continue
            b = soft.get(e)
            if b is not None and r <= b:
                continue
            out.append((e, r))
        return out

    def apply(self, event: Event) -> None:
        """Resume exactly the threads whose declarations wait on `event`."""
        self.steps += 1
        threads = self.program.threads
        rts = self._rts
        for i, rt in enumerate(rts):
            if rt.done or event not in rt.decl.trigger:
                continue
            thread = threads[i]
            try:
                state = thread.advance(rt.state, event)
                if state is DONE:
                    rts[i] = _DONE_RT
                else:
                    decl = thread.declare(state)
                    if type(decl) is not MultiSync:
                        decl = as_multisync(decl)
                    rts[i] = _Rt(state, decl, False)
            except ThreadStepError:
                raise
            except Exception as exc:  # noqa: BLE001 - rewrapped with context
                raise ThreadStepError(thread.name, self.steps, exc) from exc

    def step(self) -> SelectionOutcome:
        """Select one event and advance; outcome.selected is None on deadlock."""
        outcome = self.select()
        if outcome.selected is not None:
            self.apply(outcome.selected)
        return outcome


_DONE_RT = _Rt(DONE, None, True)


@dataclass
class RunResult:
    """A finished run: the trace, per-step outcomes, and why it stopped."""

    trace: Trace
    outcomes: list[SelectionOutcome]
    stopped: str  # "no_eligible" | "all_done" | "max_steps"


def run(program: Program, max_steps: int,
        input_provider: Callable[[], Any] | None = None,
        on_event: Callable[[Event, SelectionOutcome], None] | None = None) -> RunResult:
    """Drive a program for up to max_steps synchronization points.

    Stops when no event is eligible, all threads are done, or the step
    budget runs out. `input_provider`, when given, is bound to any
    interactive threads that were built without one.
    """
    if max_steps < 0:
        raise ValueError("max_steps must be >= 0")
    if input_provider is not None:
        for thread in program.threads:
            if thread.input_box is not None and thread.input_box.provider is None:
                thread.input_box.provider = input_provider
    machine = Machine(program)
    events: list[Event] = []
    outcomes: list[SelectionOutcome] = []
    stopped = "max_steps"
    for _ in range(max_steps):
        if machine.all_done:
            stopped = "all_done"
            break
        outcome = machine.step()
        if outcome.selected is None:
            stopped = "no_eligible"
            break
        events.append(outcome.selected)
        outcomes.append(outcome)
        if on_event is not None:
            on_event(outcome.selected, outcome)
    return RunResult(Trace(events), outcomes, stopped)


@dataclass
class ReplayResult:
    ok: bool
    divergence_index: Optional[int] = None

    def __bool__(self) -> bool:
        return self.ok


def replay(program: Program, trace: Trace) -> ReplayResult:
    """Re-run with the tie-break forced to follow the trace.

    Each trace event must be eligible at its step; the index of the first
    step where that fails is reported.
    """
    machine = Machine(program)
    for i, event in enumerate(trace):
        if event not in {e for e, _r in machine.eligible()}:
            return ReplayResult(False, i)
        machine.apply(event)
    return ReplayResult(True)
