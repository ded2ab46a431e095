"""Scenario threads: deterministic state machines coordinated via events.

A thread is a (declare, advance) pair over a serializable, hashable state:
`declare(state)` yields the thread's declaration at its current sync point
and `advance(state, event)` transitions on a resuming event, returning the
next state or DONE. Splitting the transition this way guarantees that a
thread's declaration is a pure function of its state, which is what lets
the verifier hash, compare, and restore whole program configurations.

Threads never share mutable state; they interact only through events.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from .events import Event
from .sync import MultiSync, SyncLike, as_multisync


class _Done:
    __slots__ = ()

    def __repr__(self) -> str:
        return "DONE"


#: Sentinel a thread's advance returns when its behavior is complete.
DONE = _Done()


@dataclass(frozen=True)
class ScenarioThread:
    """A self-contained behavior unit.

    `declare` must be pure; `advance` must be deterministic. States must
    be hashable values built from ints, strings, bools, None, tuples and
    frozensets so configurations can be digested and compared. The only
    sanctioned exception is an interactive input thread (flagged via
    `input_box`), which may poll for external input inside `advance` and
    is excluded from verification.
    """

    name: str
    start: Any
    declare: Callable[[Any], SyncLike]
    advance: Callable[[Any, Event], Any]
    input_box: Optional["InputBox"] = field(default=None, compare=False)

    def step(self, state: Any, event: Event | None):
        """One transition: (state, resume-event-or-None) -> (state', MultiSync) or DONE.

        Passing event=None activates the thread at its start state.
        """
        if event is None:
            new_state = state
        else:
            new_state = self.advance(state, event)
            if new_state is DONE:
                return DONE
        return new_state, as_multisync(self.declare(new_state))


class InputBox:
    """Mutable slot holding the column provider for an interactive thread.

    The engine's run() may late-bind a provider here; the session service
    rebinds it to a mailbox. This is the single boundary where the engine
    may suspend awaiting external data.
    """

    __slots__ = ("provider",)

    def __init__(self, provider: Callable[[], Any] | None = None):
        self.provider = provider

    def ask(self):
        if self.provider is None:
            raise RuntimeError("interactive thread polled with no input provider bound")
        return self.provider()


def constant_thread(name: str, declaration: SyncLike) -> ScenarioThread:
    """A thread that declares the same thing at every sync point, forever."""
    ms = as_multisync(declaration)
    return ScenarioThread(name=name, start=0, declare=lambda s: ms,
                          advance=lambda s, e: 0)
