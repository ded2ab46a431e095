"""scenplay: scenario threads, priority-based event selection, verification,
and a Connect4 agent composed from them."""

from .events import Event, Trace
from .sync import MultiSync, SyncDeclaration, make_sync, resumes
from .threads import DONE, InputBox, ScenarioThread
from .engine import (EventOrder, HARD, Machine, Program, ReplayResult, RunResult,
                     SeededRandom, SelectionOutcome, ThreadStepError,
                     effective_priorities, eligible_events, replay, run,
                     select_event)

__all__ = [
    "DONE", "Event", "EventOrder", "HARD", "InputBox", "Machine", "MultiSync",
    "Program", "ReplayResult", "RunResult", "ScenarioThread", "SeededRandom",
    "SelectionOutcome", "SyncDeclaration", "ThreadStepError", "Trace",
    "effective_priorities", "eligible_events", "make_sync", "replay",
    "resumes", "run", "select_event",
]
