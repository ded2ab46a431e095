"""Verification wiring for Connect4: program factories, forced openings,
and the unsafe predicates the checker runs against.

Verification programs swap the interactive red player for an adversarial
one that requests every red placement, so the checker's branch points are
exactly red's choices (plus genuine agent ties).
"""

from __future__ import annotations

from typing import Callable, Iterable, Optional, Sequence

from ..events import Event, Trace
from ..engine import Program
from ..verify import VerificationTask, forced_prefix_thread
from .agent import AgentConfig, build_agent_program
from .board import Board, BoardSpec, STANDARD, YELLOW, RED
from .events import game_events, is_terminal, placement_info
from .rules import P_WIN_EVENT

# Forced opening moves outrank every strategy request but never a pending
# Win/Draw, so terminal events cannot be starved mid-prefix.
P_FORCE = 25000


def placements_only(trace: Iterable[Event]) -> list[Event]:
    return [e for e in trace if placement_info(e) is not None]


def forced_opening_thread(prefix: Sequence[Event],
                          spec: BoardSpec = STANDARD):
    """A forced-prefix thread over the board's placement vocabulary."""
    ev = game_events(spec)
    return forced_prefix_thread(prefix, block=ev.all_placements, priority=P_FORCE)


def verification_program_factory(config: AgentConfig = AgentConfig(),
                                 prefix: Sequence[Event] = ()) -> Callable[[], Program]:
    """Deterministic factory for explore(): agent vs adversarial red,
    optionally pinned to a fixed opening."""
    prefix = tuple(prefix)

    def factory() -> Program:
        extra = [forced_opening_thread(prefix, config.spec)] if prefix else []
        return build_agent_program(config, red_player="adversarial",
                                   extra_threads=extra)

    return factory


def red_wins(trace: Trace, last: Event) -> bool:
    return last.name == "Win" and last.get("color") == RED


def red_wins_or_draw(trace: Trace, last: Event) -> bool:
    return last.name == "Draw" or (last.name == "Win" and last.get("color") == RED)


def illegal_move_unsafe(spec: BoardSpec = STANDARD) -> Callable[[Trace, Event], bool]:
    """Unsafe iff the last event breaks the rules given the trace so far:
    a placement defying gravity or turn order, any event after a terminal,
    or a second terminal. Folds column heights only, so it stays cheap
    inside exhaustive exploration."""

    def unsafe(trace: Trace, last: Event) -> bool:
        heights = [0] * spec.cols
        yellow_to_move = True
        terminal_seen = False
        for event in trace.events[:-1]:
            name = event.name
            if name == "Win" or name == "Draw":
                terminal_seen = True
            elif name == "PlaceYellow" or name == "PlaceRed":
                col = event["col"]
                if heights[col] >= spec.rows:
                    return True  # the prefix itself was illegal
                heights[col] += 1
                yellow_to_move = not yellow_to_move
        if terminal_seen:
            return True  # nothing may follow a Win or Draw
        info = placement_info(last)
        if info is None:
            return False
        color, row, col = info
        if (color == YELLOW) != yellow_to_move:
            return True
        return heights[col] != row

    return unsafe


def prefix_proof_task(config: AgentConfig, prefix: Sequence[Event], *,
                      max_states: int = 300_000,
                      max_depth: Optional[int] = None) -> VerificationTask:
    """Task asserting yellow always wins after the given forced opening."""
    spec = config.spec
    # every game ends within cells placements plus one terminal event
    depth = max_depth if max_depth is not None else spec.cells + 2
    return VerificationTask(
        program_factory=verification_program_factory(config, prefix),
        unsafe=red_wins_or_draw,
        max_depth=depth,
        max_states=max_states,
        # the win/draw predicates depend only on the reached configuration
        history_sensitive=False,
    )
