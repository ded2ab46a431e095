"""Game event vocabulary, precomputed once per board geometry."""

from __future__ import annotations

from functools import lru_cache
from typing import Optional

from ..events import Event
from .board import BoardSpec, STANDARD, YELLOW, RED

PLACE_YELLOW = "PlaceYellow"
PLACE_RED = "PlaceRed"
WIN = "Win"
DRAW = "Draw"
REQUEST_USER_INPUT = "RequestUserInput"


class GameEvents:
    """Interned events for one board geometry.

    Placement events exist for every cell regardless of current legality;
    the rule threads block the illegal ones.
    """

    def __init__(self, spec: BoardSpec = STANDARD):
        self.spec = spec
        self._yellow = {}
        self._red = {}
        for r in range(spec.rows):
            for c in range(spec.cols):
                self._yellow[(r, c)] = Event(PLACE_YELLOW, row=r, col=c)
                self._red[(r, c)] = Event(PLACE_RED, row=r, col=c)
        self.all_yellow = tuple(self._yellow[k] for k in sorted(self._yellow))
        self.all_red = tuple(self._red[k] for k in sorted(self._red))
        self.all_placements = self.all_yellow + self.all_red
        self.win_yellow = Event(WIN, color=YELLOW)
        self.win_red = Event(WIN, color=RED)
        self.draw = Event(DRAW)
        self.request_user_input = Event(REQUEST_USER_INPUT)
        self.terminals = (self.win_yellow, self.win_red, self.draw)

    def place(self, color: str, row: int, col: int) -> Event:
        return self._yellow[(row, col)] if color == YELLOW else self._red[(row, col)]

    def place_yellow(self, row: int, col: int) -> Event:
        return self._yellow[(row, col)]

    def place_red(self, row: int, col: int) -> Event:
        return self._red[(row, col)]

    def placements(self, color: str) -> tuple[Event, ...]:
        return self.all_yellow if color == YELLOW else self.all_red

    def win(self, color: str) -> Event:
        return self.win_yellow if color == YELLOW else self.win_red

    def column_events(self, color: str, col: int) -> tuple[Event, ...]:
        pool = self._yellow if color == YELLOW else self._red
        return tuple(pool[(r, col)] for r in range(self.spec.rows))


@lru_cache(maxsize=None)
def game_events(spec: BoardSpec = STANDARD) -> GameEvents:
    return GameEvents(spec)


def placement_info(event: Event) -> Optional[tuple[str, int, int]]:
    """Decode a placement event to (color, row, col), else None."""
    if event.name == PLACE_YELLOW:
        return (YELLOW, event["row"], event["col"])
    if event.name == PLACE_RED:
        return (RED, event["row"], event["col"])
    return None


def is_terminal(event: Event) -> bool:
    return event.name in (WIN, DRAW)
