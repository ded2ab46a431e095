"""Rule-enforcing scenario threads: the game, minus any strategy.

Each thread owns one narrow responsibility and tracks only what it needs
via waited events: the board manager mirrors placements, valid_placement
hard-blocks anything defying gravity, enforce_turns alternates colors,
per-line win checkers raise Win, check_draw raises Draw on a full board,
and handle_win freezes the game after a terminal event.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Optional

from ..events import Event
from ..sync import INERT, MultiSync, make_sync
from ..threads import DONE, InputBox, ScenarioThread, constant_thread
from .board import BoardSpec, Line, STANDARD, YELLOW, RED, all_lines
from .events import GameEvents, game_events, is_terminal, placement_info

# Rule-layer priorities: Win must outrank every strategy constant and Draw,
# Draw outranks base requests, base is the floor strategies build above.
P_WIN_EVENT = 30000
P_DRAW = 100
P_BASE = 0


def board_manager_thread(spec: BoardSpec = STANDARD) -> ScenarioThread:
    """Mirrors placements into a grid; never requests or blocks."""
    ev = game_events(spec)
    empty_grid = tuple(tuple("." for _ in range(spec.cols)) for _ in range(spec.rows))
    watch = MultiSync([make_sync(wait_for=ev.all_placements)])

    def declare(grid):
        return watch

    def advance(grid, event: Event):
        color, row, col = placement_info(event)
        if grid[row][col] != ".":
            raise RuntimeError(f"placement into occupied cell ({row},{col})")
        new_row = tuple(color if c == col else v for c, v in enumerate(grid[row]))
        return tuple(new_row if r == row else old for r, old in enumerate(grid))

    return ScenarioThread("board_manager", empty_grid, declare, advance)


@lru_cache(maxsize=None)
def _column_gravity_block(spec: BoardSpec, col: int, height: int):
    ev = game_events(spec)
    blocked = []
    for row in range(spec.rows):
        if row != height:
            blocked.append(ev.place_yellow(row, col))
            blocked.append(ev.place_red(row, col))
    return make_sync(hard_block=blocked)


def valid_placement_thread(spec: BoardSpec = STANDARD) -> ScenarioThread:
    """Hard-blocks every placement that is not at its column's lowest empty row."""
    ev = game_events(spec)
    watch = make_sync(wait_for=ev.all_placements)

    @lru_cache(maxsize=65536)
    def declare(heights):
        return MultiSync([watch] + [_column_gravity_block(spec, col, h)
                                    for col, h in enumerate(heights)])

    def advance(heights, event: Event):
        _color, _row, col = placement_info(event)
        return tuple(h + 1 if c == col else h for c, h in enumerate(heights))

    return ScenarioThread("valid_placement", (0,) * spec.cols, declare, advance)


def enforce_turns_thread(spec: BoardSpec = STANDARD) -> ScenarioThread:
    """Alternates turns starting with yellow by blocking the idle color."""
    ev = game_events(spec)
    block_red = MultiSync([make_sync(wait_for=ev.all_placements, hard_block=ev.all_red)])
    block_yellow = MultiSync([make_sync(wait_for=ev.all_placements, hard_block=ev.all_yellow)])

    def declare(to_move):
        return block_red if to_move == YELLOW else block_yellow

    def advance(to_move, event: Event):
        return RED if to_move == YELLOW else YELLOW

    return ScenarioThread("enforce_turns", YELLOW, declare, advance)


def check_line_win_thread(line: Line, color: str, spec: BoardSpec = STANDARD) -> ScenarioThread:
    """Watches one line; requests Win(color) once all its cells are `color`."""
    ev = game_events(spec)
    win_event = ev.win(color)
    cells = line.cells
    claim = MultiSync([make_sync(request=win_event, request_priority=P_WIN_EVENT)])
    watch_cache = {}

    def declare(state):
        if state == "claim":
            return claim
        cached = watch_cache.get(state)
        if cached is None:
            pending = [ev.place(color, r, c)
                       for i, (r, c) in enumerate(cells) if not state[i]]
            cached = MultiSync([make_sync(wait_for=pending)])
            watch_cache[state] = cached
        return cached

    def advance(state, event: Event):
        if state == "claim":
            return DONE  # our Win was selected
        _color, row, col = placement_info(event)
        state = tuple(seen or (row, col) == cells[i] for i, seen in enumerate(state))
        return "claim" if all(state) else state

    return ScenarioThread(f"win_check_{color}_{line.key}", (False,) * len(cells),
                          declare, advance)


def check_draw_thread(spec: BoardSpec = STANDARD) -> ScenarioThread:
    """Counts placements; requests Draw once the board is full, unless a win lands."""
    ev = game_events(spec)
    wins = (ev.win_yellow, ev.win_red)
    claim = MultiSync([make_sync(request=ev.draw, request_priority=P_DRAW, wait_for=wins)])
    watch = MultiSync([make_sync(wait_for=ev.all_placements + wins)])

    def declare(count):
        return claim if count >= spec.cells else watch

    def advance(count, event: Event):
        if is_terminal(event):
            return DONE
        return count + 1

    return ScenarioThread("check_draw", 0, declare, advance)


def handle_win_thread(spec: BoardSpec = STANDARD) -> ScenarioThread:
    """After any Win or Draw, hard-blocks the game's events forever."""
    ev = game_events(spec)
    armed = MultiSync([make_sync(wait_for=ev.terminals)])
    stopping = MultiSync([make_sync(hard_block=ev.all_placements + ev.terminals)])

    def declare(state):
        return armed if state == "armed" else stopping

    def advance(state, event: Event):
        return "stopping"

    return ScenarioThread("handle_win", "armed", declare, advance)


def computer_player_thread(spec: BoardSpec = STANDARD) -> ScenarioThread:
    """Yellow requests every placement at base priority; rules filter legality."""
    ev = game_events(spec)
    return constant_thread("computer_player",
                           make_sync(request=ev.all_yellow, request_priority=P_BASE))


def adversarial_red_thread(spec: BoardSpec = STANDARD) -> ScenarioThread:
    """Verification-mode red: requests every red placement so the verifier
    branches on red's choices."""
    ev = game_events(spec)
    return constant_thread("adversarial_red",
                           make_sync(request=ev.all_red, request_priority=P_BASE))


def user_player_thread(provider: Optional[Callable[[], object]] = None,
                       spec: BoardSpec = STANDARD) -> ScenarioThread:
    """Interactive red: announces RequestUserInput, polls the provider for a
    column, and requests every row of that column (gravity picks the row).

    Out-of-range and full-column answers are re-prompted. Run-only: the
    provider poll makes this thread unfit for verification.
    """
    ev = game_events(spec)
    box = InputBox(provider)
    prompt = MultiSync([make_sync(request=ev.request_user_input, request_priority=P_BASE,
                                  wait_for=ev.terminals)])
    opp_watch = MultiSync([make_sync(wait_for=ev.all_yellow + ev.terminals)])
    drops = [MultiSync([make_sync(request=ev.column_events(RED, col),
                                  request_priority=P_BASE, wait_for=ev.terminals)])
             for col in range(spec.cols)]

    def declare(state):
        phase = state[0]
        if phase == "opp":
            return opp_watch
        if phase == "prompt":
            return prompt
        return drops[state[2]]

    def ask_column(heights) -> int:
        while True:
            raw = box.ask()
            try:
                col = int(raw)
            except (TypeError, ValueError):
                continue
            if 0 <= col < spec.cols and heights[col] < spec.rows:
                return col

    def advance(state, event: Event):
        if is_terminal(event):
            return DONE
        phase, heights = state[0], state[1]
        if phase == "opp":
            _c, _r, col = placement_info(event)
            heights = tuple(h + 1 if c == col else h for c, h in enumerate(heights))
            return ("prompt", heights)
        if phase == "prompt":
            return ("drop", heights, ask_column(heights))
        _c, _r, col = placement_info(event)
        heights = tuple(h + 1 if c == col else h for c, h in enumerate(heights))
        return ("opp", heights)

    return ScenarioThread("user_player", ("opp", (0,) * spec.cols),
                          declare, advance, input_box=box)


def core_rule_threads(spec: BoardSpec = STANDARD) -> list[ScenarioThread]:
    """The full rule layer: board, gravity, turns, win/draw detection, stop."""
    threads = [
        board_manager_thread(spec),
        valid_placement_thread(spec),
        enforce_turns_thread(spec),
    ]
    for line in all_lines(spec):
        threads.append(check_line_win_thread(line, YELLOW, spec))
        threads.append(check_line_win_thread(line, RED, spec))
    threads.append(check_draw_thread(spec))
    threads.append(handle_win_thread(spec))
    return threads
