"""Strategy threads for the yellow agent, layered over the rule threads.

Each strategy watches only the cells it cares about (plus the cells
directly beneath them, to know what is immediately playable) and turns
its local view into prioritized requests and soft blocks. The priority
table realizes the pecking order: winning beats blocking an opponent win,
which beats refusing to gift one, which beats fork handling, which beats
building potential, which beats the center preference.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields, replace
from typing import Iterable, Optional, Sequence

from ..engine import Program, TieBreak
from ..events import Event
from ..sync import INERT, MultiSync, SyncDeclaration, make_sync
from ..threads import ScenarioThread, constant_thread
from .board import (BoardSpec, DIAG_DOWN, DIAG_UP, HORIZONTAL, Line, STANDARD,
                    VERTICAL, YELLOW, RED, all_lines, all_windows)
from .events import game_events
from .rules import (P_BASE, P_WIN_EVENT, adversarial_red_thread,
                    computer_player_thread, core_rule_threads, user_player_thread)


@dataclass(frozen=True)
class StrategyWeights:
    """Named priority constants; orderings are validated, exact values are
    configuration."""

    win: int = 20000
    block_threat: int = 19900
    block_below_threat: int = 19800
    fork_intersection: int = 18000
    fork_block: int = 17000
    fork_block_step: int = 100
    fork_below_softblock: int = 16900
    potential_win_p1: int = 15000
    potential_win_p2: int = 12000
    block_potential: int = 11000
    keep_threat: int = 14000
    center: int = 1000
    extend: int = 800
    # the odd-row bonus lifts a potential win to P1, per the odd-rows strategy
    odd_row_bonus: int = 3000
    even_row_bonus: int = 90


def validate_weights(w: StrategyWeights) -> None:
    """Assert every ordering the strategy stack depends on."""
    checks = [
        (w.win > w.block_threat > w.block_below_threat,
         "win > block_threat > block_below_threat"),
        (w.fork_intersection > w.fork_block, "fork_intersection > fork_block"),
        (w.win > w.block_threat + w.even_row_bonus,
         "a win request must outrank any parity-boosted block"),
        (w.block_below_threat > w.potential_win_p1 + w.odd_row_bonus,
         "gift-refusal soft blocks must beat potential-win requests"),
        (w.block_below_threat > w.block_potential + w.even_row_bonus,
         "gift-refusal soft blocks must beat potential-block requests"),
        (w.block_threat > w.fork_intersection,
         "an immediate block must beat fork handling"),
        (w.potential_win_p1 > w.potential_win_p2 > w.block_potential,
         "potential-win priorities must be ordered"),
        (w.fork_block_step >= 0 and w.odd_row_bonus >= 0 and w.even_row_bonus >= 0,
         "step and bonuses must be nonnegative"),
        (w.center > P_BASE, "center preference must sit above the base requests"),
        (w.extend + w.odd_row_bonus < w.block_potential,
         "line extension must stay below the tactical layers"),
        (w.extend + w.odd_row_bonus < w.keep_threat < w.fork_below_softblock,
         "threat-keeping blocks must beat idle layers but stay overridable"),
    ]
    for name in (f.name for f in fields(w)):
        value = getattr(w, name)
        if name not in ("fork_block_step", "odd_row_bonus", "even_row_bonus"):
            checks.append((P_BASE < value < P_WIN_EVENT,
                           f"{name} must lie strictly between the base and Win priorities"))
    failed = [msg for ok, msg in checks if not ok]
    if failed:
        raise ValueError("invalid strategy weights: " + "; ".join(failed))


def parity_bonus(row: int, threat_color: str, w: StrategyWeights) -> int:
    """Turn-order parity bonus for a cell, counted on 1-based rows.

    Yellow (first player) threats earn the bonus on odd rows (internal
    0, 2, 4); blocking red earns it on even rows (internal 1, 3, 5).
    """
    if threat_color == YELLOW:
        return w.odd_row_bonus if row % 2 == 0 else 0
    return w.even_row_bonus if row % 2 == 1 else 0


_EMPTY_CELL, _YELLOW_CELL, _RED_CELL = 0, 1, 2
_COLOR_CODE = {YELLOW: _YELLOW_CELL, RED: _RED_CELL}

# plan results shared across games: the same (strategy, state) pair always
# yields the same declaration, and thread states recur heavily across runs
_PLAN_CACHE: dict = {}
_PLAN_TOKENS: dict = {}


def _plan_token(kind: str, w: StrategyWeights, spec: BoardSpec,
                cells: tuple) -> int:
    key = (kind, w, spec, cells)
    token = _PLAN_TOKENS.get(key)
    if token is None:
        token = len(_PLAN_TOKENS)
        _PLAN_TOKENS[key] = token
    return token


def _cell_watch_thread(name: str, kind: str, cells: Sequence[tuple[int, int]],
                       plan, w: StrategyWeights, spec: BoardSpec) -> ScenarioThread:
    """A thread tracking ownership of `cells` and fill state beneath them.

    `plan(owners, below_filled)` returns the strategy's statements for the
    current view, an empty list when dormant, or None once the position
    can never matter again (the thread then goes inert for good).
    """
    ev = game_events(spec)
    cells = tuple(cells)
    # per-event update plans: (kind, cell-index, owner-code) triples
    updates: dict[Event, tuple[tuple[str, int, int], ...]] = {}
    for i, (r, c) in enumerate(cells):
        for color in (YELLOW, RED):
            e = ev.place(color, r, c)
            updates[e] = updates.get(e, ()) + (("own", i, _COLOR_CODE[color]),)
        if r > 0:
            for color in (YELLOW, RED):
                e = ev.place(color, r - 1, c)
                updates[e] = updates.get(e, ()) + (("below", i, 0),)
    trigger = tuple(updates)
    token = _plan_token(kind, w, spec, cells)

    def declare(state):
        key = (token, state)
        cached = _PLAN_CACHE.get(key)
        if cached is None:
            owners, below = state
            stmts = plan(owners, below)
            if stmts is None:
                cached = INERT
            else:
                cached = MultiSync([make_sync(wait_for=trigger)] + stmts)
            _PLAN_CACHE[key] = cached
        return cached

    def advance(state, event: Event):
        owners, below = state
        for what, i, code in updates[event]:
            if what == "own":
                owners = owners[:i] + (code,) + owners[i + 1:]
            else:
                below = below[:i] + (True,) + below[i + 1:]
        return (owners, below)

    start = ((_EMPTY_CELL,) * len(cells),
             tuple(r == 0 for r, _c in cells))
    return ScenarioThread(name, start, declare, advance)


def _grouped_requests(ev, targets: Iterable[tuple[int, int, int]]) -> list[SyncDeclaration]:
    """Group (row, col, priority) placement requests into one statement per
    priority, yielding a compact multi-sync."""
    by_prio: dict[int, list[Event]] = {}
    for r, c, prio in targets:
        by_prio.setdefault(prio, []).append(ev.place_yellow(r, c))
    return [make_sync(request=events, request_priority=prio)
            for prio, events in sorted(by_prio.items())]


def win_threat_thread(line: Line, w: StrategyWeights = StrategyWeights(),
                      spec: BoardSpec = STANDARD) -> ScenarioThread:
    """Completes yellow lines: requests the finishing cell at WIN priority
    when three are down, and builds playable pairs at potential priority."""
    ev = game_events(spec)
    cells = line.cells
    need = spec.win_length

    def plan(owners, below):
        if _RED_CELL in owners:
            return None  # red poisoned the line for yellow
        own = owners.count(_YELLOW_CELL)
        if own == need - 1:
            i = owners.index(_EMPTY_CELL)
            r, c = cells[i]
            if below[i]:
                return [make_sync(request=ev.place_yellow(r, c), request_priority=w.win)]
            if r % 2 == 0:
                # an odd-row completion (1-based) falls to yellow in a filling
                # endgame; don't bury it by playing the cell beneath
                return [make_sync(soft_block=ev.place_yellow(r - 1, c),
                                  block_priority=w.keep_threat)]
            return []
        if own == need - 2:
            targets = [(cells[i][0], cells[i][1],
                        w.potential_win_p2 + parity_bonus(cells[i][0], YELLOW, w))
                       for i in range(len(cells))
                       if owners[i] == _EMPTY_CELL and below[i]]
            return _grouped_requests(ev, targets)
        return []

    return _cell_watch_thread(f"win_threat_{line.key}", "win_threat", cells,
                              plan, w, spec)


def block_threat_thread(line: Line, w: StrategyWeights = StrategyWeights(),
                        spec: BoardSpec = STANDARD) -> ScenarioThread:
    """Counters red lines: takes the finishing cell when red has three and
    it is playable, soft-blocks the cell beneath it when it is not (playing
    there would hand red the win), and contests playable red pairs."""
    ev = game_events(spec)
    cells = line.cells
    need = spec.win_length

    def plan(owners, below):
        if _YELLOW_CELL in owners:
            return None  # yellow already spoils this red line
        red = owners.count(_RED_CELL)
        if red == need - 1:
            i = owners.index(_EMPTY_CELL)
            r, c = cells[i]
            if below[i]:
                prio = w.block_threat + parity_bonus(r, RED, w)
                return [make_sync(request=ev.place_yellow(r, c), request_priority=prio)]
            return [make_sync(soft_block=ev.place_yellow(r - 1, c),
                              block_priority=w.block_below_threat)]
        if red == need - 2:
            targets = [(cells[i][0], cells[i][1],
                        w.block_potential + parity_bonus(cells[i][0], RED, w))
                       for i in range(len(cells))
                       if owners[i] == _EMPTY_CELL and below[i]]
            return _grouped_requests(ev, targets)
        return []

    return _cell_watch_thread(f"block_threat_{line.key}", "block_threat", cells,
                              plan, w, spec)


def red_fork_manager_thread(window: Line, w: StrategyWeights = StrategyWeights(),
                            spec: BoardSpec = STANDARD) -> ScenarioThread:
    """Watches a (win_length+1)-cell window for red's open-run fork: the
    inner cells red with both ends empty creates two simultaneous threats.
    Disruption requests rise as the window's empty cells gain support, and
    the slots beneath the ends are soft-blocked against self-sabotage."""
    ev = game_events(spec)
    cells = window.cells
    last = len(cells) - 1
    inner = range(1, last)
    need = spec.win_length

    def plan(owners, below):
        if _YELLOW_CELL in owners:
            return None  # yellow in the window: fork impossible
        if owners[0] != _EMPTY_CELL or owners[last] != _EMPTY_CELL:
            return []
        inner_red = sum(1 for i in inner if owners[i] == _RED_CELL)
        if inner_red < need - 2:
            return []
        empties = [i for i in range(len(cells)) if owners[i] == _EMPTY_CELL]
        playable = [i for i in empties if below[i]]
        base = w.fork_block - w.fork_block_step * (len(empties) - len(playable))
        stmts = _grouped_requests(
            ev, [(cells[i][0], cells[i][1],
                  base + parity_bonus(cells[i][0], RED, w)) for i in playable])
        soft = [ev.place_yellow(cells[i][0] - 1, cells[i][1])
                for i in (0, last)
                if owners[i] == _EMPTY_CELL and not below[i] and cells[i][0] > 0]
        if soft:
            stmts.append(make_sync(soft_block=soft,
                                   block_priority=w.fork_below_softblock))
        return stmts

    return _cell_watch_thread(f"fork_watch_{window.key}", "fork_watch", cells,
                              plan, w, spec)


def red_intersection_fork_thread(line_a: Line, line_b: Line,
                                 w: StrategyWeights = StrategyWeights(),
                                 spec: BoardSpec = STANDARD) -> ScenarioThread:
    """Guards the linchpin of two red lines that cross in one cell: while
    red builds both, disruptions are requested at fork priority and the
    intersection itself, if still empty, at a strictly higher one."""
    shared = set(line_a.cells) & set(line_b.cells)
    if len(shared) != 1:
        raise ValueError("lines must share exactly one cell")
    ev = game_events(spec)
    cells = tuple(line_a.cells) + tuple(c for c in line_b.cells if c not in shared)
    x_index = cells.index(next(iter(shared)))
    a_idx = tuple(range(len(line_a.cells)))
    b_idx = tuple(cells.index(c) for c in line_b.cells)
    need = spec.win_length

    def plan(owners, below):
        if _YELLOW_CELL in owners:
            return None  # yellow spoils at least one of the lines
        red_a = sum(1 for i in a_idx if owners[i] == _RED_CELL)
        red_b = sum(1 for i in b_idx if owners[i] == _RED_CELL)
        if red_a < need - 2 or red_b < need - 2:
            return []
        stmts = []
        requests = [ev.place_yellow(*cells[i]) for i in range(len(cells))
                    if owners[i] == _EMPTY_CELL and below[i]]
        # below-cell protections stay at the dedicated (lower) constant so a
        # rival linchpin request can still override them; discourage, not lock
        soft = [ev.place_yellow(cells[i][0] - 1, cells[i][1])
                for i in range(len(cells))
                if owners[i] == _EMPTY_CELL and not below[i] and cells[i][0] > 0]
        if requests or soft:
            stmts.append(make_sync(request=requests, request_priority=w.fork_block,
                                   soft_block=soft,
                                   block_priority=w.fork_below_softblock))
        if owners[x_index] == _EMPTY_CELL:
            xr, xc = cells[x_index]
            soft_x = ([ev.place_yellow(xr - 1, xc)]
                      if xr > 0 and not below[x_index] else [])
            stmts.append(make_sync(request=ev.place_yellow(xr, xc),
                                   request_priority=w.fork_intersection,
                                   soft_block=soft_x,
                                   block_priority=w.fork_below_softblock))
        return stmts

    name = f"x_fork_{line_a.key}__{line_b.key}"
    return _cell_watch_thread(name, "x_fork", cells, plan, w, spec)


def yellow_fork_builder_thread(line_a: Line, line_b: Line,
                               w: StrategyWeights = StrategyWeights(),
                               spec: BoardSpec = STANDARD) -> ScenarioThread:
    """Builds yellow's own double threats: once yellow holds a playable
    pair in each of two crossing lines, pushes the cells that grow both."""
    shared = set(line_a.cells) & set(line_b.cells)
    if len(shared) != 1:
        raise ValueError("lines must share exactly one cell")
    ev = game_events(spec)
    cells = tuple(line_a.cells) + tuple(c for c in line_b.cells if c not in shared)
    a_idx = tuple(range(len(line_a.cells)))
    b_idx = tuple(cells.index(c) for c in line_b.cells)
    need = spec.win_length

    def plan(owners, below):
        if _RED_CELL in owners:
            return None
        own_a = sum(1 for i in a_idx if owners[i] == _YELLOW_CELL)
        own_b = sum(1 for i in b_idx if owners[i] == _YELLOW_CELL)
        if own_a < need - 2 or own_b < need - 2:
            return []
        targets = [(cells[i][0], cells[i][1],
                    w.potential_win_p1 + parity_bonus(cells[i][0], YELLOW, w))
                   for i in range(len(cells))
                   if owners[i] == _EMPTY_CELL and below[i]]
        return _grouped_requests(ev, targets)

    name = f"fork_builder_{line_a.key}__{line_b.key}"
    return _cell_watch_thread(name, "fork_builder", cells, plan, w, spec)


def line_extension_thread(line: Line, w: StrategyWeights = StrategyWeights(),
                          spec: BoardSpec = STANDARD) -> ScenarioThread:
    """Keeps quiet moves purposeful: once a viable line holds a single
    yellow disc, its playable cells are worth a little, odd rows a little
    more. Added after tournament traces showed priority-floor moves
    squandering the initiative."""
    ev = game_events(spec)
    cells = line.cells
    need = spec.win_length

    def plan(owners, below):
        if _RED_CELL in owners:
            return None
        if owners.count(_YELLOW_CELL) != need - 3:
            return []
        targets = [(cells[i][0], cells[i][1],
                    w.extend + parity_bonus(cells[i][0], YELLOW, w))
                   for i in range(len(cells))
                   if owners[i] == _EMPTY_CELL and below[i]]
        return _grouped_requests(ev, targets)

    return _cell_watch_thread(f"extend_{line.key}", "extend", cells, plan, w, spec)


def center_column_thread(w: StrategyWeights = StrategyWeights(),
                         spec: BoardSpec = STANDARD) -> ScenarioThread:
    """Prefers the center column whenever nothing tactical outranks it."""
    ev = game_events(spec)
    column = ev.column_events(YELLOW, spec.center_col)
    return constant_thread("center_column",
                           make_sync(request=column, request_priority=w.center))


def crossing_line_pairs(spec: BoardSpec, combos: Iterable[tuple[str, str]]) -> list[tuple[Line, Line]]:
    """Pairs of lines from the given direction combos sharing exactly one cell."""
    by_direction: dict[str, list[Line]] = {}
    for line in all_lines(spec):
        by_direction.setdefault(line.direction, []).append(line)
    pairs = []
    for da, db in combos:
        for la in by_direction.get(da, ()):
            cells_a = set(la.cells)
            for lb in by_direction.get(db, ()):
                if len(cells_a & set(lb.cells)) == 1:
                    pairs.append((la, lb))
    return pairs


# red fork intersections: the vertical-diagonal case plus the symmetric
# cross-direction combinations handled by the same mechanism
INTERSECTION_COMBOS = ((VERTICAL, DIAG_UP), (VERTICAL, DIAG_DOWN),
                       (HORIZONTAL, DIAG_UP), (HORIZONTAL, DIAG_DOWN),
                       (HORIZONTAL, VERTICAL))
BUILDER_COMBOS = INTERSECTION_COMBOS + ((DIAG_UP, DIAG_DOWN),)
FORK_WINDOW_DIRECTIONS = (HORIZONTAL, DIAG_UP, DIAG_DOWN)


@dataclass(frozen=True)
class AgentConfig:
    """Which strategy groups are loaded, with what weights, on what board."""

    spec: BoardSpec = STANDARD
    weights: StrategyWeights = StrategyWeights()
    win_threats: bool = True
    block_threats: bool = True
    fork_managers: bool = True
    intersection_forks: bool = True
    fork_builders: bool = True
    line_extension: bool = True
    center: bool = True
    include_rules: bool = True


_GROUP_FIELDS = ("win_threats", "block_threats", "fork_managers",
                 "intersection_forks", "fork_builders", "line_extension", "center")


def config_from_dict(data: dict, base: AgentConfig = AgentConfig()) -> AgentConfig:
    """Apply a flat {CONSTANT: int, group: bool} document to a config."""
    weight_names = {f.name.upper(): f.name for f in fields(StrategyWeights)}
    weights = base.weights
    cfg_kwargs = {}
    for key, value in data.items():
        if key in weight_names:
            if not isinstance(value, int) or isinstance(value, bool):
                raise ValueError(f"{key} must be an integer")
            weights = replace(weights, **{weight_names[key]: value})
        elif key in _GROUP_FIELDS or key == "include_rules":
            if not isinstance(value, bool):
                raise ValueError(f"{key} must be a boolean")
            cfg_kwargs[key] = value
        else:
            raise ValueError(f"unknown config key {key!r}")
    return replace(base, weights=weights, **cfg_kwargs)


def load_config(path, base: AgentConfig = AgentConfig()) -> AgentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_dict(json.load(fh), base)


def strategy_threads(config: AgentConfig) -> list[ScenarioThread]:
    spec, w = config.spec, config.weights
    threads: list[ScenarioThread] = []
    if config.win_threats:
        threads.extend(win_threat_thread(line, w, spec) for line in all_lines(spec))
    if config.block_threats:
        threads.extend(block_threat_thread(line, w, spec) for line in all_lines(spec))
    if config.fork_managers:
        threads.extend(red_fork_manager_thread(win, w, spec)
                       for win in all_windows(spec, spec.win_length + 1)
                       if win.direction in FORK_WINDOW_DIRECTIONS)
    if config.intersection_forks:
        threads.extend(red_intersection_fork_thread(a, b, w, spec)
                       for a, b in crossing_line_pairs(spec, INTERSECTION_COMBOS))
    if config.fork_builders:
        threads.extend(yellow_fork_builder_thread(a, b, w, spec)
                       for a, b in crossing_line_pairs(spec, BUILDER_COMBOS))
    if config.line_extension:
        threads.extend(line_extension_thread(line, w, spec) for line in all_lines(spec))
    if config.center:
        threads.append(center_column_thread(w, spec))
    return threads


_BASE_THREADS_CACHE: dict[AgentConfig, tuple[ScenarioThread, ...]] = {}


def build_agent_program(config: AgentConfig = AgentConfig(), *,
                        red_player: str = "user",
                        input_provider=None,
                        tie_break: Optional[TieBreak] = None,
                        extra_threads: Sequence[ScenarioThread] = ()) -> Program:
    """Assemble rules + strategies + players into one program.

    red_player is "user" (interactive/provider-driven), "adversarial"
    (verification mode), or "none". Thread construction is cached per
    config; only the interactive player is built fresh per game.
    """
    if not config.include_rules:
        raise ValueError("rule threads are mandatory; include_rules must be True")
    validate_weights(config.weights)
    base = _BASE_THREADS_CACHE.get(config)
    if base is None:
        base = tuple(core_rule_threads(config.spec)
                     + strategy_threads(config)
                     + [computer_player_thread(config.spec)])
        _BASE_THREADS_CACHE[config] = base
    threads = list(base)
    if red_player == "user":
        threads.append(user_player_thread(input_provider, config.spec))
    elif red_player == "adversarial":
        threads.append(adversarial_red_thread(config.spec))
    elif red_player != "none":
        raise ValueError(f"unknown red_player {red_player!r}")
    threads.extend(extra_threads)
    return Program(threads, tie_break)
