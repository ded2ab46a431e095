"""Scripted red policies and a desk-scale tournament harness.

The agent always plays yellow and moves first; a policy drives the
interactive red player's column choices. Minimax opponents with graded
depths stand in for external AIs.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from .engine import ThreadStepError, run
from .events import Trace, event_to_jsonl_line
from .connect4.agent import AgentConfig, build_agent_program
from .connect4.board import Board, BoardSpec, STANDARD, YELLOW, RED, all_lines, winner
from .connect4.events import placement_info

WIN_SCORE = 10**9


@dataclass
class Policy:
    """A red move chooser: board in, non-full column out."""

    name: str
    choose: Callable[[Board], int]
    deterministic: bool
    seed: Optional[int] = None
    reseed: Optional[Callable[[int], "Policy"]] = field(default=None, repr=False)


def random_policy(seed: int = 0) -> Policy:
    rng = random.Random(seed)

    def choose(board: Board) -> int:
        legal = board.legal_columns()
        if not legal:
            raise ValueError("no legal column on a full board")
        return rng.choice(legal)

    return Policy(name="random", choose=choose, deterministic=False, seed=seed,
                  reseed=random_policy)


def _center_order(spec: BoardSpec) -> list[int]:
    center = spec.center_col
    return sorted(range(spec.cols), key=lambda c: (abs(c - center), c))


def evaluate(board: Board) -> int:
    """Red-perspective heuristic: center-weighted discs plus window scoring
    (three-in-a-window with room dwarfs two-in-a-window; symmetric for
    yellow)."""
    spec = board.spec
    center = spec.center_col
    score = 0
    for r in range(spec.rows):
        row = board.grid[r]
        for c in range(spec.cols):
            v = row[c]
            if v == RED:
                score += center + 1 - abs(c - center)
            elif v == YELLOW:
                score -= center + 1 - abs(c - center)
    n = spec.win_length
    for line in all_lines(spec):
        reds = yellows = 0
        for rr, cc in line.cells:
            v = board.grid[rr][cc]
            if v == RED:
                reds += 1
            elif v == YELLOW:
                yellows += 1
        if yellows == 0:
            if reds == n - 1:
                score += 50
            elif reds == n - 2:
                score += 8
        elif reds == 0:
            if yellows == n - 1:
                score -= 50
            elif yellows == n - 2:
                score -= 8
    return score


def alphabeta(board: Board, depth: int, alpha: int, beta: int,
              red_to_move: bool) -> int:
    w = winner(board)
    if w == RED:
        return WIN_SCORE + depth  # prefer faster wins
    if w == YELLOW:
        return -WIN_SCORE - depth
    legal = board.legal_columns()
    if not legal:
        return 0
    if depth == 0:
        return evaluate(board)
    order = [c for c in _center_order(board.spec) if c in set(legal)]
    if red_to_move:
        best = -WIN_SCORE * 2
        for col in order:
            _r, child = board.drop(col, RED)
            best = max(best, alphabeta(child, depth - 1, alpha, beta, False))
            alpha = max(alpha, best)
            if alpha >= beta:
                break
        return best
    best = WIN_SCORE * 2
    for col in order:
        _r, child = board.drop(col, YELLOW)
        best = min(best, alphabeta(child, depth - 1, alpha, beta, True))
        beta = min(beta, best)
        if alpha >= beta:
            break
    return best


def minimax_policy(depth: int, seed: Optional[int] = None) -> Policy:
    """Depth-limited alpha-beta from red's perspective; ties lean toward the
    center, then (with a seed) break uniformly."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    rng = random.Random(seed) if seed is not None else None

    def choose(board: Board) -> int:
        legal = set(board.legal_columns())
        if not legal:
            raise ValueError("no legal column on a full board")
        order = [c for c in _center_order(board.spec) if c in legal]
        scored = []
        for col in order:
            _r, child = board.drop(col, RED)
            scored.append((alphabeta(child, depth - 1, -WIN_SCORE * 2, WIN_SCORE * 2,
                                     False), col))
        best = max(s for s, _c in scored)
        candidates = [c for s, c in scored if s == best]
        if rng is not None and len(candidates) > 1:
            return rng.choice(candidates)
        return candidates[0]

    name = f"minimax{depth}"
    return Policy(name=name, choose=choose, deterministic=seed is None, seed=seed,
                  reseed=(lambda s: minimax_policy(depth, s)) if seed is not None else None)


@dataclass
class GameRecord:
    policy: str
    seed: Optional[int]
    result: str  # "yellow_win" | "red_win" | "draw" | "aborted"
    move_count: int
    trace: Trace
    trace_path: Optional[str] = None
    error: Optional[str] = None

    def to_json_obj(self) -> dict:
        return {
            "policy": self.policy,
            "seed": self.seed,
            "result": self.result,
            "moveCount": self.move_count,
            "trace": self.trace_path,
            **({"error": self.error} if self.error else {}),
        }


@dataclass
class MatchReport:
    games: list[GameRecord]
    summary: dict[str, dict[str, int]]

    def to_json_obj(self) -> dict:
        return {
            "games": [g.to_json_obj() for g in self.games],
            "summary": self.summary,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=True) + "\n"

    def table(self) -> str:
        lines = [f"{'policy':<12} {'games':>5} {'W':>4} {'D':>4} {'L':>4}"]
        for name in sorted(self.summary):
            c = self.summary[name]
            total = c["w"] + c["d"] + c["l"]
            lines.append(f"{name:<12} {total:>5} {c['w']:>4} {c['d']:>4} {c['l']:>4}")
        return "\n".join(lines)


def play_match(agent_config: AgentConfig, policy: Policy,
               max_moves: Optional[int] = None) -> GameRecord:
    """One full game: agent as yellow moving first, policy driving red.

    Engine faults abort the match and are reported in the record, never
    silently scored.
    """
    spec = agent_config.spec
    if max_moves is None:
        max_moves = spec.cells
    board_holder = [Board(spec)]

    def provider() -> int:
        return policy.choose(board_holder[0])

    def on_event(event, _outcome):
        info = placement_info(event)
        if info:
            color, _row, col = info
            _r, board_holder[0] = board_holder[0].drop(col, color)

    program = build_agent_program(agent_config, red_player="user",
                                  input_provider=provider)
    # placements, one prompt per red move, and a terminal event
    budget = 2 * max_moves + 4
    try:
        result = run(program, budget, on_event=on_event)
    except ThreadStepError as exc:
        return GameRecord(policy.name, policy.seed, "aborted", 0, Trace(()),
                          error=str(exc))
    trace = result.trace
    last = trace[-1] if len(trace) else None
    moves = sum(1 for e in trace if placement_info(e) is not None)
    error = None
    if last is not None and last.name == "Win":
        outcome = "yellow_win" if last.get("color") == YELLOW else "red_win"
    elif last is not None and last.name == "Draw":
        outcome = "draw"
    elif result.stopped == "no_eligible":
        # every legal move soft-blocked: the agent resigns rather than move
        outcome = "red_win"
        error = "stalled: agent had no eligible move"
    else:
        outcome = "aborted"
        error = f"run stopped by {result.stopped} without a terminal event"
    return GameRecord(policy.name, policy.seed, outcome, moves, trace,
                      error=error)


def run_tournament(agent_config: AgentConfig, policies: list[Policy],
                   games_per_policy: int = 10,
                   results_dir: Optional[str] = None) -> MatchReport:
    """Deterministic policies play once; seeded ones play games_per_policy
    times with distinct derived seeds. Traces are stored when a results
    directory is given."""
    games: list[GameRecord] = []
    for policy in policies:
        if policy.deterministic:
            games.append(play_match(agent_config, policy))
        else:
            base = policy.seed or 0
            for i in range(games_per_policy):
                derived = base * 1009 + i
                seeded = policy.reseed(derived) if policy.reseed else policy
                games.append(play_match(agent_config, seeded))
    if results_dir is not None:
        out = Path(results_dir)
        out.mkdir(parents=True, exist_ok=True)
        for i, record in enumerate(games):
            name = f"{record.policy}_{record.seed if record.seed is not None else 'det'}_{i}.jsonl"
            path = out / name
            with open(path, "w", encoding="utf-8") as fh:
                for event in record.trace:
                    fh.write(event_to_jsonl_line(event))
            record.trace_path = str(path)
    summary: dict[str, dict[str, int]] = {}
    for record in games:
        counts = summary.setdefault(record.policy, {"w": 0, "d": 0, "l": 0})
        if record.result == "yellow_win":
            counts["w"] += 1
        elif record.result == "draw":
            counts["d"] += 1
        elif record.result == "red_win":
            counts["l"] += 1
    return MatchReport(games, summary)
