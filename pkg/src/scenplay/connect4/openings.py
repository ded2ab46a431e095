"""Search for openings from which the agent provably always wins.

Candidate prefixes are harvested from games the agent actually plays: the
strongest are the moments where yellow has just created a double threat
(two immediately playable completions while red has none), since no red
reply can stop both. Each candidate is pinned with a forced-prefix thread
and handed to the explicit checker against an adversarial red; it
qualifies only when the checker proves no reachable branch ends in a red
win or a draw.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from ..events import Event, Trace
from ..verify import SAFE, VerificationResult, explore
from ..opponents import Policy, minimax_policy, play_match, random_policy
from .agent import AgentConfig
from .board import Board, RED, YELLOW, completions
from .checks import placements_only, prefix_proof_task
from .events import placement_info


@dataclass
class OpeningProof:
    prefix: tuple[Event, ...]
    result: VerificationResult

    @property
    def length(self) -> int:
        return len(self.prefix)


def candidate_policies(base_seed: int = 0) -> Iterator[Policy]:
    """An endless, deterministic stream of red opponents to harvest from."""
    yield minimax_policy(1)
    yield minimax_policy(2)
    seed = base_seed
    while True:
        yield random_policy(seed)
        seed += 1


def double_threat_prefixes(placements: Sequence[Event], spec,
                           min_length: int) -> Iterator[tuple[Event, ...]]:
    """Prefixes ending on a yellow move that leaves two or more playable
    yellow completions while red has no playable completion."""
    board = Board(spec)
    for i, event in enumerate(placements):
        color, _row, col = placement_info(event)
        _r, board = board.drop(col, color)
        count = i + 1
        if color != YELLOW or count < min_length:
            continue
        if len(completions(board, YELLOW)) >= 2 and not completions(board, RED):
            yield tuple(placements[:count])


def game_prefix_candidates(placements: Sequence[Event], spec,
                           min_length: int, trim: int = 3) -> Iterator[tuple[Event, ...]]:
    """All candidate prefixes from one winning game, strongest first."""
    yield from double_threat_prefixes(placements, spec, min_length)
    cut = len(placements) - trim
    if cut % 2 == 1:
        cut -= 1  # end on a red move so yellow is to play
    if cut >= min_length:
        yield tuple(placements[:cut])


def search_winning_prefixes(config: AgentConfig = AgentConfig(), *,
                            min_length: int = 8, want: int = 2,
                            max_candidates: int = 60,
                            max_states: int = 30_000,
                            base_seed: int = 0) -> list[OpeningProof]:
    """Find `want` distinct prefixes of length >= min_length from which the
    checker proves yellow always wins."""
    proofs: list[OpeningProof] = []
    seen: set[tuple[Event, ...]] = set()
    policies = candidate_policies(base_seed)
    tried = 0
    while len(proofs) < want and tried < max_candidates:
        policy = next(policies)
        record = play_match(config, policy)
        tried += 1
        if record.result != "yellow_win":
            continue
        placements = placements_only(record.trace)
        for prefix in game_prefix_candidates(placements, config.spec, min_length):
            if tried >= max_candidates or len(proofs) >= want:
                break
            if prefix in seen:
                continue
            seen.add(prefix)
            tried += 1
            result = explore(prefix_proof_task(config, prefix,
                                               max_states=max_states))
            if result.verdict == SAFE:
                proofs.append(OpeningProof(prefix, result))
                break  # at most one proof per harvested game, for variety
    return proofs


def save_prefix(prefix: Sequence[Event], path) -> None:
    Trace(prefix).save(path)


def load_prefix(path) -> tuple[Event, ...]:
    return tuple(Trace.load(path))
