"""Explicit-state DFS verification of scenario programs.

Explores all adversarial branches of a program up to depth and state
bounds, proving a safety property or returning a counterexample trace.
Soundness of visited-set pruning assumes the unsafe predicate depends
only on the reached configuration and the last selected event; the trace
argument exists so predicates can fold game state without engine access.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Optional

from .events import Event, Trace
from .engine import Machine, Program
from .sync import INERT, make_sync
from .threads import DONE, ScenarioThread

MAX_PRIORITY_ELIGIBLE = "max_priority_eligible"
ALL_ELIGIBLE = "all_eligible"


def canonical_bytes(value: Any) -> bytes:
    """Deterministic byte encoding of a thread-state value.

    Supports None, bool, int, str, bytes, Event, tuple and frozenset
    (encoded sorted), which is the full state vocabulary threads may use.
    """
    if value is None:
        return b"N"
    if value is DONE:
        return b"D"
    if isinstance(value, bool):
        return b"T" if value else b"F"
    if isinstance(value, int):
        return b"i" + str(value).encode() + b";"
    if isinstance(value, str):
        raw = value.encode("utf-8")
        return b"s" + str(len(raw)).encode() + b":" + raw
    if isinstance(value, bytes):
        return b"b" + str(len(value)).encode() + b":" + value
    if isinstance(value, Event):
        return b"e(" + canonical_bytes(value.name) + canonical_bytes(value.payload) + b")"
    if isinstance(value, tuple):
        return b"(" + b"".join(canonical_bytes(v) for v in value) + b")"
    if isinstance(value, frozenset):
        return b"{" + b"".join(sorted(canonical_bytes(v) for v in value)) + b"}"
    raise TypeError(f"state value of type {type(value).__name__} is not serializable")


@dataclass(frozen=True)
class StateKey:
    """Fixed-width digest identifying a paused program configuration."""

    digest: bytes

    def hex(self) -> str:
        return self.digest.hex()


def snapshot(machine: Machine) -> StateKey:
    """Digest the (thread name, state, done) tuple of a paused program."""
    parts = []
    for thread, state in zip(machine.program.threads, machine.config_key()):
        parts.append(canonical_bytes(thread.name))
        parts.append(canonical_bytes(state))
    return StateKey(hashlib.blake2b(b"".join(parts), digest_size=16).digest())


@dataclass
class VerificationTask:
    """What to explore and what counts as unsafe.

    `program_factory` must build identical fresh programs on every call;
    `unsafe` is a predicate on (trace-so-far, last event), evaluated the
    moment each event is selected.
    """

    program_factory: Callable[[], Program]
    unsafe: Callable[[Trace, Event], bool]
    branching: str = MAX_PRIORITY_ELIGIBLE
    max_depth: int = 42
    max_states: int = 1_000_000
    visited_mode: str = "exact"  # "exact" | "digest" (digest risks collisions)
    # when the unsafe predicate is a pure function of the reached
    # configuration, dropping the last event from the visited key merges
    # more revisits; leave True for history-sensitive predicates
    history_sensitive: bool = True


@dataclass
class VerificationResult:
    verdict: str  # "Safe" | "Counterexample" | "BoundExceeded"
    counterexample: Optional[Trace]
    states_visited: int
    max_depth_reached: int
    elapsed_ms: float = 0.0

    def to_json_obj(self) -> dict:
        return {
            "verdict": self.verdict,
            "statesVisited": self.states_visited,
            "maxDepthReached": self.max_depth_reached,
            "elapsedMs": round(self.elapsed_ms, 3),
        }


SAFE = "Safe"
COUNTEREXAMPLE = "Counterexample"
BOUND_EXCEEDED = "BoundExceeded"


def _branch_events(machine: Machine, branching: str) -> list[Event]:
    eligible = machine.eligible_fast()
    if not eligible:
        return []
    if branching == ALL_ELIGIBLE:
        return sorted(e for e, _r in eligible)
    if branching == MAX_PRIORITY_ELIGIBLE:
        top = max(r for _e, r in eligible)
        return sorted(e for e, r in eligible if r == top)
    raise ValueError(f"unknown branching rule {branching!r}")


def explore(task: VerificationTask) -> VerificationResult:
    """DFS over the program's branch tree, pruning revisited configurations.

    Returns Counterexample with the offending trace on the first unsafe
    selection, Safe when the space is exhausted within bounds, and
    BoundExceeded when a depth or state bound cut the exploration.
    """
    t0 = time.monotonic()
    first = Machine(task.program_factory())
    again = Machine(task.program_factory())
    if first.config_key() != again.config_key():
        raise ValueError("program_factory is not deterministic: initial states differ")

    def visited_key(machine: Machine, last: Optional[Event]):
        if not task.history_sensitive:
            last = None
        if task.visited_mode == "digest":
            last_bytes = b"" if last is None else canonical_bytes(last)
            return snapshot(machine).digest + hashlib.blake2b(
                last_bytes, digest_size=8).digest()
        if last is None:
            return machine.config_key()
        return (machine.config_key(), last)

    visited = {visited_key(first, None)}
    # stack entries: (machine, depth, path) with path a cons list of events
    stack: list[tuple[Machine, int, tuple]] = [(first, 0, ())]
    truncated = False
    max_depth_reached = 0

    while stack:
        machine, depth, path = stack.pop()
        max_depth_reached = max(max_depth_reached, depth)
        branch = _branch_events(machine, task.branching)
        if depth >= task.max_depth:
            if branch:
                truncated = True
            continue
        for event in reversed(branch):
            trace_events = _path_events(path) + [event]
            if task.unsafe(Trace(trace_events), event):
                return VerificationResult(
                    COUNTEREXAMPLE, Trace(trace_events),
                    len(visited), max_depth_reached,
                    (time.monotonic() - t0) * 1000.0)
            if len(visited) >= task.max_states:
                truncated = True
                continue
            child = machine.fork()
            child.apply(event)
            key = visited_key(child, event)
            if key in visited:
                continue
            visited.add(key)
            stack.append((child, depth + 1, (path, event)))

    verdict = BOUND_EXCEEDED if truncated else SAFE
    return VerificationResult(verdict, None, len(visited), max_depth_reached,
                              (time.monotonic() - t0) * 1000.0)


def _path_events(path: tuple) -> list[Event]:
    out = []
    while path:
        path, event = path
        out.append(event)
    out.reverse()
    return out


def forced_prefix_thread(prefix: Iterable[Event], *, block: Iterable[Event],
                         priority: int, name: str = "forced_prefix") -> ScenarioThread:
    """Pin the first len(prefix) events of every trace, then go inert.

    While active it requests the next prefix event at `priority` and
    hard-blocks everything else in `block`; afterwards it declares
    nothing forever, so normal branching resumes.
    """
    prefix = tuple(prefix)
    if not prefix:
        raise ValueError("prefix must be nonempty")
    pool = frozenset(block)
    decls = []
    for event in prefix:
        others = pool - {event}
        decls.append(make_sync(request=event, hard_block=others,
                               request_priority=priority))

    def declare(i: int):
        if i >= len(prefix):
            return INERT
        return decls[i]

    def advance(i: int, event: Event):
        if i < len(prefix) and event == prefix[i]:
            return i + 1
        return i

    return ScenarioThread(name=name, start=0, declare=declare, advance=advance)
