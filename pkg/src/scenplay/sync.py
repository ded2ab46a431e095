"""Synchronization declarations: what a thread wants at one sync point.

A declaration names the events a thread waits for, requests (at one
request priority), soft-blocks (at one block priority), and hard-blocks.
A multi-sync bundles several declarations into a single yield point so a
thread can assign different priorities to different events.
"""

from __future__ import annotations

from typing import Iterable, Union

from .events import Event

_PRIORITY_BOUND = 2**63

_EMPTY = frozenset()


class SyncDeclaration:
    __slots__ = ("wait_for", "request", "soft_block", "hard_block",
                 "request_priority", "block_priority")

    def __init__(self, wait_for=_EMPTY, request=_EMPTY, soft_block=_EMPTY,
                 hard_block=_EMPTY, request_priority=0, block_priority=0):
        self.wait_for = frozenset(wait_for)
        self.request = frozenset(request)
        self.soft_block = frozenset(soft_block)
        self.hard_block = frozenset(hard_block)
        self.request_priority = request_priority
        self.block_priority = block_priority

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SyncDeclaration)
            and self.wait_for == other.wait_for
            and self.request == other.request
            and self.soft_block == other.soft_block
            and self.hard_block == other.hard_block
            and self.request_priority == other.request_priority
            and self.block_priority == other.block_priority
        )

    def __hash__(self) -> int:
        return hash((self.wait_for, self.request, self.soft_block, self.hard_block,
                     self.request_priority, self.block_priority))

    def __repr__(self) -> str:
        parts = []
        for label, value in (("wait_for", self.wait_for), ("request", self.request),
                             ("soft_block", self.soft_block), ("hard_block", self.hard_block)):
            if value:
                parts.append(f"{label}={{{', '.join(map(repr, sorted(value)))}}}")
        if self.request:
            parts.append(f"request_priority={self.request_priority}")
        if self.soft_block:
            parts.append(f"block_priority={self.block_priority}")
        return f"sync({', '.join(parts)})"


def _as_events(value) -> Iterable[Event]:
    if value is None:
        return ()
    if isinstance(value, Event):
        return (value,)
    return value


def make_sync(wait_for=None, request=None, soft_block=None, hard_block=None,
              request_priority: int = 0, block_priority: int = 0,
              block=None) -> SyncDeclaration:
    """Build a validated declaration; all arguments optional.

    A single Event is accepted anywhere an event set is expected. The
    legacy `block` argument is an alias for `hard_block`.
    """
    for p in (request_priority, block_priority):
        if not isinstance(p, int) or isinstance(p, bool) or abs(p) >= _PRIORITY_BOUND:
            raise ValueError(f"priority must be a 64-bit signed integer, got {p!r}")
    hard = frozenset(_as_events(hard_block)) | frozenset(_as_events(block))
    decl = SyncDeclaration(
        wait_for=frozenset(_as_events(wait_for)),
        request=frozenset(_as_events(request)),
        soft_block=frozenset(_as_events(soft_block)),
        hard_block=hard,
        request_priority=request_priority,
        block_priority=block_priority,
    )
    clash = decl.request & decl.hard_block
    if clash:
        raise ValueError(f"statement requests events it hard-blocks: {sorted(clash)}")
    return decl


class MultiSync:
    """A nonempty ordered bundle of declarations at one yield point.

    A single-statement multi-sync is semantically a plain sync statement.
    """

    __slots__ = ("statements", "trigger", "has_requests_or_blocks")

    def __init__(self, statements: Iterable[SyncDeclaration]):
        stmts = tuple(statements)
        if not stmts:
            raise ValueError("multi-sync needs at least one statement")
        for s in stmts:
            if not isinstance(s, SyncDeclaration):
                raise TypeError(f"expected SyncDeclaration, got {type(s).__name__}")
        self.statements = stmts
        trigger = frozenset()
        has_rb = False
        for s in stmts:
            trigger |= s.wait_for | s.request
            if s.request or s.soft_block or s.hard_block:
                has_rb = True
        self.trigger = trigger
        self.has_requests_or_blocks = has_rb

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiSync) and self.statements == other.statements

    def __hash__(self) -> int:
        return hash(self.statements)

    def __repr__(self) -> str:
        return f"MultiSync({list(self.statements)!r})"


SyncLike = Union[SyncDeclaration, MultiSync]

# the declaration of a thread that currently wants nothing
INERT = MultiSync([SyncDeclaration()])


def as_multisync(value: SyncLike) -> MultiSync:
    if isinstance(value, MultiSync):
        return value
    if isinstance(value, SyncDeclaration):
        return MultiSync([value])
    raise TypeError(f"expected SyncDeclaration or MultiSync, got {type(value).__name__}")


def resumes(multisync: SyncLike, event: Event) -> bool:
    """True iff the selected event wakes a thread paused at this yield point."""
    return event in as_multisync(multisync).trigger
