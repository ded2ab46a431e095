"""Independent reference implementations used to cross-check the engine.

These deliberately re-derive semantics from first principles (loops over
raw declarations, no reuse of engine internals) so that a bug in the
engine cannot hide in its own oracle.
"""

from __future__ import annotations

import random

from scenplay.events import Event
from scenplay.sync import MultiSync, SyncDeclaration, make_sync

INF = float("inf")


def naive_select(declarations, tie_break_events=None):
    """Literal three-rule selection: requested by someone; if blocked,
    requested strictly higher than blocked; maximal request priority.

    Returns the chosen event or None. Ties resolve to the least event
    (or via tie_break_events, a callable over the tied list).
    """
    mentioned = set()
    for _name, ms in declarations:
        for st in ms.statements:
            mentioned |= st.wait_for | st.request | st.soft_block | st.hard_block

    qualifying = {}
    for event in mentioned:
        requested = [st.request_priority
                     for _n, ms in declarations for st in ms.statements
                     if event in st.request]
        if not requested:
            continue
        block = None
        for _n, ms in declarations:
            for st in ms.statements:
                if event in st.hard_block:
                    block = INF if block is None else max(block, INF)
                if event in st.soft_block:
                    block = st.block_priority if block is None else max(block, st.block_priority)
        best_request = max(requested)
        if block is not None and not best_request > block:
            continue
        qualifying[event] = best_request

    if not qualifying:
        return None
    top = max(qualifying.values())
    tied = sorted(e for e, r in qualifying.items() if r == top)
    if tie_break_events is not None:
        return tie_break_events(tied)
    return tied[0]


def classical_select(declarations):
    """Classical semantics: any requested, unblocked event; least one wins.

    Only meaningful for declarations that use requests and hard blocks at
    priority zero.
    """
    requested = set()
    blocked = set()
    for _name, ms in declarations:
        for st in ms.statements:
            requested |= st.request
            blocked |= st.hard_block
    candidates = sorted(requested - blocked)
    return candidates[0] if candidates else None


EVENT_POOL = [Event(f"e{i}") for i in range(12)]


def random_declarations(rng: random.Random, max_threads=8, max_events=12,
                        priority_range=(-5, 5), max_statements=3,
                        classical=False):
    """A random synchronization point: per-thread multi-syncs over a small
    event universe."""
    pool = EVENT_POOL[:rng.randint(2, max_events)]
    declarations = []
    for t in range(rng.randint(1, max_threads)):
        statements = []
        for _s in range(rng.randint(1, max_statements)):
            request = frozenset(e for e in pool if rng.random() < 0.35)
            if classical:
                hard = frozenset(e for e in pool if rng.random() < 0.25)
                soft = frozenset()
                rp = bp = 0
            else:
                hard = frozenset(e for e in pool
                                 if rng.random() < 0.15 and e not in request)
                soft = frozenset(e for e in pool if rng.random() < 0.25)
                rp = rng.randint(*priority_range)
                bp = rng.randint(*priority_range)
            wait = frozenset(e for e in pool if rng.random() < 0.2)
            statements.append(make_sync(wait_for=wait, request=request,
                                        soft_block=soft,
                                        hard_block=hard - request,
                                        request_priority=rp, block_priority=bp))
        declarations.append((f"t{t}", MultiSync(statements)))
    return declarations
