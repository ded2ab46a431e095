import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from scenplay import Event, Program, ScenarioThread, make_sync
from scenplay.sync import MultiSync

HOT = Event("Hot")
COLD = Event("Cold")


def requester_thread(name: str, event: Event) -> ScenarioThread:
    ms = MultiSync([make_sync(request=event)])
    return ScenarioThread(name, 0, lambda s: ms, lambda s, e: 0)


def stabilize_thread() -> ScenarioThread:
    block_cold = MultiSync([make_sync(wait_for=HOT, hard_block=COLD)])
    block_hot = MultiSync([make_sync(wait_for=COLD, hard_block=HOT)])
    return ScenarioThread(
        "stabilize", "want_hot",
        lambda s: block_cold if s == "want_hot" else block_hot,
        lambda s, e: "want_cold" if s == "want_hot" else "want_hot")


def hot_cold_program() -> Program:
    return Program([requester_thread("add_hot", HOT),
                    requester_thread("add_cold", COLD),
                    stabilize_thread()])


@pytest.fixture
def hotcold() -> Program:
    return hot_cold_program()
