"""Command-line interface: play, match, verify, replay, serve.

Global flags may also come from the environment with the SCENPLAY_ prefix
(SCENPLAY_CONFIG, SCENPLAY_SEED, SCENPLAY_LOG_LEVEL).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .engine import EventOrder, SeededRandom, run
from .events import Trace, TraceFormatError
from .verify import ALL_ELIGIBLE, MAX_PRIORITY_ELIGIBLE, VerificationTask, explore
from .connect4 import board as board_mod
from .connect4.agent import AgentConfig, build_agent_program, load_config
from .connect4.board import Board, BoardSpec, YELLOW
from .connect4.checks import (illegal_move_unsafe, red_wins, red_wins_or_draw,
                              verification_program_factory)
from .connect4.events import placement_info
from .opponents import minimax_policy, random_policy, run_tournament
from . import service as service_mod

log = logging.getLogger("scenplay")

PROPERTIES = {
    "no-illegal-move": ("unsafe when a move breaks gravity/turn/terminal rules",
                        illegal_move_unsafe),
    "red-never-wins": ("unsafe when red wins", lambda spec: red_wins),
    "yellow-always-wins": ("unsafe when red wins or the game draws",
                           lambda spec: red_wins_or_draw),
}


def _env_default(name: str, fallback=None):
    return os.environ.get(f"SCENPLAY_{name}", fallback)


def _parse_board(text: str) -> BoardSpec:
    try:
        rows, cols, win = (int(x) for x in text.lower().split("x"))
        return BoardSpec(rows=rows, cols=cols, win_length=win)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(
            f"board must look like 6x7x4, got {text!r}") from exc


def _agent_config(args) -> AgentConfig:
    spec = args.board if getattr(args, "board", None) else BoardSpec()
    config = AgentConfig(spec=spec)
    if args.config:
        config = load_config(args.config, config)
    return config


def _tie_break(args):
    if getattr(args, "tie_break", "event-order") == "seeded-random":
        return SeededRandom(args.seed or 0)
    return EventOrder()


def cmd_play(args) -> int:
    config = _agent_config(args)
    spec = config.spec
    board_holder = [Board(spec)]
    finished = []

    def provider():
        while True:
            try:
                raw = input(f"column 0-{spec.cols - 1} for red> ")
            except EOFError:
                print("\nno more input; leaving the game", file=sys.stderr)
                raise
            raw = raw.strip()
            if raw.lower() in ("q", "quit", "exit"):
                raise EOFError("player quit")
            try:
                return int(raw)
            except ValueError:
                print("please enter a column number")

    def on_event(event, outcome):
        info = placement_info(event)
        if info:
            color, _row, col = info
            _r, board_holder[0] = board_holder[0].drop(col, color)
            mover = "agent (Y)" if color == YELLOW else "you (R)"
            print(f"\n{mover} -> column {col}")
            print(board_mod.render_ascii(board_holder[0]))
            if color == YELLOW:
                print(f"  [{outcome.explanation}]")
        elif event.name == "Win":
            finished.append("Yellow wins" if event.get("color") == YELLOW
                            else "Red wins")
        elif event.name == "Draw":
            finished.append("Draw")

    program = build_agent_program(config, red_player="user",
                                  input_provider=provider,
                                  tie_break=_tie_break(args))
    print(board_mod.render_ascii(board_holder[0]))
    try:
        result = run(program, 2 * spec.cells + 8, on_event=on_event)
    except Exception as exc:  # EOF or interrupt propagated via thread error
        log.debug("play loop ended: %s", exc)
        return 1
    if finished:
        print(f"\n{finished[0]}")
        return 0
    if result.stopped == "no_eligible":
        print("\nthe agent has no eligible move left; game stalls")
    return 0


def cmd_match(args) -> int:
    config = _agent_config(args)
    if args.opponent == "random":
        policies = [random_policy(args.seed or 0)]
    elif args.opponent == "minimax":
        policies = [minimax_policy(args.depth)]
    elif args.opponent == "all":
        policies = [random_policy(args.seed or 0), minimax_policy(2),
                    minimax_policy(4)]
    else:  # argparse choices should prevent this
        print(f"unknown opponent {args.opponent!r}", file=sys.stderr)
        return 2
    results_dir = None
    if args.out:
        results_dir = str(Path(args.out).with_suffix("")) + "_traces"
    report = run_tournament(config, policies, games_per_policy=args.games,
                            results_dir=results_dir)
    text = report.to_json()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    print(report.table())
    faults = [g for g in report.games if g.result == "aborted"]
    for g in faults:
        print(f"FAULT: {g.policy} seed={g.seed}: {g.error}", file=sys.stderr)
    return 1 if faults else 0


def cmd_verify(args) -> int:
    config = _agent_config(args)
    spec = config.spec
    prefix = ()
    if args.prefix_file:
        try:
            prefix = tuple(Trace.load(args.prefix_file))
        except TraceFormatError as exc:
            print(f"bad prefix file: {exc}", file=sys.stderr)
            return 2
        except OSError as exc:
            print(f"cannot read prefix file: {exc}", file=sys.stderr)
            return 2
    unsafe = PROPERTIES[args.property][1](spec)
    branching = (ALL_ELIGIBLE if args.branching == "all"
                 else MAX_PRIORITY_ELIGIBLE)
    task = VerificationTask(
        program_factory=verification_program_factory(config, prefix),
        unsafe=unsafe,
        branching=branching,
        max_depth=args.max_depth,
        max_states=args.max_states,
    )
    result = explore(task)
    print(json.dumps(result.to_json_obj(), indent=2))
    if result.verdict == "Counterexample":
        out = args.out or "counterexample.jsonl"
        result.counterexample.save(out)
        print(f"counterexample written to {out}", file=sys.stderr)
        return 1
    return 0 if result.verdict == "Safe" else 2


def cmd_replay(args) -> int:
    config = _agent_config(args)
    try:
        trace = Trace.load(args.trace)
    except TraceFormatError as exc:
        print(f"bad trace file: {exc}", file=sys.stderr)
        return 2
    from .engine import replay as replay_fn
    program = build_agent_program(config, red_player="adversarial")
    outcome = replay_fn(program, trace)
    board = Board(config.spec)
    for event in trace:
        info = placement_info(event)
        if info:
            _r, board = board.drop(info[2], info[0])
    print(board_mod.render_ascii(board))
    if outcome.ok:
        print(f"trace of {len(trace)} events replays exactly")
        return 0
    print(f"divergence at step {outcome.divergence_index}", file=sys.stderr)
    return 1


def cmd_serve(args) -> int:
    config = _agent_config(args)
    server = service_mod.serve(port=args.port, config=config,
                               static_dir=args.static_dir,
                               persist_path=args.persist,
                               host=args.host)
    print(f"serving on http://{args.host}:{args.port} "
          f"(static: {args.static_dir or 'none'})")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        print("\nshutting down")
        server.shutdown()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scenplay",
        description="Scenario-thread Connect4: play, benchmark, verify.")
    parser.add_argument("--config", default=_env_default("CONFIG"),
                        help="strategy config file (flat JSON)")
    parser.add_argument("--seed", type=int,
                        default=(int(_env_default("SEED")) if _env_default("SEED") else None))
    parser.add_argument("--log-level", default=_env_default("LOG_LEVEL", "WARNING"))
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("play", help="play red against the agent in the terminal")
    p.add_argument("--tie-break", choices=("event-order", "seeded-random"),
                   default="event-order")
    p.add_argument("--board", type=_parse_board, default=None)
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("match", help="run games against scripted opponents")
    p.add_argument("--opponent", choices=("random", "minimax", "all"),
                   required=True)
    p.add_argument("--depth", type=int, default=4, help="minimax depth")
    p.add_argument("--games", type=int, default=10,
                   help="games per nondeterministic policy")
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--board", type=_parse_board, default=None)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("verify", help="explicit-state verification")
    p.add_argument("--property", choices=sorted(PROPERTIES), required=True)
    p.add_argument("--prefix-file", help="JSONL trace pinning the opening")
    p.add_argument("--branching", choices=("max-priority", "all"),
                   default="max-priority")
    p.add_argument("--max-depth", type=int, default=44)
    p.add_argument("--max-states", type=int, default=200_000)
    p.add_argument("--board", type=_parse_board, default=None)
    p.add_argument("--out", help="counterexample trace path")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("replay", help="step a stored trace through the engine")
    p.add_argument("trace", help="JSONL trace file")
    p.add_argument("--board", type=_parse_board, default=None)
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("serve", help="run the HTTP game service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--static-dir", default=None,
                   help="directory of web UI assets to serve")
    p.add_argument("--persist", default=None,
                   help="append finished games to this JSONL file")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING))
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
