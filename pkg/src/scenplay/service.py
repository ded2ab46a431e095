"""HTTP game service: play red against the agent over a small REST API.

Each session owns one engine running in its own thread; handlers talk to
it through a column mailbox and read consistent snapshots under the
session lock. Static web assets, when present, are served from the
configured directory.
"""

from __future__ import annotations

import json
import queue
import threading
import time
import uuid
from dataclasses import dataclass, field
from http import HTTPStatus
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional

from .engine import SeededRandom, run
from .events import Event, Trace
from .connect4 import agent as agent_mod
from .connect4 import board as board_mod
from .connect4.agent import AgentConfig, build_agent_program
from .connect4.board import Board, YELLOW
from .connect4.events import placement_info

SESSION_TTL_SECONDS = 3600


class SessionGone(Exception):
    pass


class ColumnFull(Exception):
    pass


class GameOver(Exception):
    pass


class BadColumn(Exception):
    pass


class NotYourTurn(Exception):
    pass


@dataclass
class GameSession:
    """One live game: engine thread, mailbox, and a queryable snapshot."""

    id: str
    config: AgentConfig
    tie_break: object = None
    created_at: float = field(default_factory=time.monotonic)
    updated_at: float = field(default_factory=time.monotonic)

    def __post_init__(self):
        self.lock = threading.Lock()
        self.mailbox: "queue.Queue[int]" = queue.Queue()
        self.turn_done = threading.Event()
        self.board = Board(self.config.spec)
        self.log: list[Event] = []
        self.status = "playing"
        self.pending_input = False
        self.last_agent_move: Optional[tuple[int, int]] = None
        self.explanation: Optional[str] = None
        self._thread = threading.Thread(target=self._run, daemon=True,
                                        name=f"game-{self.id}")
        self._thread.start()
        self.wait_turn()

    def _provider(self) -> int:
        with self.lock:
            self.pending_input = True
            self.turn_done.set()
        return self.mailbox.get()

    def _on_event(self, event: Event, outcome) -> None:
        with self.lock:
            self.log.append(event)
            info = placement_info(event)
            if info:
                color, _row, col = info
                _r, self.board = self.board.drop(col, color)
                if color == YELLOW:
                    self.last_agent_move = (_r, col)
                    self.explanation = outcome.explanation
            elif event.name == "Win":
                self.status = ("yellow_won" if event.get("color") == YELLOW
                               else "red_won")
            elif event.name == "Draw":
                self.status = "draw"

    def _run(self) -> None:
        program = build_agent_program(self.config, red_player="user",
                                      input_provider=self._provider,
                                      tie_break=self.tie_break)
        try:
            run(program, 2 * self.config.spec.cells + 8, on_event=self._on_event)
        finally:
            with self.lock:
                if self.status == "playing":
                    self.status = "stalled"
                self.pending_input = False
                self.turn_done.set()

    def wait_turn(self, timeout: float = 30.0) -> None:
        """Block until the engine awaits input or the game has ended."""
        if not self.turn_done.wait(timeout):
            raise TimeoutError("engine did not reach a stable point in time")
        self.turn_done.clear()

    def submit_column(self, col: int) -> None:
        with self.lock:
            if self.status != "playing":
                raise GameOver(self.status)
            if not isinstance(col, int) or isinstance(col, bool) or not (
                    0 <= col < self.config.spec.cols):
                raise BadColumn(col)
            if self.board.lowest_empty_row(col) is None:
                raise ColumnFull(col)
            if not self.pending_input:
                raise NotYourTurn()
            self.pending_input = False
            self.updated_at = time.monotonic()
        self.mailbox.put(col)
        self.wait_turn()

    def view(self) -> dict:
        with self.lock:
            body = board_mod.to_json_obj(self.board, self.status)
            view = {"gameId": self.id, "board": body, "pendingInput": self.pending_input}
            if self.last_agent_move is not None:
                view["lastAgentMove"] = {"row": self.last_agent_move[0],
                                         "col": self.last_agent_move[1]}
            if self.explanation is not None:
                view["explanation"] = self.explanation
            return view

    def trace(self) -> Trace:
        with self.lock:
            return Trace(list(self.log))


class SessionRegistry:
    """In-memory sessions with idle-TTL eviction and optional finished-game
    persistence as JSONL."""

    def __init__(self, config: AgentConfig = AgentConfig(),
                 ttl: float = SESSION_TTL_SECONDS,
                 persist_path: Optional[str] = None):
        self.config = config
        self.ttl = ttl
        self.persist_path = persist_path
        self._sessions: dict[str, GameSession] = {}
        self._lock = threading.Lock()

    def create(self, config: Optional[AgentConfig] = None,
               tie_break=None) -> GameSession:
        self.evict_idle()
        session = GameSession(id=uuid.uuid4().hex, config=config or self.config,
                              tie_break=tie_break)
        with self._lock:
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> GameSession:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise SessionGone(session_id)
        session.updated_at = time.monotonic()
        return session

    def delete(self, session_id: str) -> None:
        with self._lock:
            session = self._sessions.pop(session_id, None)
        if session is None:
            raise SessionGone(session_id)
        self._persist(session)

    def evict_idle(self) -> int:
        now = time.monotonic()
        evicted = 0
        with self._lock:
            for sid in [sid for sid, s in self._sessions.items()
                        if now - s.updated_at > self.ttl]:
                self._persist(self._sessions.pop(sid))
                evicted += 1
        return evicted

    def _persist(self, session: GameSession) -> None:
        if self.persist_path is None or session.status == "playing":
            return
        record = {"gameId": session.id, "status": session.status,
                  "events": [e.to_json_obj() for e in session.trace()]}
        with open(self.persist_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record, separators=(",", ":")) + "\n")


def make_handler(registry: SessionRegistry, static_dir: Optional[str] = None):
    static_root = Path(static_dir).resolve() if static_dir else None

    class Handler(BaseHTTPRequestHandler):
        server_version = "scenplay/0.1"

        def log_message(self, fmt, *args):  # quiet by default
            pass

        def _send_json(self, code: int, obj: dict) -> None:
            body = json.dumps(obj).encode("utf-8")
            self.send_response(code)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _read_json(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            if length == 0:
                return {}
            try:
                return json.loads(self.rfile.read(length))
            except json.JSONDecodeError:
                return {}

        def _game_id(self) -> Optional[str]:
            parts = [p for p in self.path.split("?")[0].split("/") if p]
            # /api/games/{id}[/moves]
            if len(parts) >= 3 and parts[0] == "api" and parts[1] == "games":
                return parts[2]
            return None

        def do_POST(self):
            path = self.path.split("?")[0].rstrip("/")
            if path == "/api/games":
                payload = self._read_json()
                config = registry.config
                tie_break = None
                try:
                    if isinstance(payload.get("config"), dict):
                        config = agent_mod.config_from_dict(payload["config"], config)
                    tb = payload.get("tieBreak")
                    if isinstance(tb, dict) and "seed" in tb:
                        tie_break = SeededRandom(int(tb["seed"]))
                except (ValueError, TypeError) as exc:
                    self._send_json(HTTPStatus.UNPROCESSABLE_ENTITY,
                                    {"error": str(exc)})
                    return
                session = registry.create(config, tie_break)
                self._send_json(HTTPStatus.CREATED, session.view())
                return
            game_id = self._game_id()
            if game_id and path.endswith("/moves"):
                try:
                    session = registry.get(game_id)
                except SessionGone:
                    self._send_json(HTTPStatus.NOT_FOUND, {"error": "no such game"})
                    return
                payload = self._read_json()
                col = payload.get("column")
                try:
                    session.submit_column(col)
                except BadColumn:
                    self._send_json(HTTPStatus.UNPROCESSABLE_ENTITY,
                                    {"error": "column must be an integer in range"})
                    return
                except ColumnFull:
                    self._send_json(HTTPStatus.CONFLICT, {"error": "column is full"})
                    return
                except NotYourTurn:
                    self._send_json(HTTPStatus.CONFLICT,
                                    {"error": "not awaiting a red move"})
                    return
                except GameOver:
                    self._send_json(HTTPStatus.GONE, {"error": "game is finished"})
                    return
                view = session.view()
                view["status"] = view["board"]["status"]
                if "lastAgentMove" in view:
                    view["agentMove"] = view["lastAgentMove"]
                self._send_json(HTTPStatus.OK, view)
                return
            self._send_json(HTTPStatus.NOT_FOUND, {"error": "unknown endpoint"})

        def do_GET(self):
            game_id = self._game_id()
            path = self.path.split("?")[0]
            if game_id:
                try:
                    session = registry.get(game_id)
                except SessionGone:
                    self._send_json(HTTPStatus.NOT_FOUND, {"error": "no such game"})
                    return
                self._send_json(HTTPStatus.OK, session.view())
                return
            if path == "/api/health":
                self._send_json(HTTPStatus.OK, {"ok": True})
                return
            self._serve_static(path)

        def do_DELETE(self):
            game_id = self._game_id()
            if not game_id:
                self._send_json(HTTPStatus.NOT_FOUND, {"error": "unknown endpoint"})
                return
            try:
                registry.delete(game_id)
            except SessionGone:
                self._send_json(HTTPStatus.NOT_FOUND, {"error": "no such game"})
                return
            self.send_response(HTTPStatus.NO_CONTENT)
            self.send_header("Content-Length", "0")
            self.end_headers()

        def _serve_static(self, path: str) -> None:
            if static_root is None:
                self._send_json(HTTPStatus.NOT_FOUND, {"error": "not found"})
                return
            rel = path.lstrip("/") or "index.html"
            target = (static_root / rel).resolve()
            if not str(target).startswith(str(static_root)) or not target.is_file():
                self._send_json(HTTPStatus.NOT_FOUND, {"error": "not found"})
                return
            content_types = {".html": "text/html", ".js": "text/javascript",
                             ".css": "text/css", ".json": "application/json",
                             ".map": "application/json", ".svg": "image/svg+xml"}
            body = target.read_bytes()
            self.send_response(HTTPStatus.OK)
            self.send_header("Content-Type",
                             content_types.get(target.suffix, "application/octet-stream"))
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

    return Handler


def serve(port: int = 8000, config: AgentConfig = AgentConfig(),
          static_dir: Optional[str] = None, persist_path: Optional[str] = None,
          host: str = "127.0.0.1") -> ThreadingHTTPServer:
    """Start the HTTP service; returns the server (caller runs serve_forever)."""
    registry = SessionRegistry(config, persist_path=persist_path)
    handler = make_handler(registry, static_dir)
    server = ThreadingHTTPServer((host, port), handler)
    server.registry = registry
    return server
