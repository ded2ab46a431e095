"""Connect4 board model: grid, winning lines, and oracle-side rule checks.

Row 0 is the bottom row. The board here is the test/tooling view of the
game; in play the authoritative state lives in the rule threads and this
module just folds traces and answers geometry questions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

EMPTY = "."
YELLOW = "Y"
RED = "R"

HORIZONTAL = "h"
VERTICAL = "v"
DIAG_UP = "du"  # row and col both increase
DIAG_DOWN = "dd"  # row decreases as col increases

_DIRECTION_STEPS = {
    HORIZONTAL: (0, 1),
    VERTICAL: (1, 0),
    DIAG_UP: (1, 1),
    DIAG_DOWN: (-1, 1),
}


@dataclass(frozen=True)
class BoardSpec:
    """Board geometry; defaults are the standard 7x6, connect 4."""

    rows: int = 6
    cols: int = 7
    win_length: int = 4

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("board must have positive dimensions")
        if self.win_length < 2 or self.win_length > max(self.rows, self.cols):
            raise ValueError("win_length does not fit the board")

    @property
    def cells(self) -> int:
        return self.rows * self.cols

    @property
    def center_col(self) -> int:
        return self.cols // 2


STANDARD = BoardSpec()


@dataclass(frozen=True)
class Line:
    """win_length contiguous collinear cells, ordered along the direction."""

    cells: tuple[tuple[int, int], ...]
    direction: str

    @property
    def key(self) -> str:
        r, c = self.cells[0]
        return f"{self.direction}_r{r}c{c}"


@lru_cache(maxsize=None)
def all_lines(spec: BoardSpec = STANDARD) -> tuple[Line, ...]:
    """Every distinct winning line on the board, in deterministic order."""
    lines = []
    n = spec.win_length
    for direction, (dr, dc) in _DIRECTION_STEPS.items():
        for r in range(spec.rows):
            for c in range(spec.cols):
                end_r, end_c = r + dr * (n - 1), c + dc * (n - 1)
                if 0 <= end_r < spec.rows and 0 <= end_c < spec.cols:
                    cells = tuple((r + dr * i, c + dc * i) for i in range(n))
                    lines.append(Line(cells, direction))
    return tuple(lines)


@lru_cache(maxsize=None)
def all_windows(spec: BoardSpec, length: int) -> tuple[Line, ...]:
    """Contiguous runs of `length` cells per direction (fork-watch windows)."""
    out = []
    for direction, (dr, dc) in _DIRECTION_STEPS.items():
        for r in range(spec.rows):
            for c in range(spec.cols):
                end_r, end_c = r + dr * (length - 1), c + dc * (length - 1)
                if 0 <= end_r < spec.rows and 0 <= end_c < spec.cols:
                    out.append(Line(tuple((r + dr * i, c + dc * i) for i in range(length)),
                                    direction))
    return tuple(out)


class Board:
    """Immutable grid; mutations return new boards."""

    __slots__ = ("spec", "grid")

    def __init__(self, spec: BoardSpec = STANDARD, grid: tuple[tuple[str, ...], ...] | None = None):
        self.spec = spec
        if grid is None:
            grid = tuple(tuple(EMPTY for _ in range(spec.cols)) for _ in range(spec.rows))
        self.grid = grid

    def cell(self, row: int, col: int) -> str:
        return self.grid[row][col]

    def lowest_empty_row(self, col: int) -> Optional[int]:
        """Least empty row in the column, or None when the column is full."""
        if not 0 <= col < self.spec.cols:
            raise ValueError(f"column {col} out of range 0..{self.spec.cols - 1}")
        for r in range(self.spec.rows):
            if self.grid[r][col] == EMPTY:
                return r
        return None

    def column_height(self, col: int) -> int:
        r = self.lowest_empty_row(col)
        return self.spec.rows if r is None else r

    def is_full(self) -> bool:
        return all(self.lowest_empty_row(c) is None for c in range(self.spec.cols))

    def with_cell(self, row: int, col: int, color: str) -> "Board":
        if self.grid[row][col] != EMPTY:
            raise ValueError(f"cell ({row},{col}) already occupied")
        new_row = tuple(color if c == col else v for c, v in enumerate(self.grid[row]))
        grid = tuple(new_row if r == row else old for r, old in enumerate(self.grid))
        return Board(self.spec, grid)

    def drop(self, col: int, color: str) -> tuple[int, "Board"]:
        row = self.lowest_empty_row(col)
        if row is None:
            raise ValueError(f"column {col} is full")
        return row, self.with_cell(row, col, color)

    def legal_columns(self) -> list[int]:
        return [c for c in range(self.spec.cols) if self.grid[self.spec.rows - 1][c] == EMPTY]

    def count(self, color: str) -> int:
        return sum(row.count(color) for row in self.grid)

    def to_move(self) -> str:
        return YELLOW if self.count(YELLOW) == self.count(RED) else RED

    def __eq__(self, other) -> bool:
        return isinstance(other, Board) and self.spec == other.spec and self.grid == other.grid

    def __hash__(self) -> int:
        return hash((self.spec, self.grid))

    def __repr__(self) -> str:
        return f"Board({render_ascii(self)!r})"


def winner(board: Board) -> Optional[str]:
    """Scan all lines; the color owning a complete line, else None.

    Raises if both colors own complete lines, which legal play never
    produces.
    """
    found = set()
    for line in all_lines(board.spec):
        first = board.cell(*line.cells[0])
        if first == EMPTY:
            continue
        if all(board.cell(r, c) == first for r, c in line.cells[1:]):
            found.add(first)
    if len(found) > 1:
        raise ValueError("both colors have complete lines; position is illegal")
    return found.pop() if found else None


def winning_lines(board: Board, color: str) -> list[Line]:
    return [line for line in all_lines(board.spec)
            if all(board.cell(r, c) == color for r, c in line.cells)]


def completions(board: Board, color: str, supported_only: bool = True) -> set[tuple[int, int]]:
    """Cells that would complete a line for `color` if played now."""
    out = set()
    for line in all_lines(board.spec):
        empties = [(r, c) for r, c in line.cells if board.cell(r, c) == EMPTY]
        if len(empties) != 1:
            continue
        if sum(1 for r, c in line.cells if board.cell(r, c) == color) != board.spec.win_length - 1:
            continue
        (r, c) = empties[0]
        if supported_only and board.column_height(c) != r:
            continue
        out.add((r, c))
    return out


def apply_placements(spec: BoardSpec, placements: Iterable[tuple[str, int, int]]) -> Board:
    """Fold (color, row, col) placements onto an empty board, checking gravity."""
    board = Board(spec)
    for color, row, col in placements:
        expected = board.lowest_empty_row(col)
        if expected != row:
            raise ValueError(f"gravity violation: {color} at ({row},{col}), "
                             f"lowest empty row is {expected}")
        board = board.with_cell(row, col, color)
    return board


def render_ascii(board: Board) -> str:
    """Top row first, one row per line, plus a column-index footer."""
    rows = ["".join(board.grid[r]) for r in range(board.spec.rows - 1, -1, -1)]
    footer = "".join(str(c % 10) for c in range(board.spec.cols))
    return "\n".join(rows + [footer])


def to_json_obj(board: Board, status: str = "playing") -> dict:
    return {
        "rows": ["".join(board.grid[r]) for r in range(board.spec.rows - 1, -1, -1)],
        "toMove": board.to_move(),
        "status": status,
    }


def from_json_obj(obj: dict, spec: BoardSpec = STANDARD) -> Board:
    rows = obj["rows"]
    if len(rows) != spec.rows or any(len(r) != spec.cols for r in rows):
        raise ValueError("board JSON does not match the expected geometry")
    grid = tuple(tuple(rows[spec.rows - 1 - r]) for r in range(spec.rows))
    return Board(spec, grid)


def status_string(board: Board) -> str:
    w = winner(board)
    if w == YELLOW:
        return "yellow_won"
    if w == RED:
        return "red_won"
    if board.is_full():
        return "draw"
    return "playing"
