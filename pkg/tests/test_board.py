import pytest

from scenplay.connect4.board import (Board, BoardSpec, DIAG_DOWN, DIAG_UP,
                                     HORIZONTAL, STANDARD, VERTICAL, YELLOW,
                                     RED, all_lines, all_windows,
                                     apply_placements, completions,
                                     from_json_obj, render_ascii, status_string,
                                     to_json_obj, winner)


def brute_force_lines(spec):
    """Independent enumeration: every 4-subset of collinear contiguous cells."""
    found = set()
    steps = [(0, 1), (1, 0), (1, 1), (-1, 1)]
    for r in range(spec.rows):
        for c in range(spec.cols):
            for dr, dc in steps:
                cells = [(r + dr * i, c + dc * i) for i in range(spec.win_length)]
                if all(0 <= rr < spec.rows and 0 <= cc < spec.cols for rr, cc in cells):
                    found.add(tuple(cells))
    return found


class TestLines:
    def test_count_is_69(self):
        lines = all_lines(STANDARD)
        assert len(lines) == 69
        by_dir = {}
        for line in lines:
            by_dir[line.direction] = by_dir.get(line.direction, 0) + 1
        assert by_dir[HORIZONTAL] == 24
        assert by_dir[VERTICAL] == 21
        assert by_dir[DIAG_UP] + by_dir[DIAG_DOWN] == 24

    def test_matches_brute_force(self):
        ours = {line.cells for line in all_lines(STANDARD)}
        assert ours == brute_force_lines(STANDARD)

    def test_contains_bottom_left_horizontal(self):
        assert any(line.cells == ((0, 0), (0, 1), (0, 2), (0, 3))
                   for line in all_lines(STANDARD))

    def test_no_line_exits_board(self):
        for line in all_lines(STANDARD):
            for r, c in line.cells:
                assert 0 <= r <= 5 and 0 <= c <= 6

    def test_windows_of_five(self):
        wins = all_windows(STANDARD, 5)
        horizontal = [w for w in wins if w.direction == HORIZONTAL]
        assert len(horizontal) == 6 * 3


class TestBoard:
    def test_lowest_empty_row(self):
        board = Board()
        assert board.lowest_empty_row(3) == 0
        _r, board = board.drop(3, YELLOW)
        assert board.lowest_empty_row(3) == 1

    def test_full_column(self):
        board = Board()
        for _ in range(6):
            _r, board = board.drop(0, YELLOW)
        assert board.lowest_empty_row(0) is None
        with pytest.raises(ValueError):
            board.drop(0, RED)

    def test_column_out_of_range(self):
        with pytest.raises(ValueError):
            Board().lowest_empty_row(7)

    def test_apply_placements_checks_gravity(self):
        with pytest.raises(ValueError):
            apply_placements(STANDARD, [(YELLOW, 1, 3)])

    def test_winner_empty(self):
        assert winner(Board()) is None

    def test_winner_bottom_row(self):
        board = apply_placements(STANDARD, [(YELLOW, 0, c) for c in range(4)])
        assert winner(board) == YELLOW

    def test_winner_rejects_double_win(self):
        grid_rows = [
            "YYYY...",
            "RRRR...",
        ] + ["......."] * 4
        grid = tuple(tuple(row) for row in grid_rows)
        with pytest.raises(ValueError):
            winner(Board(STANDARD, grid))

    def test_completions(self):
        board = apply_placements(STANDARD, [(YELLOW, 0, 0), (YELLOW, 0, 1),
                                            (YELLOW, 0, 2)])
        assert (0, 3) in completions(board, YELLOW)
        assert completions(board, RED) == set()

    def test_render_ascii_footer(self):
        text = render_ascii(Board())
        lines = text.splitlines()
        assert len(lines) == 7
        assert lines[-1] == "0123456"
        assert all(line == "." * 7 for line in lines[:-1])

    def test_json_roundtrip(self):
        board = apply_placements(STANDARD, [(YELLOW, 0, 3), (RED, 0, 0)])
        obj = to_json_obj(board)
        assert obj["rows"][-1] == "R..Y..."  # bottom row listed last (top first)
        assert obj["toMove"] == YELLOW
        assert obj["status"] == "playing"
        assert from_json_obj(obj) == board

    def test_status_string(self):
        assert status_string(Board()) == "playing"
        board = apply_placements(STANDARD, [(YELLOW, 0, c) for c in range(4)])
        assert status_string(board) == "yellow_won"


class TestSpecVariants:
    def test_small_board_lines(self):
        mini = BoardSpec(rows=4, cols=4, win_length=3)
        lines = all_lines(mini)
        assert {line.cells for line in lines} == brute_force_lines(mini)

    def test_bad_spec_rejected(self):
        with pytest.raises(ValueError):
            BoardSpec(rows=0, cols=7, win_length=4)
        with pytest.raises(ValueError):
            BoardSpec(rows=4, cols=4, win_length=9)
