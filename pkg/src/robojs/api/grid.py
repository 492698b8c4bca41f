"""The beginner grid: a 12 x 8 overlay of 0.3 m cells on the field.

Cell (0, 0) is the bottom-left cell; its center sits at (-1.65, -1.05).
Beginner and intermediate motion commands move between cell centers, so
novice programs can think in whole cells instead of meters.
"""

from __future__ import annotations

GRID_COLS = 12
GRID_ROWS = 8
CELL_SIZE = 0.3

_ORIGIN_X = -(GRID_COLS - 1) / 2.0 * CELL_SIZE  # center of cell (0, 0)
_ORIGIN_Y = -(GRID_ROWS - 1) / 2.0 * CELL_SIZE


def cell_center(col: int, row: int) -> tuple[float, float]:
    return (_ORIGIN_X + col * CELL_SIZE, _ORIGIN_Y + row * CELL_SIZE)


def nearest_cell(x: float, y: float) -> tuple[int, int]:
    col = round((x - _ORIGIN_X) / CELL_SIZE)
    row = round((y - _ORIGIN_Y) / CELL_SIZE)
    return clamp_cell(col, row)


def clamp_cell(col: int, row: int) -> tuple[int, int]:
    col = max(0, min(GRID_COLS - 1, int(col)))
    row = max(0, min(GRID_ROWS - 1, int(row)))
    return col, row
