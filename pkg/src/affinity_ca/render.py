"""Plain-text PGM (P2) snapshots: state 0 is white, state 1 black."""

from pathlib import Path

from .grid import Grid

_SHADE = {0: "255", 1: "0"}


def to_pgm(grid: Grid) -> str:
    lines = ["P2", f"{grid.width} {grid.height}", "255"]
    lines.extend(" ".join(_SHADE[v] for v in row) for row in grid.cells.tolist())
    return "\n".join(lines) + "\n"


def write_pgm(grid: Grid, path) -> None:
    Path(path).write_text(to_pgm(grid), encoding="ascii", newline="\n")
