"""Binary toroidal lattice.

Cells live in a ``(height, width)`` uint8 array, row-major, so the flat
index of ``(row, col)`` is ``row * width + col``. Grids are treated as
immutable values; the engine produces new ones rather than editing in place.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

MIN_SIDE = 3

# Moore neighborhood offsets (drow, dcol), centre excluded
MOORE_OFFSETS = tuple(
    (dr, dc) for dr in (-1, 0, 1) for dc in (-1, 0, 1) if (dr, dc) != (0, 0)
)


class GridError(ValueError):
    """Raised for grids that violate the lattice invariants."""


class GridParseError(GridError):
    """Malformed grid text. Carries the 1-based line and column of the fault."""

    def __init__(self, message: str, line: int, column: int | None = None):
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.column = column


class Grid:
    __slots__ = ("_cells",)

    def __init__(self, cells):
        arr = np.array(cells, dtype=np.uint8, copy=True)
        if arr.ndim != 2:
            raise GridError(f"cells must be 2-D (height, width), got shape {arr.shape}")
        height, width = arr.shape
        if width < MIN_SIDE or height < MIN_SIDE:
            raise GridError(
                f"grid must be at least {MIN_SIDE}x{MIN_SIDE}, got {width}x{height}"
            )
        if arr.size and arr.max() > 1:
            raise GridError("cell states must be 0 or 1")
        arr.flags.writeable = False
        self._cells = arr

    @classmethod
    def filled(cls, width: int, height: int, state: int = 0) -> "Grid":
        if state not in (0, 1):
            raise GridError(f"state must be 0 or 1, got {state}")
        return cls(np.full((height, width), state, dtype=np.uint8))

    @classmethod
    def from_flat(cls, width: int, height: int, cells) -> "Grid":
        flat = np.asarray(cells, dtype=np.uint8)
        if flat.size != width * height:
            raise GridError(f"expected {width * height} cells, got {flat.size}")
        return cls(flat.reshape(height, width))

    @classmethod
    def _adopt(cls, arr: np.ndarray) -> "Grid":
        # trusted constructor for engine output: no copy, no validation
        g = object.__new__(cls)
        arr.flags.writeable = False
        g._cells = arr
        return g

    @property
    def cells(self) -> np.ndarray:
        """Read-only ``(height, width)`` uint8 view."""
        return self._cells

    @property
    def width(self) -> int:
        return self._cells.shape[1]

    @property
    def height(self) -> int:
        return self._cells.shape[0]

    @property
    def size(self) -> int:
        return self._cells.size

    def flat(self) -> np.ndarray:
        return self._cells.reshape(-1)

    def get(self, row: int, col: int) -> int:
        """State at ``(row, col)`` with both coordinates wrapped periodically."""
        # Python's % is already the non-negative modulus
        return int(self._cells[row % self.height, col % self.width])

    def opposite_neighbor_count(self, row: int, col: int) -> int:
        """Number of Moore neighbors whose state differs from the cell's own."""
        h, w = self._cells.shape
        r, c = row % h, col % w
        rows = ((r - 1) % h, r, (r + 1) % h)
        cols = ((c - 1) % w, c, (c + 1) % w)
        block = self._cells[np.ix_(rows, cols)]
        ones = int(block.sum()) - int(self._cells[r, c])
        return 8 - ones if self._cells[r, c] else ones

    def opposite_counts(self) -> np.ndarray:
        """Opposite-neighbor counts for every cell at once."""
        c = self._cells.astype(np.int8)
        horiz = c + np.roll(c, 1, axis=1) + np.roll(c, -1, axis=1)
        ones = horiz + np.roll(horiz, 1, axis=0) + np.roll(horiz, -1, axis=0) - c
        return np.where(c == 1, 8 - ones, ones).astype(np.int8)

    def count_ones(self) -> int:
        return int(np.count_nonzero(self._cells))

    def density(self) -> float:
        return self.count_ones() / self.size

    def homogeneous_state(self) -> int | None:
        ones = self.count_ones()
        if ones == 0:
            return 0
        if ones == self.size:
            return 1
        return None

    def flipped(self) -> "Grid":
        return Grid._adopt(1 - self._cells)

    # -- text format -------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"{self.width} {self.height}"]
        lines.extend("".join("1" if v else "0" for v in row) for row in self._cells)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Grid":
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        if not lines:
            raise GridParseError("empty file, expected '<width> <height>' header", 1)
        header = lines[0].split(" ")
        if len(header) != 2 or not all(tok.isdigit() for tok in header):
            raise GridParseError(f"bad header {lines[0]!r}, expected '<width> <height>'", 1)
        width, height = int(header[0]), int(header[1])
        if width < MIN_SIDE or height < MIN_SIDE:
            raise GridError(
                f"grid must be at least {MIN_SIDE}x{MIN_SIDE}, got {width}x{height}"
            )
        body = lines[1:]
        if len(body) != height:
            # point at the first missing row, or the first surplus one
            lineno = len(lines) + 1 if len(body) < height else height + 2
            raise GridParseError(f"expected {height} rows, found {len(body)}", lineno)
        cells = np.empty((height, width), dtype=np.uint8)
        for r, row in enumerate(body):
            lineno = r + 2
            if len(row) != width:
                raise GridParseError(f"expected {width} characters, found {len(row)}", lineno)
            for c, ch in enumerate(row):
                if ch not in "01":
                    raise GridParseError(f"invalid character {ch!r}", lineno, c + 1)
            cells[r] = np.frombuffer(row.encode("ascii"), dtype=np.uint8) - ord("0")
        return cls(cells)

    def save(self, path) -> None:
        Path(path).write_text(self.to_text(), encoding="ascii", newline="\n")

    @classmethod
    def load(cls, path) -> "Grid":
        with open(path, encoding="ascii", newline="") as fh:
            return cls.from_text(fh.read())

    # -- value semantics ---------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Grid):
            return NotImplemented
        return self._cells.shape == other._cells.shape and bool(
            np.array_equal(self._cells, other._cells)
        )

    def __hash__(self):
        return hash((self._cells.shape, self._cells.tobytes()))

    def __repr__(self):
        return f"Grid({self.width}x{self.height}, density={self.density():.6f})"
