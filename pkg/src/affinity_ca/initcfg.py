"""Initial configurations: random at an exact density, minority blocks, files."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import Grid, GridError

# mixed into the shuffle seed so placement never aliases the engine's streams
_INIT_TAG = 0x1C0F


@dataclass(frozen=True)
class BlockShape:
    kind: str = "square"
    anchor: tuple[int, int] = (0, 0)

    def __post_init__(self):
        if self.kind not in ("run", "square"):
            raise ValueError(f"block kind must be 'run' or 'square', got {self.kind!r}")


def random_density(width: int, height: int, rho: float, seed: int) -> Grid:
    """Exactly ``round(rho * width * height)`` ones at shuffled positions."""
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must lie in [0, 1], got {rho!r}")
    n = width * height
    ones = int(round(rho * n))
    gen = np.random.default_rng([_INIT_TAG, seed])
    flat = np.zeros(n, dtype=np.uint8)
    flat[gen.permutation(n)[:ones]] = 1
    return Grid.from_flat(width, height, flat)


def block_minority(
    width: int,
    height: int,
    minority_state: int,
    count: int,
    shape: BlockShape | None = None,
) -> Grid:
    """A background of ``1 - minority_state`` holding ``count`` minority cells.

    ``run`` lays the cells out row-major from the anchor (spilling onto the
    following rows); ``square`` places a sqrt(count)-sided block with its
    top-left corner at the anchor. Both wrap periodically.
    """
    shape = shape or BlockShape()
    if minority_state not in (0, 1):
        raise ValueError(f"minority_state must be 0 or 1, got {minority_state!r}")
    n = width * height
    if not 1 <= count <= n:
        raise ValueError(f"count must be in [1, {n}], got {count}")
    cells = np.full((height, width), 1 - minority_state, dtype=np.uint8)
    r0, c0 = shape.anchor
    if shape.kind == "run":
        start = (r0 % height) * width + (c0 % width)
        idx = (start + np.arange(count)) % n
        cells.reshape(-1)[idx] = minority_state
    else:
        side = math.isqrt(count)
        if side * side != count:
            raise ValueError(f"square block needs a perfect-square count, got {count}")
        if side > min(width, height):
            raise GridError(f"a {side}x{side} block does not fit a {width}x{height} grid")
        rows = (r0 + np.arange(side)) % height
        cols = (c0 + np.arange(side)) % width
        cells[np.ix_(rows, cols)] = minority_state
    return Grid(cells)


def load_grid(path) -> Grid:
    return Grid.load(path)


def save_grid(grid: Grid, path) -> None:
    grid.save(path)
