import numpy as np
import pytest

from affinity_ca import Grid

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion."""

    def report(label: str, passed: bool, detail: str = "") -> bool:
        _ACCEPTANCE.append((label, bool(passed), detail))
        print(f"[{'PASS' if passed else 'FAIL'}] {label}  {detail}")
        return passed

    return report


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label}  {detail}")


def random_grid(rng: np.random.Generator, max_side: int = 16, min_side: int = 3) -> Grid:
    h, w = rng.integers(min_side, max_side + 1, size=2)
    return Grid(rng.integers(0, 2, size=(h, w), dtype=np.uint8))


def naive_opposite(grid: Grid, r: int, c: int) -> int:
    h, w = grid.height, grid.width
    me = int(grid.cells[r % h, c % w])
    total = 0
    for dr in (-1, 0, 1):
        for dc in (-1, 0, 1):
            if dr or dc:
                total += int(grid.cells[(r + dr) % h, (c + dc) % w]) != me
    return total
