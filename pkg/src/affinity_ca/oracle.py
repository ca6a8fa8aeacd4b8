"""Slow, transparent reference implementations.

Nothing here calls into :mod:`affinity_ca.rules` or the kernels: neighbor
sums are enumerated coordinate by coordinate, the probability functions are
re-derived from their closed forms, and the per-cell variates come from the
pure-Python integer hash. Agreement with the engine therefore means two
independent derivations agree.
"""

from __future__ import annotations

import math

import numpy as np

from .grid import Grid
from .rng import ROLE_CELL, ROLE_RULE_COIN, RngStream, stream_key, uniform_from_key
from .rules import RuleParams


def _prob(pf, x: int) -> float:
    K = pf.K
    fam = pf.family
    if fam == "zero":
        return 0.0
    if fam == "table":
        return pf.table[x]
    if fam == "logarithmic":
        return 0.0 if x <= 1 else math.log(x) / math.log(K)
    if fam == "exponential":
        return 0.0 if x == 0 else math.exp(x - K)
    if fam == "linear":
        return 0.0 if K == 0 else x / K
    raise ValueError(f"unknown family {fam!r}")


def _neighbors(cells, r: int, c: int) -> list[int]:
    h, w = len(cells), len(cells[0])
    return [
        cells[(r + dr) % h][(c + dc) % w]
        for dr in (-1, 0, 1)
        for dc in (-1, 0, 1)
        if not (dr == 0 and dc == 0)
    ]


def naive_step(
    grid: Grid,
    params: RuleParams,
    rng: RngStream,
    t: int,
    rule: str | None = None,
) -> Grid:
    cells = grid.cells.tolist()
    h, w = grid.height, grid.width
    K = params.K
    if rule is None:
        coin = uniform_from_key(stream_key(rng.seed, t, ROLE_RULE_COIN), 0)
        rule = "G" if coin < params.p else "F"
    key = stream_key(rng.seed, t, ROLE_CELL)

    out = [[0] * w for _ in range(h)]
    for r in range(h):
        for c in range(w):
            s = cells[r][c]
            nb = _neighbors(cells, r, c)
            zeros = nb.count(0)
            ones = nb.count(1)
            if rule == "F":
                out[r][c] = _f_next(s, zeros, ones, K, params.threshold_mode)
            else:
                u = uniform_from_key(key, r * w + c)
                hold = params.beyond_k == "hold"
                if s == 1 and zeros <= K:
                    out[r][c] = 0 if u < _prob(params.phi, zeros) else 1
                elif s == 1 and hold:
                    out[r][c] = 0 if u < _prob(params.phi, K) else 1
                elif s == 0 and ones <= K:
                    out[r][c] = 1 if u < _prob(params.psi, ones) else 0
                elif s == 0 and hold:
                    out[r][c] = 1 if u < _prob(params.psi, K) else 0
                elif params.beyond_k == "follow_f":
                    out[r][c] = _f_next(s, zeros, ones, K, params.threshold_mode)
                else:
                    out[r][c] = s
    return Grid(out)


def _f_next(s: int, zeros: int, ones: int, K: int, mode: str) -> int:
    if s == 1:
        return 0 if zeros > K else 1
    if mode == "more_than":
        return 1 if ones > 8 - K else 0
    if mode == "exact":
        return 1 if ones == 8 - K else 0
    return 1 if ones >= 8 - K else 0


def flip_probability_map(grid: Grid, params: RuleParams) -> np.ndarray:
    """Exact chance that each cell changes during one G-step."""
    cells = grid.cells.tolist()
    h, w = grid.height, grid.width
    K = params.K
    out = np.zeros((h, w), dtype=np.float64)
    for r in range(h):
        for c in range(w):
            nb = _neighbors(cells, r, c)
            pf = params.phi if cells[r][c] == 1 else params.psi
            x = nb.count(1 - cells[r][c])
            if x <= K:
                out[r, c] = _prob(pf, x)
            elif params.beyond_k == "hold":
                out[r, c] = _prob(pf, K)
            elif params.beyond_k == "follow_f":
                s = cells[r][c]
                out[r, c] = float(_f_next(s, nb.count(0), nb.count(1), K, params.threshold_mode) != s)
    return out


def monte_carlo_flip_check(grid: Grid, params: RuleParams, trials: int, seed: int) -> np.ndarray:
    """Empirical per-cell flip frequency over ``trials`` independent G-steps.

    Trial ``i`` uses step counter ``i`` of the stream seeded with ``seed``,
    so trials draw disjoint variates. Uses the engine's step for speed;
    the comparison target is :func:`flip_probability_map`.
    """
    from .engine import Stepper

    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    src = grid.cells
    dst = np.empty_like(src)
    flips = np.zeros(src.shape, dtype=np.int64)
    with Stepper(params, RngStream(seed)) as stepper:
        for i in range(trials):
            stepper.advance(src, dst, i, rule="G")
            flips += dst != src
    return flips / trials
