"""Synchronous time evolution of the temporally stochastic CA.

At every step one coin (drawn from the rule-coin stream at index 0) picks
rule g with probability ``p`` and rule f otherwise; the chosen rule is then
applied to every cell from the current grid into a fresh buffer.
"""

from __future__ import annotations

import hashlib
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels
from .grid import Grid
from .rng import ROLE_CELL, ROLE_RULE_COIN, RngStream
from .rules import RULE_F, RULE_G, RuleParams

ALL_ZERO = "all_zero"
ALL_ONE = "all_one"
TIMEOUT = "timeout"
OUTCOMES = (ALL_ZERO, ALL_ONE, TIMEOUT)


@dataclass(frozen=True)
class EngineConfig:
    max_steps: int = 50_000
    record_density_trace: bool = False
    snapshot_every: int | None = None
    # keeps the rule trace and the trajectory digest
    record_trajectory: bool = False

    def __post_init__(self):
        if isinstance(self.max_steps, bool) or int(self.max_steps) != self.max_steps or self.max_steps < 1:
            raise ValueError(f"max_steps must be a positive integer, got {self.max_steps!r}")
        if self.snapshot_every is not None and (
            int(self.snapshot_every) != self.snapshot_every or self.snapshot_every < 1
        ):
            raise ValueError(
                f"snapshot_every must be a positive integer, got {self.snapshot_every!r}"
            )


@dataclass
class RunResult:
    outcome: str
    iterations: int
    final: Grid
    density_trace: list[float] | None = None
    rule_trace: list[str] | None = None
    digest: int | None = field(default=None, repr=False)

    @property
    def final_density(self) -> float:
        return self.final.density()


def choose_rule(rng: RngStream, step: int, p: float) -> str:
    """G with probability ``p``. Exactly one draw per step, whatever the result."""
    return RULE_G if rng.uniform(step, ROLE_RULE_COIN, 0) < p else RULE_F


def _bands(height: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, min(workers, height))
    edges = np.linspace(0, height, workers + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:])]


class Stepper:
    """Reusable step driver that owns the buffers and an optional thread pool.

    Splitting rows across workers cannot change the result: the kernels read
    only the source buffer and every random draw is addressed by cell index.
    """

    def __init__(self, params: RuleParams, rng: RngStream, workers: int = 1, kernel=None):
        self.params = params
        self.rng = rng
        self.workers = max(1, int(workers))
        self.kernel = kernel or kernels.step_band
        self._phi, self._psi = params.flip_tables()
        self._pool = ThreadPoolExecutor(self.workers) if self.workers > 1 else None

    def close(self):
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def advance(self, src: np.ndarray, dst: np.ndarray, t: int, rule: str | None = None) -> tuple[str, int]:
        """Write step ``t`` of ``src`` into ``dst``; return (rule used, ones in dst)."""
        if rule is None:
            rule = choose_rule(self.rng, t, self.params.p)
        elif rule not in (RULE_F, RULE_G):
            raise ValueError(f"rule must be 'F' or 'G', got {rule!r}")
        is_g = rule == RULE_G
        key = np.uint64(self.rng.key(t, ROLE_CELL)) if is_g else np.uint64(0)
        args = (self.params.K, self.params.mode_code, is_g, key, self._phi, self._psi)
        h = src.shape[0]
        if self._pool is None:
            ones = self.kernel(src, dst, 0, h, *args)
        else:
            futures = [
                self._pool.submit(self.kernel, src, dst, r0, r1, *args)
                for r0, r1 in _bands(h, self.workers)
            ]
            ones = sum(f.result() for f in futures)
        return rule, int(ones)


def step(
    grid: Grid,
    params: RuleParams,
    rng: RngStream,
    t: int,
    rule: str | None = None,
    workers: int = 1,
) -> Grid:
    """One synchronous update. ``rule`` forces F or G instead of tossing the coin."""
    if t < 0:
        raise ValueError(f"step index must be non-negative, got {t}")
    out = np.empty_like(grid.cells)
    with Stepper(params, rng, workers) as stepper:
        stepper.advance(grid.cells, out, t, rule)
    return Grid._adopt(out)


def _hash_step(h, t: int, rule: str, cells: np.ndarray) -> None:
    h.update(struct.pack("<Qc", t, rule.encode()))
    h.update(cells.tobytes())


def run(
    initial: Grid,
    params: RuleParams,
    cfg: EngineConfig | None = None,
    seed: int = 0,
    workers: int = 1,
    on_snapshot: Callable[[int, Grid], None] | None = None,
) -> RunResult:
    """Evolve ``initial`` until it is homogeneous or ``cfg.max_steps`` run out.

    ``iterations`` is the number of steps executed; an already homogeneous
    start returns at once with 0. The density trace, when kept, starts with
    the initial density, so it has ``iterations + 1`` entries.
    ``on_snapshot(t, grid)`` fires for t = 0 and then every
    ``cfg.snapshot_every`` steps (and on the final grid).
    """
    cfg = cfg or EngineConfig()
    rng = RngStream(seed)
    h, w = initial.height, initial.width
    n = h * w

    src = np.array(initial.cells, copy=True)
    dst = np.empty_like(src)
    ones = initial.count_ones()

    density_trace = [ones / n] if cfg.record_density_trace else None
    rule_trace: list[str] | None = [] if cfg.record_trajectory else None
    hasher = None
    if cfg.record_trajectory:
        hasher = hashlib.blake2b(digest_size=8)
        hasher.update(struct.pack("<QQ", w, h))
        hasher.update(src.tobytes())

    snap = cfg.snapshot_every if on_snapshot is not None else None
    if snap:
        on_snapshot(0, Grid._adopt(src.copy()))

    t = 0
    with Stepper(params, rng, workers) as stepper:
        while 0 < ones < n and t < cfg.max_steps:
            rule, ones = stepper.advance(src, dst, t)
            src, dst = dst, src
            t += 1
            if density_trace is not None:
                density_trace.append(ones / n)
            if rule_trace is not None:
                rule_trace.append(rule)
                _hash_step(hasher, t, rule, src)
            if snap and t % snap == 0:
                on_snapshot(t, Grid._adopt(src.copy()))

    if ones == 0:
        outcome = ALL_ZERO
    elif ones == n:
        outcome = ALL_ONE
    else:
        outcome = TIMEOUT
    final = Grid._adopt(src)
    if snap and t % snap != 0:
        on_snapshot(t, final)
    return RunResult(
        outcome=outcome,
        iterations=t,
        final=final,
        density_trace=density_trace,
        rule_trace=rule_trace,
        digest=int.from_bytes(hasher.digest(), "little") if hasher is not None else None,
    )


def trajectory_hash(result: RunResult) -> int:
    """64-bit order-sensitive digest over (step, rule, grid) of a recorded run."""
    if result.digest is None:
        raise ValueError("run was not recorded; pass EngineConfig(record_trajectory=True)")
    return result.digest
