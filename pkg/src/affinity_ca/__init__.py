"""Temporally stochastic 2-D cellular automaton with affinity to a fixed point."""

from ._accel import BACKEND
from .engine import EngineConfig, RunResult, choose_rule, run, step, trajectory_hash
from .grid import Grid, GridError, GridParseError
from .initcfg import BlockShape, block_minority, load_grid, random_density, save_grid
from .rng import RngStream
from .rules import (
    ProbabilityFunction,
    RuleParams,
    eval_phi,
    eval_psi,
    f_transition,
    g_transition,
)

__all__ = [
    "BACKEND",
    "BlockShape",
    "EngineConfig",
    "Grid",
    "GridError",
    "GridParseError",
    "ProbabilityFunction",
    "RngStream",
    "RuleParams",
    "RunResult",
    "block_minority",
    "choose_rule",
    "eval_phi",
    "eval_psi",
    "f_transition",
    "g_transition",
    "load_grid",
    "random_density",
    "run",
    "save_grid",
    "step",
    "trajectory_hash",
]
