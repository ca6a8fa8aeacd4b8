"""Counter-based uniform variates keyed by (seed, step, role, index).

Every variate is a pure function of its coordinates, so a step can be split
across any number of workers (or evaluated in any cell order) and still
consume exactly the same randomness as a sequential sweep.

The mixing function is the SplitMix64 finalizer. A stream key is derived by
chaining it over (seed, step, role); the per-cell variate mixes that key
with the flat cell index and keeps the top 53 bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._accel import njit

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_INV_2_53 = 1.0 / (1 << 53)

# stream roles
ROLE_RULE_COIN = 0
ROLE_CELL = 1
ROLE_TRIAL = 2


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def stream_key(seed: int, step: int, role: int) -> int:
    h = mix64(seed + GOLDEN)
    h = mix64((h ^ step) + GOLDEN)
    return mix64((h ^ role) + GOLDEN)


def uniform_from_key(key: int, index: int) -> float:
    return (mix64((key ^ index) + GOLDEN) >> 11) * _INV_2_53


# vectorized path; uint64 arrays wrap silently on overflow
_G_U64 = np.uint64(GOLDEN)
_M1_U64 = np.uint64(_M1)
_M2_U64 = np.uint64(_M2)


def uniform_array(key: int, indices: np.ndarray) -> np.ndarray:
    """Variates for many indices under one stream key (numpy path)."""
    z = (indices.astype(np.uint64) ^ np.uint64(key)) + _G_U64
    z = (z ^ (z >> np.uint64(30))) * _M1_U64
    z = (z ^ (z >> np.uint64(27))) * _M2_U64
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * _INV_2_53


@njit(cache=True, inline="always")
def uniform_nb(key, index):  # pragma: no cover - compiled
    z = (key ^ np.uint64(index)) + np.uint64(GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    z = z ^ (z >> np.uint64(31))
    return np.float64(z >> np.uint64(11)) * _INV_2_53


@dataclass(frozen=True)
class RngStream:
    """Keyed randomness for one run. Holds nothing but the seed."""

    seed: int

    def __post_init__(self):
        if not 0 <= self.seed <= MASK64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")

    def key(self, step: int, role: int) -> int:
        return stream_key(self.seed, step, role)

    def uniform(self, step: int, role: int, index: int) -> float:
        """A variate in [0, 1); identical inputs always give identical output."""
        return uniform_from_key(self.key(step, role), index)
