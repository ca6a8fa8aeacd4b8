"""The deterministic threshold rule f, the stochastic booster rule g, and the
probability functions that drive g.

``phi`` is the affection probability (a 1-cell with ``x`` zero-neighbors
becomes 0) and ``psi`` the repulsion probability (a 0-cell with ``x``
one-neighbors becomes 1). Both map ``{0..K}`` into ``[0, 1]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

FAMILIES = ("zero", "logarithmic", "exponential", "linear", "table")
THRESHOLD_MODES = ("more_than", "at_least", "exact")
MODE_CODES = {"more_than": 0, "at_least": 1, "exact": 2}
BEYOND_K = ("follow_f", "hold", "identity")
RULE_F = "F"
RULE_G = "G"

# short names accepted in config files and written to CSV
_ALIASES = {
    "zero": "zero",
    "log": "logarithmic",
    "logarithmic": "logarithmic",
    "exp": "exponential",
    "exponential": "exponential",
    "linear": "linear",
}
_SHORT = {"zero": "zero", "logarithmic": "log", "exponential": "exp", "linear": "linear"}


def _check_K(K) -> None:
    if isinstance(K, bool) or not isinstance(K, (int, np.integer)) or not 0 <= K <= 8:
        raise ValueError(f"K must be an integer in [0, 8], got {K!r}")


@lru_cache(maxsize=None)
def _builtin_values(family: str, K: int) -> tuple[float, ...]:
    if family == "zero":
        return (0.0,) * (K + 1)
    if family == "logarithmic":
        # x <= 1 maps to 0; for K <= 1 that is the whole domain
        return tuple(0.0 if x <= 1 else math.log(x) / math.log(K) for x in range(K + 1))
    if family == "exponential":
        return tuple(0.0 if x == 0 else math.exp(x - K) for x in range(K + 1))
    if family == "linear":
        # K = 0 leaves only x = 0, where x/K is 0/0; treat as "no support"
        return tuple(0.0 if K == 0 else x / K for x in range(K + 1))
    raise ValueError(f"unknown builtin family {family!r}")


@dataclass(frozen=True)
class ProbabilityFunction:
    family: str
    K: int
    table: tuple[float, ...] | None = None
    _values: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown probability family {self.family!r}")
        _check_K(self.K)
        object.__setattr__(self, "K", int(self.K))
        if self.family == "table":
            if self.table is None:
                raise ValueError("family 'table' needs explicit values")
            values = tuple(float(v) for v in self.table)
            if len(values) != self.K + 1:
                raise ValueError(
                    f"table needs K+1 = {self.K + 1} entries, got {len(values)}"
                )
            for x, v in enumerate(values):
                if not 0.0 <= v <= 1.0:
                    raise ValueError(f"table entry {x} = {v} is outside [0, 1]")
            object.__setattr__(self, "table", values)
        else:
            if self.table is not None:
                raise ValueError(f"family {self.family!r} does not take a table")
            values = _builtin_values(self.family, self.K)
        object.__setattr__(self, "_values", values)

    @classmethod
    def parse(cls, text: str, K: int) -> "ProbabilityFunction":
        """Build from ``log | exp | linear | zero | table:v0,...,vK``."""
        text = text.strip()
        if text.startswith("table:"):
            raw = [t.strip() for t in text[len("table:"):].split(",")]
            try:
                values = tuple(float(t) for t in raw)
            except ValueError:
                raise ValueError(f"table values must be numbers, got {text!r}") from None
            return cls("table", K, values)
        try:
            return cls(_ALIASES[text], K)
        except KeyError:
            raise ValueError(
                f"unknown probability function {text!r}; "
                "expected log, exp, linear, zero or table:v0,...,vK"
            ) from None

    def descriptor(self) -> str:
        """Inverse of :meth:`parse` (for config files and CSV)."""
        if self.family == "table":
            return "table:" + ",".join(repr(v) for v in self.table)
        return _SHORT[self.family]

    def with_K(self, K: int) -> "ProbabilityFunction":
        if self.family == "table":
            return ProbabilityFunction("table", K, self.table)
        return ProbabilityFunction(self.family, K)

    def values(self) -> tuple[float, ...]:
        return self._values

    def __call__(self, x: int) -> float:
        if isinstance(x, bool) or not isinstance(x, (int, np.integer)) or not 0 <= x <= self.K:
            raise ValueError(f"x must be an integer in [0, {self.K}], got {x!r}")
        return self._values[x]


def eval_phi(pf: ProbabilityFunction, x: int) -> float:
    return pf(x)


def eval_psi(pf: ProbabilityFunction, x: int) -> float:
    return pf(x)


@dataclass(frozen=True)
class RuleParams:
    """The four model parameters plus how f's 0 -> 1 threshold is read.

    A 0-cell turns to 1 under f when its one-neighbor count is
    ``> 8 - K`` (``"more_than"``, the default), ``>= 8 - K`` (``"at_least"``)
    or ``== 8 - K`` (``"exact"``). With ``more_than`` and K=4, f is a plain
    majority vote of the 8 neighbors in which a 4-4 tie keeps the state.

    ``beyond_k`` says what g does with a cell whose support exceeds K:
    ``"follow_f"`` (default) gives it whatever f would, so g only boosts
    cells with support up to K; ``"hold"`` flips it with the boundary
    probability phi(K) / psi(K); ``"identity"`` leaves it alone. For K >= 4
    and families with phi(K) = psi(K) = 1, follow_f and hold coincide.
    """

    K: int = 4
    phi: ProbabilityFunction | None = None
    psi: ProbabilityFunction | None = None
    p: float = 0.2
    threshold_mode: str = "more_than"
    beyond_k: str = "follow_f"

    def __post_init__(self):
        _check_K(self.K)
        object.__setattr__(self, "K", int(self.K))
        if self.phi is None:
            object.__setattr__(self, "phi", ProbabilityFunction("logarithmic", self.K))
        if self.psi is None:
            object.__setattr__(self, "psi", ProbabilityFunction("exponential", self.K))
        if self.phi.K != self.K or self.psi.K != self.K:
            raise ValueError(
                f"phi.K={self.phi.K} and psi.K={self.psi.K} must both equal K={self.K}"
            )
        p = float(self.p)
        if not 0.0 <= p <= 1.0 or math.isnan(p):
            raise ValueError(f"p must lie in [0, 1], got {self.p!r}")
        object.__setattr__(self, "p", p)
        if self.threshold_mode not in THRESHOLD_MODES:
            raise ValueError(
                f"threshold_mode must be one of {THRESHOLD_MODES}, got {self.threshold_mode!r}"
            )
        if self.beyond_k not in BEYOND_K:
            raise ValueError(f"beyond_k must be one of {BEYOND_K}, got {self.beyond_k!r}")

    @property
    def mode_code(self) -> int:
        return MODE_CODES[self.threshold_mode]

    def flip_probability(self, state: int, x_opposite: int) -> float:
        """Chance that g flips a cell in ``state`` with ``x_opposite`` support."""
        pf = self.phi if state == 1 else self.psi
        if x_opposite > self.K:
            if self.beyond_k == "follow_f":
                flips = f_transition(state, x_opposite, self.K, self.threshold_mode) != state
                return 1.0 if flips else 0.0
            return 0.0 if self.beyond_k == "identity" else pf(self.K)
        return pf(x_opposite)

    def flip_tables(self) -> tuple[np.ndarray, np.ndarray]:
        """phi and psi as length-9 float arrays indexed by opposite count.

        Entries past K are the boundary value, 0 or 1; since u lies in
        [0, 1), a 0 entry never flips and a 1 entry always does, so the
        kernels need no branch for the beyond-K cases.
        """
        phi = np.array([self.flip_probability(1, x) for x in range(9)], dtype=np.float64)
        psi = np.array([self.flip_probability(0, x) for x in range(9)], dtype=np.float64)
        return phi, psi


def f_transition(state: int, x_opposite: int, K: int, mode: str = "more_than") -> int:
    """Deterministic rule f for one cell with ``x_opposite`` differing neighbors."""
    if state == 1:
        return 0 if x_opposite > K else 1
    if mode == "more_than":
        return 1 if x_opposite > 8 - K else 0
    if mode == "at_least":
        return 1 if x_opposite >= 8 - K else 0
    if mode == "exact":
        return 1 if x_opposite == 8 - K else 0
    raise ValueError(f"unknown threshold mode {mode!r}")


def g_transition(state: int, x_opposite: int, params: RuleParams, u: float) -> int:
    """Stochastic rule g given the caller's uniform variate ``u`` in [0, 1)."""
    if x_opposite > params.K and params.beyond_k == "identity":
        return state
    return 1 - state if u < params.flip_probability(state, x_opposite) else state
