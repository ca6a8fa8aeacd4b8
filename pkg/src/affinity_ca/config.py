"""Flat ``key = value`` run/sweep configuration.

Blank lines and ``#`` comments are ignored. ``K``, ``p``, ``rho`` and
``block_count`` accept comma-separated lists, which a sweep expands into
their cross product. Everything not given takes the default parameterization
(K=4, log affection, exp repulsion, p=0.2).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, fields, replace

from .engine import EngineConfig
from .experiments import ExperimentSpec, InitialSpec
from .rules import BEYOND_K, THRESHOLD_MODES, ProbabilityFunction, RuleParams


class ConfigError(ValueError):
    def __init__(self, message: str, key: str | None = None, line: int | None = None,
                 source: str = "<config>"):
        where = source if line is None else f"{source}:{line}"
        prefix = f"{where}: {key}: " if key else f"{where}: "
        super().__init__(prefix + message)
        self.key = key
        self.line = line


LIST_KEYS = ("K", "p", "rho", "block_count")


@dataclass(frozen=True)
class Config:
    width: int = 100
    height: int = 100
    K: tuple[int, ...] = (4,)
    p: tuple[float, ...] = (0.2,)
    phi: str = "log"
    psi: str = "exp"
    mode: str = "more_than"
    beyond_k: str = "follow_f"
    rho: tuple[float, ...] = (0.5,)
    block_state: int = 0
    block_count: tuple[int, ...] | None = None
    block_shape: str = "square"
    grid_file: str | None = None
    seed: int = 0
    trials: int = 1
    max_steps: int = 50_000
    snapshot_every: int | None = None
    out_csv: str | None = None
    out_dir: str | None = None

    @property
    def is_sweep(self) -> bool:
        lists = [self.K, self.p, self.rho, self.block_count or (0,)]
        return any(len(v) > 1 for v in lists)

    def initial_kind(self) -> str:
        if self.grid_file is not None:
            return "file"
        if self.block_count is not None:
            return "block"
        return "random"

    def specs(self) -> list[ExperimentSpec]:
        """One experiment per point of the K x p x rho x block_count product."""
        kind = self.initial_kind()
        out = []
        counts = self.block_count or (None,)
        rhos = self.rho if kind == "random" else (None,)
        for K, p, rho, count in itertools.product(self.K, self.p, rhos, counts):
            params = RuleParams(
                K=K,
                phi=ProbabilityFunction.parse(self.phi, K),
                psi=ProbabilityFunction.parse(self.psi, K),
                p=p,
                threshold_mode=self.mode,
                beyond_k=self.beyond_k,
            )
            if kind == "random":
                initial = InitialSpec(kind="random", rho=rho)
            elif kind == "block":
                initial = InitialSpec(kind="block", block_state=self.block_state,
                                      block_count=count, block_shape=self.block_shape)
            else:
                initial = InitialSpec(kind="file", grid_file=self.grid_file)
            name = f"K={K} p={p!r}" + (f" rho={rho!r}" if rho is not None else "") + (
                f" block={count}" if count is not None else "")
            out.append(ExperimentSpec(
                name=name, width=self.width, height=self.height, params=params,
                initial=initial, trials=self.trials, seed_base=self.seed,
                engine=EngineConfig(max_steps=self.max_steps, snapshot_every=self.snapshot_every),
            ))
        return out

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None or (f.name == "rho" and self.initial_kind() != "random"):
                continue
            if isinstance(value, tuple):
                value = ",".join(repr(v) for v in value)
            lines.append(f"{f.name} = {value}")
        return "\n".join(lines) + "\n"


def _int(text: str) -> int:
    return int(text, 10)


def _float(text: str) -> float:
    v = float(text)
    if v != v:
        raise ValueError("NaN is not allowed")
    return v


def _in_range(lo, hi):
    def check(v):
        if not lo <= v <= hi:
            raise ValueError(f"must be in [{lo}, {hi}], got {v}")
        return v
    return check


def _at_least(lo):
    def check(v):
        if v < lo:
            raise ValueError(f"must be >= {lo}, got {v}")
        return v
    return check


def _choice(options):
    def check(v):
        if v not in options:
            raise ValueError(f"must be one of {', '.join(map(str, options))}, got {v!r}")
        return v
    return check


def _prob_fn(text: str) -> str:
    # shape check only; K-dependent checks (table length) happen after parsing
    ProbabilityFunction.parse(text, 8 if not text.startswith("table:") else
                              len(text.split(",")) - 1)
    return text


# key -> (converter, validator)
_SCHEMA = {
    "width": (_int, _at_least(3)),
    "height": (_int, _at_least(3)),
    "K": (_int, _in_range(0, 8)),
    "p": (_float, _in_range(0.0, 1.0)),
    "phi": (str, _prob_fn),
    "psi": (str, _prob_fn),
    "mode": (str, _choice(THRESHOLD_MODES)),
    "beyond_k": (str, _choice(BEYOND_K)),
    "rho": (_float, _in_range(0.0, 1.0)),
    "block_state": (_int, _choice((0, 1))),
    "block_count": (_int, _at_least(1)),
    "block_shape": (str, _choice(("run", "square"))),
    "grid_file": (str, None),
    "seed": (_int, _in_range(0, (1 << 64) - 1)),
    "trials": (_int, _at_least(1)),
    "max_steps": (_int, _at_least(1)),
    "snapshot_every": (_int, _at_least(1)),
    "out_csv": (str, None),
    "out_dir": (str, None),
}


def parse_entries(text: str, source: str = "<config>") -> dict[str, tuple[str, int, str]]:
    """Raw ``{key: (value, line, source)}`` with syntax and duplicate checks only."""
    entries: dict[str, tuple[str, int, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line=lineno, source=source)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _SCHEMA:
            raise ConfigError("unknown key", key, lineno, source)
        if key in entries:
            raise ConfigError(f"duplicate key (first set on line {entries[key][1]})", key, lineno, source)
        if not value:
            raise ConfigError("missing value", key, lineno, source)
        entries[key] = (value, lineno, source)
    return entries


def build_config(entries: dict[str, tuple[str, int, str]]) -> Config:
    values = {}
    for key, (text, lineno, source) in entries.items():
        convert, check = _SCHEMA[key]
        items = [t.strip() for t in text.split(",")] if key in LIST_KEYS else [text]
        parsed = []
        for item in items:
            try:
                v = convert(item)
                if check is not None:
                    v = check(v)
            except ValueError as exc:
                raise ConfigError(str(exc), key, lineno, source) from None
            parsed.append(v)
        values[key] = tuple(parsed) if key in LIST_KEYS else parsed[0]

    explicit = [k for k in ("rho", "block_count", "grid_file") if k in values]
    if len(explicit) > 1:
        key = explicit[1]
        raise ConfigError(
            f"conflicts with {explicit[0]}; give only one of rho, block_count, grid_file",
            key, entries[key][1], entries[key][2],
        )
    cfg = replace(Config(), **values)
    # resolve K-dependent pieces now so errors carry a line number
    for key in ("phi", "psi"):
        for K in cfg.K:
            try:
                ProbabilityFunction.parse(getattr(cfg, key), K)
            except ValueError as exc:
                line, src = entries[key][1:] if key in entries else (None, "<config>")
                raise ConfigError(f"{exc} (for K={K})", key, line, src) from None
    return cfg


def parse_config(text: str, source: str = "<config>", overrides=()) -> Config:
    """Parse and validate config text.

    ``overrides`` is an iterable of ``key=value`` strings (command-line
    ``--set``) that replace file entries rather than duplicating them.
    """
    entries = parse_entries(text, source)
    for i, item in enumerate(overrides, start=1):
        if "=" not in item:
            raise ConfigError(f"expected key=value, got {item!r}", line=i, source="--set")
        key, value = (s.strip() for s in item.split("=", 1))
        if key not in _SCHEMA:
            raise ConfigError("unknown key", key, i, "--set")
        entries[key] = (value, i, "--set")
    return build_config(entries)
