"""Batch harness: trials, presets, accuracy and CSV output."""

from __future__ import annotations

import csv
import io
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from .engine import ALL_ONE, TIMEOUT, EngineConfig, run
from .grid import Grid
from .initcfg import BlockShape, block_minority, load_grid, random_density
from .rules import ProbabilityFunction, RuleParams

CSV_HEADER = ("seed", "K", "rho_initial", "p", "phi", "psi", "mode", "outcome", "iterations")


class ExperimentError(RuntimeError):
    """A trial failed; ``trial`` is its index within the experiment."""

    def __init__(self, message: str, trial: int):
        super().__init__(f"trial {trial}: {message}")
        self.trial = trial


@dataclass(frozen=True)
class InitialSpec:
    """How each trial's starting grid is made.

    ``kind`` is ``random`` (exact density ``rho``), ``block`` (``block_count``
    cells of ``block_state`` in the opposite background) or ``file``.
    """

    kind: str = "random"
    rho: float = 0.5
    block_state: int = 0
    block_count: int = 1
    block_shape: str = "square"
    block_anchor: tuple[int, int] = (0, 0)
    grid_file: str | None = None

    def build(self, width: int, height: int, seed: int) -> Grid:
        if self.kind == "random":
            return random_density(width, height, self.rho, seed)
        if self.kind == "block":
            shape = BlockShape(self.block_shape, self.block_anchor)
            return block_minority(width, height, self.block_state, self.block_count, shape)
        if self.kind == "file":
            return load_grid(self.grid_file)
        raise ValueError(f"unknown initial kind {self.kind!r}")


@dataclass(frozen=True)
class ExperimentSpec:
    name: str = "experiment"
    width: int = 100
    height: int = 100
    params: RuleParams = field(default_factory=RuleParams)
    initial: InitialSpec = field(default_factory=InitialSpec)
    trials: int = 1
    seed_base: int = 0
    engine: EngineConfig = field(default_factory=EngineConfig)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.seed_base < 0:
            raise ValueError(f"seed_base must be non-negative, got {self.seed_base}")


@dataclass(frozen=True)
class TrialRecord:
    seed: int
    K: int
    rho_initial: float
    p: float
    phi: str
    psi: str
    mode: str  # "<threshold_mode>/<beyond_k>", e.g. "more_than/follow_f"
    outcome: str
    iterations: int


def run_trial(spec: ExperimentSpec, index: int) -> TrialRecord:
    seed = spec.seed_base + index
    try:
        grid = spec.initial.build(spec.width, spec.height, seed)
        result = run(grid, spec.params, spec.engine, seed=seed)
    except Exception as exc:
        raise ExperimentError(str(exc), index) from exc
    prm = spec.params
    return TrialRecord(
        seed=seed,
        K=prm.K,
        rho_initial=grid.density(),
        p=prm.p,
        phi=prm.phi.descriptor(),
        psi=prm.psi.descriptor(),
        mode=f"{prm.threshold_mode}/{prm.beyond_k}",
        outcome=result.outcome,
        iterations=result.iterations,
    )


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> list[TrialRecord]:
    """All trials of ``spec``, ordered by trial index.

    Trial ``i`` is seeded with ``seed_base + i`` and shares nothing with the
    others, so the worker count never changes the records.
    """
    if workers <= 1:
        return [run_trial(spec, i) for i in range(spec.trials)]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(lambda i: run_trial(spec, i), range(spec.trials)))


def classification_accuracy(records, rho_threshold: float = 0.5) -> float:
    """Fraction of finished trials that went all-1 exactly when rho > threshold.

    Timed-out trials are excluded (see :func:`summarize` for the count). An
    empty set is vacuously 1.0 and raises a ``RuntimeWarning``.
    """
    done = [r for r in records if r.outcome != TIMEOUT]
    if len(done) != len(records):
        warnings.warn(
            f"{len(records) - len(done)} timed-out trial(s) excluded from accuracy",
            RuntimeWarning,
            stacklevel=2,
        )
    if not done:
        warnings.warn("no finished trials; accuracy is vacuously 1.0", RuntimeWarning, stacklevel=2)
        return 1.0
    hits = sum((r.outcome == ALL_ONE) == (r.rho_initial > rho_threshold) for r in done)
    return hits / len(done)


def summarize(records) -> dict[str, int]:
    counts = {"all_zero": 0, "all_one": 0, "timeout": 0}
    for r in records:
        counts[r.outcome] += 1
    return counts


PRESETS = ("affinity_default", "self_healing", "transformation", "density_linear", "density_exponential")


def preset(name: str, **overrides) -> ExperimentSpec:
    """Parameterizations used in the reference campaigns.

    ``self_healing`` starts from a healthy (all-0) tissue with a sick
    fraction of cells; ``transformation`` lowers K to 3 so a compact blob of
    ones splits and dissolves; the density presets use the same function
    for phi and psi with a rarer booster (p = 0.1).
    """
    if name in ("affinity_default", "self_healing", "transformation"):
        K = 3 if name == "transformation" else 4
        params = RuleParams(
            K=K,
            phi=ProbabilityFunction("logarithmic", K),
            psi=ProbabilityFunction("exponential", K),
            p=0.2,
        )
        if name == "self_healing":
            initial = InitialSpec(kind="random", rho=0.632275)
        elif name == "transformation":
            initial = InitialSpec(kind="block", block_state=1, block_count=400)
        else:
            initial = InitialSpec(kind="random", rho=0.475)
        spec = ExperimentSpec(name=name, width=1000, height=1000, params=params, initial=initial)
    elif name in ("density_linear", "density_exponential"):
        fam = "linear" if name == "density_linear" else "exponential"
        params = RuleParams(
            K=4, phi=ProbabilityFunction(fam, 4), psi=ProbabilityFunction(fam, 4), p=0.1
        )
        side = 200 if fam == "linear" else 100
        spec = ExperimentSpec(
            name=name, width=side, height=side, params=params,
            initial=InitialSpec(kind="random", rho=0.5), trials=100,
        )
    else:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return replace(spec, **overrides) if overrides else spec


def _rows(records):
    for r in records:
        yield (
            r.seed, r.K, f"{r.rho_initial:.6f}", repr(r.p), r.phi, r.psi,
            r.mode, r.outcome, r.iterations,
        )


def format_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(_rows(records))
    return buf.getvalue()


def write_csv(records, path) -> None:
    path = Path(path)
    try:
        path.write_text(format_csv(records), encoding="utf-8", newline="")
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror or exc}") from exc


def read_csv(path) -> list[TrialRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        return [
            TrialRecord(
                seed=int(row["seed"]), K=int(row["K"]),
                rho_initial=float(row["rho_initial"]), p=float(row["p"]),
                phi=row["phi"], psi=row["psi"], mode=row["mode"],
                outcome=row["outcome"], iterations=int(row["iterations"]),
            )
            for row in reader
        ]
