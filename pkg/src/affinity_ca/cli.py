"""Command-line front end.

    affinity-ca run    [CONFIG] [--set key=value ...]
    affinity-ca sweep  CONFIG   [--set key=value ...] [--workers N]
    affinity-ca render GRID_FILE OUTPUT.pgm
    affinity-ca preset NAME
    affinity-ca bench  [--size N] [--steps N]

Exit codes: 0 success, 1 usage/config/IO error, 2 run timed out.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import Config, ConfigError, parse_config
from .engine import TIMEOUT, run
from .experiments import PRESETS, preset, run_experiment, summarize, write_csv
from .grid import GridError
from .render import write_pgm

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_TIMEOUT = 2


def _load_config(path: str | None, overrides) -> Config:
    if path is None:
        return parse_config("", overrides=overrides or ())
    text = Path(path).read_text(encoding="utf-8")
    return parse_config(text, source=path, overrides=overrides or ())


def cmd_run(args) -> int:
    cfg = _load_config(args.config, args.set)
    if cfg.is_sweep:
        raise ConfigError("list values are only allowed with 'sweep'")
    if cfg.snapshot_every is not None and cfg.out_dir is None:
        raise ConfigError("snapshot_every needs out_dir", "out_dir")
    spec = cfg.specs()[0]
    initial = spec.initial.build(spec.width, spec.height, spec.seed_base)

    on_snapshot = None
    if cfg.snapshot_every is not None:
        out_dir = Path(cfg.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)

        def on_snapshot(t, grid):
            write_pgm(grid, out_dir / f"step_{t:06d}.pgm")

    result = run(initial, spec.params, spec.engine, seed=spec.seed_base,
                 workers=args.workers, on_snapshot=on_snapshot)
    print(f"{result.outcome} {result.iterations} {result.final_density:.6f}", flush=True)
    return EXIT_TIMEOUT if result.outcome == TIMEOUT else EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _load_config(args.config, args.set)
    if cfg.out_csv is None:
        raise ConfigError("sweep needs an output path", "out_csv")
    specs = cfg.specs()
    records = []
    for i, spec in enumerate(specs, start=1):
        batch = run_experiment(spec, workers=args.workers)
        records.extend(batch)
        counts = summarize(batch)
        print(
            f"[{i}/{len(specs)}] {spec.name}: "
            + " ".join(f"{k}={v}" for k, v in counts.items()),
            file=sys.stderr, flush=True,
        )
    write_csv(records, cfg.out_csv)
    return EXIT_OK


def cmd_render(args) -> int:
    from .grid import Grid

    write_pgm(Grid.load(args.grid_file), args.output)
    return EXIT_OK


def cmd_preset(args) -> int:
    spec = preset(args.name)
    prm = spec.params
    lines = [
        f"# preset {spec.name}",
        f"width = {spec.width}",
        f"height = {spec.height}",
        f"K = {prm.K}",
        f"p = {prm.p!r}",
        f"phi = {prm.phi.descriptor()}",
        f"psi = {prm.psi.descriptor()}",
        f"mode = {prm.threshold_mode}",
        f"beyond_k = {prm.beyond_k}",
    ]
    init = spec.initial
    if init.kind == "random":
        lines.append(f"rho = {init.rho!r}")
    elif init.kind == "block":
        lines += [f"block_state = {init.block_state}", f"block_count = {init.block_count}",
                  f"block_shape = {init.block_shape}"]
    lines += [f"trials = {spec.trials}", f"max_steps = {spec.engine.max_steps}"]
    print("\n".join(lines))
    return EXIT_OK


def cmd_bench(args) -> int:
    from .bench import main as bench_main

    bench_main(size=args.size, steps=args.steps)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="affinity-ca", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_args(p, config_required):
        if config_required:
            p.add_argument("config", help="key = value configuration file")
        else:
            p.add_argument("config", nargs="?", help="key = value configuration file")
        p.add_argument("-s", "--set", action="append", metavar="KEY=VALUE",
                       help="override a configuration key (repeatable)")
        p.add_argument("-w", "--workers", type=int, default=1,
                       help="threads per step (run) or concurrent trials (sweep)")

    p = sub.add_parser("run", help="run one simulation")
    add_config_args(p, config_required=False)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run a parameter sweep and write CSV")
    add_config_args(p, config_required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("render", help="render a grid file as a PGM image")
    p.add_argument("grid_file")
    p.add_argument("output")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("preset", help="print a named preset as a config file")
    p.add_argument("name", choices=PRESETS)
    p.set_defaults(func=cmd_preset)

    p = sub.add_parser("bench", help="compare the numba and numpy step kernels")
    p.add_argument("--size", type=int, default=100)
    p.add_argument("--steps", type=int, default=2000)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        return args.func(args)
    except (ConfigError, GridError, ValueError, OSError) as exc:
        print(f"affinity-ca: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
