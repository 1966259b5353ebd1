"""Experiment runner CLI: run / compare / sweep over INI configs.

Exit codes: 0 success, 1 config error, 2 runtime error. All results are
collected in memory first and written afterwards, so identical configs
produce byte-identical files and a failed command leaves no partial output.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import io
from .config import ConfigError, ExperimentConfig, apply_sweep_value, load_config
from .explore import RunTrace, compare_strategies, run
from .metrics import trace_metrics

TRACE_COLUMNS = ["iteration", "strategy", "x_norm", "y_norm", "x_cm", "y_cm",
                 "raw_height_cm", "on_surface", "cumulative_on_surface"]
METRICS_COLUMNS = ["strategy", "seed", "n_taps", "n_on_surface",
                   "on_surface_ratio", "final_rmse_cm",
                   "final_mean_uncertainty", "rng_kind", "scene_fingerprint"]
COMPARE_COLUMNS = ["seed", "on_surface_weighted", "on_surface_uncertainty",
                   "improvement"]
SWEEP_COLUMNS = ["key", "value", "is_default"] + METRICS_COLUMNS
HEATMAP_FIELDS = ("mean", "uncertainty", "weight", "exploration")


class _Emitter:
    """Tracks written files so a failed command can remove its partial output."""

    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        self.written: list[Path] = []

    def csv(self, name: str, header, rows) -> Path:
        path = self.out_dir / name
        io.write_csv(path, header, rows)
        self.written.append(path)
        return path

    def heatmap(self, name: str, matrix) -> Path:
        path = self.out_dir / name
        io.write_heatmap_csv(path, matrix)
        self.written.append(path)
        return path

    def pgm(self, name: str, matrix) -> Path:
        path = self.out_dir / name
        io.write_pgm(path, matrix)
        self.written.append(path)
        return path

    def discard(self) -> None:
        for path in self.written:
            path.unlink(missing_ok=True)


def _trace_rows(trace: RunTrace, scene) -> list[list]:
    ax, ay = scene.area_cm
    return [[r.iteration, r.strategy, r.position[0], r.position[1],
             r.position[0] * ax, r.position[1] * ay, r.result.raw_height_cm,
             int(r.result.on_surface), r.cumulative_on_surface]
            for r in trace.records]


def _metrics_row(trace: RunTrace, tm) -> list:
    final_mean_uncertainty = float(trace.final_state.uncertainty_map().mean())
    return [trace.config.strategy.value, trace.config.seed, tm.n_taps,
            tm.n_on_surface, tm.on_surface_ratio, tm.final_rmse_cm,
            final_mean_uncertainty, trace.rng_kind, trace.scene_fingerprint]


def _emit_snapshots(em: _Emitter, trace: RunTrace, emit_pgm: bool) -> None:
    resolution = trace.config.grid_resolution
    for snap in trace.snapshots:
        fields = {"mean": snap.height, "uncertainty": snap.uncertainty,
                  "weight": snap.weight, "exploration": snap.exploration}
        for name in HEATMAP_FIELDS:
            matrix = io.field_matrix(fields[name], resolution)
            em.heatmap(f"heatmap_{name}_iter{snap.iteration:03d}.csv", matrix)
            if emit_pgm:
                em.pgm(f"heatmap_{name}_iter{snap.iteration:03d}.pgm", matrix)


def _cmd_run(cfg: ExperimentConfig, quiet: bool) -> int:
    trace = run(cfg.run, cfg.scene, snapshot_every=cfg.output.snapshot_every)
    tm = trace_metrics(trace, cfg.scene)
    out_dir = Path(cfg.output.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    em = _Emitter(out_dir)
    try:
        em.csv("trace.csv", TRACE_COLUMNS, _trace_rows(trace, cfg.scene))
        em.csv("metrics.csv", METRICS_COLUMNS, [_metrics_row(trace, tm)])
        _emit_snapshots(em, trace, cfg.output.emit_pgm)
    except BaseException:
        em.discard()
        raise
    if not quiet:
        print(f"run: {tm.n_taps} taps, {tm.n_on_surface} on-surface "
              f"(ratio {io.fmt(tm.on_surface_ratio)}), "
              f"rmse {io.fmt(tm.final_rmse_cm)} cm")
        if trace.exhausted_early:
            print("note: candidate grid exhausted before the budget was spent")
        print(f"wrote {len(em.written)} files to {out_dir}")
    return 0


def _cmd_compare(cfg: ExperimentConfig, quiet: bool) -> int:
    if cfg.seeds is None:
        raise ConfigError("compare needs a 'seeds' list in [run] "
                          "(e.g. seeds = 0..19)")
    rows = compare_strategies(cfg.run, cfg.scene, cfg.seeds)
    improvements = [r.improvement for r in rows]
    csv_rows = [[r.seed, r.on_surface_weighted, r.on_surface_uncertainty,
                 r.improvement] for r in rows]
    csv_rows.append([
        "mean",
        sum(r.on_surface_weighted for r in rows) / len(rows),
        sum(r.on_surface_uncertainty for r in rows) / len(rows),
        sum(improvements) / len(improvements)])
    out_dir = Path(cfg.output.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    em = _Emitter(out_dir)
    try:
        em.csv("compare.csv", COMPARE_COLUMNS, csv_rows)
    except BaseException:
        em.discard()
        raise
    if not quiet:
        print(f"compared {len(rows)} paired seeds, budget {cfg.run.budget}")
        print("improvement = (on_surface_weighted - on_surface_uncertainty)"
              " / budget")
        print(f"mean improvement {io.fmt(sum(improvements) / len(improvements))}"
              f", min {io.fmt(min(improvements))}"
              f", max {io.fmt(max(improvements))}")
        print(f"wrote {out_dir / 'compare.csv'}")
    return 0


def _cmd_sweep(cfg: ExperimentConfig, quiet: bool) -> int:
    if cfg.sweep is None:
        raise ConfigError("sweep needs a [sweep] section with one key")
    key, values = cfg.sweep
    rows = []
    for raw in values:
        run_config = apply_sweep_value(cfg.run, key, raw)
        trace = run(run_config, cfg.scene)
        is_default = 1 if run_config == cfg.run else 0
        rows.append([key, raw, is_default]
                    + _metrics_row(trace, trace_metrics(trace, cfg.scene)))
    out_dir = Path(cfg.output.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    em = _Emitter(out_dir)
    try:
        em.csv("sweep.csv", SWEEP_COLUMNS, rows)
    except BaseException:
        em.discard()
        raise
    if not quiet:
        print(f"swept {key} over {len(values)} values")
        print(f"wrote {out_dir / 'sweep.csv'}")
    return 0


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tapsurf",
        description="Active tapping simulator: run, compare, sweep")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("run", "execute one exploration run"),
                            ("compare", "paired weighted vs uncertainty runs"),
                            ("sweep", "run the [sweep] key over its values")):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("config", help="path to an INI experiment config")
        cmd.add_argument("--output-dir", default=None,
                         help="override [output] output_dir")
        cmd.add_argument("--quiet", action="store_true",
                         help="suppress the stdout report")
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.output_dir is not None:
        cfg = replace(cfg, output=replace(cfg.output,
                                          output_dir=args.output_dir))
    commands = {"run": _cmd_run, "compare": _cmd_compare, "sweep": _cmd_sweep}
    try:
        return commands[args.command](cfg, args.quiet)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
