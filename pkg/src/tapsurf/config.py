"""INI experiment configuration.

Flat sections [scene], [run], [output] and an optional [sweep] with exactly
one key. Every key is validated before any run starts; unknown keys are
errors with a nearest-key suggestion.
"""

from __future__ import annotations

import configparser
import difflib
from dataclasses import dataclass, replace
from pathlib import Path

from .env import Scene, slope_block, wave_block
from .explore import RunConfig, Strategy
from .gp import KernelParams

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "OutputOptions",
    "apply_sweep_value",
    "load_config",
]


class ConfigError(ValueError):
    """Invalid experiment configuration."""


SCENE_KEYS = ("object", "placement_x_cm", "placement_y_cm", "area_cm",
              "height_scale_cm", "noise_sd_cm")
RUN_KEYS = ("seed", "seeds", "budget", "n_initial_random", "grid_resolution",
            "strategy", "lengthscale_sq", "surface_lengthscale_sq",
            "surface_noise_var", "surface_prior_mean", "weight_lengthscale_sq",
            "weight_noise_var", "weight_prior_mean", "include_desk_taps")
OUTPUT_KEYS = ("output_dir", "snapshot_every", "emit_pgm")
SECTION_KEYS = {"scene": SCENE_KEYS, "run": RUN_KEYS, "output": OUTPUT_KEYS,
                "sweep": None}

OBJECTS = {"wave": wave_block, "slope": slope_block}

_BOOLEAN = {"1": True, "true": True, "yes": True, "on": True,
            "0": False, "false": False, "no": False, "off": False}

# [run] keys a [sweep] section may vary; 'seeds' stays a compare-only list.
SWEEPABLE_KEYS = ("seed", "budget", "n_initial_random", "grid_resolution",
                  "strategy", "lengthscale_sq", "surface_lengthscale_sq",
                  "surface_noise_var", "surface_prior_mean",
                  "weight_lengthscale_sq", "weight_noise_var",
                  "weight_prior_mean", "include_desk_taps")


@dataclass(frozen=True)
class OutputOptions:
    output_dir: str = "out"
    snapshot_every: int | None = None
    emit_pgm: bool = False


@dataclass(frozen=True)
class ExperimentConfig:
    scene: Scene
    run: RunConfig
    seeds: tuple[int, ...] | None
    output: OutputOptions
    sweep: tuple[str, tuple[str, ...]] | None


def _suggest(key: str, valid) -> str:
    matches = difflib.get_close_matches(key, valid, n=1, cutoff=0.0)
    return matches[0] if matches else valid[0]


def _get_float(section: dict, section_name: str, key: str, default: float) -> float:
    raw = section.get(key)
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section_name}] {key}: expected a number, "
                          f"got {raw!r}") from exc


def _get_int(section: dict, section_name: str, key: str, default: int) -> int:
    raw = section.get(key)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section_name}] {key}: expected an integer, "
                          f"got {raw!r}") from exc


def _get_bool(section: dict, section_name: str, key: str, default: bool) -> bool:
    raw = section.get(key)
    if raw is None:
        return default
    try:
        return _BOOLEAN[raw.strip().lower()]
    except KeyError as exc:
        raise ConfigError(f"[{section_name}] {key}: expected a boolean, "
                          f"got {raw!r}") from exc


def _parse_seeds(raw: str) -> tuple[int, ...]:
    raw = raw.strip()
    try:
        if ".." in raw:
            lo_s, hi_s = raw.split("..", 1)
            lo, hi = int(lo_s), int(hi_s)
            if hi < lo:
                raise ConfigError(f"seeds range {raw!r} is empty")
            return tuple(range(lo, hi + 1))
        seeds = tuple(int(part) for part in raw.split(",") if part.strip())
    except ValueError as exc:
        raise ConfigError(f"[run] seeds: expected 'LO..HI' or a comma list, "
                          f"got {raw!r}") from exc
    if not seeds:
        raise ConfigError("[run] seeds: list is empty")
    return seeds


def _build_scene(section: dict) -> Scene:
    name = section.get("object", "wave").strip().lower()
    if name not in OBJECTS:
        raise ConfigError(f"[scene] object must be one of "
                          f"{sorted(OBJECTS)}, got {name!r}")
    area = _get_float(section, "scene", "area_cm", 23.0)
    px = _get_float(section, "scene", "placement_x_cm", 5.0)
    py = _get_float(section, "scene", "placement_y_cm", 8.5)
    scale = _get_float(section, "scene", "height_scale_cm", 15.0)
    noise = _get_float(section, "scene", "noise_sd_cm", 0.0)
    try:
        return Scene(block=OBJECTS[name](), placement_cm=(px, py),
                     area_cm=(area, area), height_scale_cm=scale,
                     noise_sd_cm=noise)
    except ValueError as exc:
        raise ConfigError(f"[scene]: {exc}") from exc


def _build_kernel(section: dict, prefix: str, shared_lengthscale,
                  default: KernelParams) -> KernelParams:
    lengthscale_key = f"{prefix}_lengthscale_sq"
    if shared_lengthscale is not None and lengthscale_key in section:
        raise ConfigError(f"[run] lengthscale_sq conflicts with "
                          f"{lengthscale_key}; set one or the other")
    lengthscale = (shared_lengthscale if shared_lengthscale is not None else
                   _get_float(section, "run", lengthscale_key,
                              default.lengthscale_sq))
    try:
        return KernelParams(
            lengthscale_sq=lengthscale,
            noise_var=_get_float(section, "run", f"{prefix}_noise_var",
                                 default.noise_var),
            prior_mean=_get_float(section, "run", f"{prefix}_prior_mean",
                                  default.prior_mean))
    except ValueError as exc:
        raise ConfigError(f"[run] {prefix} kernel: {exc}") from exc


def _build_run(section: dict) -> tuple[RunConfig, tuple[int, ...] | None]:
    strategy_raw = section.get("strategy", Strategy.WEIGHTED.value)
    try:
        strategy = Strategy(strategy_raw.strip().lower())
    except ValueError as exc:
        raise ConfigError(f"[run] strategy must be one of "
                          f"{[s.value for s in Strategy]}, "
                          f"got {strategy_raw!r}") from exc
    shared = (_get_float(section, "run", "lengthscale_sq", 0.0)
              if "lengthscale_sq" in section else None)
    defaults = RunConfig()
    config = RunConfig(
        seed=_get_int(section, "run", "seed", defaults.seed),
        budget=_get_int(section, "run", "budget", defaults.budget),
        n_initial_random=_get_int(section, "run", "n_initial_random",
                                  defaults.n_initial_random),
        grid_resolution=_get_int(section, "run", "grid_resolution",
                                 defaults.grid_resolution),
        strategy=strategy,
        surface_kernel=_build_kernel(section, "surface", shared,
                                     defaults.surface_kernel),
        weight_kernel=_build_kernel(section, "weight", shared,
                                    defaults.weight_kernel),
        include_desk_taps=_get_bool(section, "run", "include_desk_taps",
                                    defaults.include_desk_taps))
    try:
        config.validate()
    except ValueError as exc:
        raise ConfigError(f"[run]: {exc}") from exc
    seeds = _parse_seeds(section["seeds"]) if "seeds" in section else None
    return config, seeds


def _build_output(section: dict) -> OutputOptions:
    raw_every = section.get("snapshot_every", "none").strip().lower()
    if raw_every in ("", "none"):
        snapshot_every = None
    else:
        try:
            snapshot_every = int(raw_every)
        except ValueError as exc:
            raise ConfigError(f"[output] snapshot_every: expected an integer "
                              f"or 'none', got {raw_every!r}") from exc
        if snapshot_every < 1:
            raise ConfigError("[output] snapshot_every must be >= 1")
    return OutputOptions(
        output_dir=section.get("output_dir", "out").strip(),
        snapshot_every=snapshot_every,
        emit_pgm=_get_bool(section, "output", "emit_pgm", False))


def _build_sweep(section: dict) -> tuple[str, tuple[str, ...]]:
    if len(section) != 1:
        raise ConfigError("[sweep] must contain exactly one key")
    key, raw = next(iter(section.items()))
    if key not in SWEEPABLE_KEYS:
        raise ConfigError(f"[sweep] key {key!r} is not sweepable; did you "
                          f"mean '{_suggest(key, SWEEPABLE_KEYS)}'?")
    values = tuple(part.strip() for part in raw.split(",") if part.strip())
    if not values:
        raise ConfigError(f"[sweep] {key}: value list is empty")
    return key, values


def apply_sweep_value(base: RunConfig, key: str, raw: str) -> RunConfig:
    """Return ``base`` with one sweepable key replaced by a parsed value."""
    raw = raw.strip()
    try:
        if key == "seed":
            return replace(base, seed=int(raw))
        if key == "budget":
            return replace(base, budget=int(raw))
        if key == "n_initial_random":
            return replace(base, n_initial_random=int(raw))
        if key == "grid_resolution":
            return replace(base, grid_resolution=int(raw))
        if key == "strategy":
            return replace(base, strategy=Strategy(raw.lower()))
        if key == "include_desk_taps":
            return replace(base, include_desk_taps=_BOOLEAN[raw.lower()])
        if key == "lengthscale_sq":
            value = float(raw)
            return replace(
                base,
                surface_kernel=replace(base.surface_kernel,
                                       lengthscale_sq=value),
                weight_kernel=replace(base.weight_kernel,
                                      lengthscale_sq=value))
        if key.startswith(("surface_", "weight_")):
            kernel_name, param = key.split("_", 1)
            attr = f"{kernel_name}_kernel"
            kernel = replace(getattr(base, attr), **{param: float(raw)})
            return replace(base, **{attr: kernel})
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"[sweep] {key}: bad value {raw!r}: {exc}") from exc
    raise ConfigError(f"[sweep] key {key!r} is not sweepable")


def load_config(path) -> ExperimentConfig:
    """Parse and fully validate an experiment config file."""
    parser = configparser.ConfigParser(interpolation=None)
    text = Path(path).read_text(encoding="utf-8")
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    for section in parser.sections():
        if section not in SECTION_KEYS:
            raise ConfigError(
                f"unknown section [{section}]; valid sections: "
                f"{sorted(SECTION_KEYS)}")
        allowed = SECTION_KEYS[section]
        if allowed is None:
            continue
        for key in parser[section]:
            if key not in allowed:
                raise ConfigError(
                    f"unknown key '{key}' in [{section}]; did you mean "
                    f"'{_suggest(key, allowed)}'?")
    scene = _build_scene(dict(parser["scene"]) if parser.has_section("scene")
                         else {})
    run_config, seeds = _build_run(dict(parser["run"])
                                   if parser.has_section("run") else {})
    output = _build_output(dict(parser["output"])
                           if parser.has_section("output") else {})
    sweep = (_build_sweep(dict(parser["sweep"]))
             if parser.has_section("sweep") else None)
    if sweep is not None:
        for raw in sweep[1]:
            run_for_cell = apply_sweep_value(run_config, sweep[0], raw)
            try:
                run_for_cell.validate()
            except ValueError as exc:
                raise ConfigError(f"[sweep] {sweep[0]}={raw}: {exc}") from exc
    return ExperimentConfig(scene=scene, run=run_config, seeds=seeds,
                            output=output, sweep=sweep)
