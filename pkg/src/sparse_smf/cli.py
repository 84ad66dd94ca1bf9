"""Command-line front end: ``run``, ``count`` and ``presets``.

Config files are INI. ``[experiment]`` holds the experiment fields (and
optionally ``preset``/``system``/``coefficients``), every other section is
named after an algorithm and overrides its parameters::

    [experiment]
    preset = system1-paper
    runs = 100
    seed = 7
    algorithms = sm-pnlms, lcsm-nlms2

    [lcsm-nlms2]
    epsilon = 1e-3

Exit codes: 0 success, 2 configuration error, 3 runtime error,
1 count mismatch.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import dataclasses
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from ._arith import OpCount
from .algorithms import ALGORITHMS, get_algorithm
from .baselines import L0NlmsConfig, PnlmsConfig
from .complexity import counted_update, predicted_count
from .core import FilterConfig, FilterState, Sample
from .sim import (
    DEFAULT_NOISE_VARIANCE,
    SYSTEMS,
    ExperimentConfig,
    SparseSystem,
    mse_to_db,
    preset_experiment,
    run_experiment,
    steady_state_mse,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

PRESETS = {f"{name}-paper": name for name in SYSTEMS}
DEFAULT_ALGORITHMS = ("sm-pnlms", "sm-l0-nlms", "lcsm-nlms2")

_EXPERIMENT_KEYS = {
    "runs": int,
    "iterations": int,
    "noise_variance": float,
    "initial_weight": float,
    "steady_state_fraction": float,
    "seed": int,
}


class ConfigError(Exception):
    pass


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _default_algorithm_config(name: str, order: int, noise_variance: float):
    gamma_bar = math.sqrt(5 * noise_variance)
    algo = get_algorithm(name)
    if algo.config_type is FilterConfig:
        eps = 1e-4 if algo.discards else 0.0
        return FilterConfig(order=order, gamma_bar=gamma_bar, epsilon=eps, delta=1e-12)
    if algo.config_type is PnlmsConfig:
        return PnlmsConfig(order=order, gamma_bar=gamma_bar, delta=1e-12)
    return L0NlmsConfig(order=order, gamma_bar=gamma_bar, delta=1e-12)


def _parse_number(section: str, key: str, raw: str, kind=float):
    try:
        return kind(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: cannot parse {raw!r} as {kind.__name__}") from None


def load_config(path=None, *, preset=None, seed=None, runs=None, algorithms=None) -> ExperimentConfig:
    """Build an :class:`ExperimentConfig` from an INI file and/or a preset.

    Command-line overrides win over file values. Raises :class:`ConfigError`.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                parser.read_file(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        except configparser.Error as exc:
            raise ConfigError(f"malformed config {path}: {exc}") from None
    exp = dict(parser["experiment"]) if parser.has_section("experiment") else {}
    if path is not None and not parser.has_section("experiment"):
        raise ConfigError(f"{path}: missing [experiment] section")

    preset = preset or exp.pop("preset", None)
    exp.pop("preset", None)
    if "coefficients" in exp:
        raw = exp.pop("coefficients")
        coeffs = [_parse_number("experiment", "coefficients", v.strip()) for v in raw.split(",") if v.strip()]
        if not coeffs:
            raise ConfigError("[experiment] coefficients: empty")
        system = SparseSystem(coeffs, exp.pop("system", "custom"))
    elif "system" in exp:
        try:
            system = SparseSystem.preset(exp.pop("system"))
        except KeyError as exc:
            raise ConfigError(str(exc.args[0])) from None
    elif preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; known: {', '.join(PRESETS)}")
        system = SparseSystem.preset(PRESETS[preset])
    else:
        raise ConfigError("no system given: set preset, system or coefficients")

    fields = {}
    for key, kind in _EXPERIMENT_KEYS.items():
        if key in exp:
            fields[key] = _parse_number("experiment", key, exp.pop(key), kind)
    names = exp.pop("algorithms", None)
    if exp:
        raise ConfigError(f"[experiment] unknown keys: {', '.join(sorted(exp))}")
    if seed is not None:
        fields["seed"] = seed
    if runs is not None:
        fields["runs"] = runs
    if algorithms is not None:
        names = algorithms
    if names is None:
        names = ",".join(s for s in parser.sections() if s != "experiment") or ",".join(DEFAULT_ALGORITHMS)
    name_list = [n.strip().lower() for n in names.split(",") if n.strip()]

    noise = fields.get("noise_variance", DEFAULT_NOISE_VARIANCE)
    algos = {}
    for name in name_list:
        try:
            algo = get_algorithm(name)
        except KeyError as exc:
            raise ConfigError(str(exc.args[0])) from None
        cfg = _default_algorithm_config(algo.name, system.order, noise)
        if parser.has_section(algo.name):
            valid = {f.name for f in dataclasses.fields(cfg)} - {"order"}
            changes = {}
            for key, raw in parser[algo.name].items():
                if key not in valid:
                    raise ConfigError(f"[{algo.name}] unknown key {key!r}; valid: {', '.join(sorted(valid))}")
                changes[key] = _parse_number(algo.name, key, raw)
            try:
                cfg = dataclasses.replace(cfg, **changes)
            except ValueError as exc:
                raise ConfigError(f"[{algo.name}] {exc}") from None
        algos[algo.name] = cfg

    try:
        return ExperimentConfig(system=system, algorithms=algos, **fields)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def config_echo(cfg: ExperimentConfig) -> list[tuple[str, str]]:
    items = [
        ("system", cfg.system.name),
        ("coefficients", ",".join(_fmt(c) for c in cfg.system.coefficients)),
        ("runs", _fmt(cfg.runs)),
        ("iterations", _fmt(cfg.iterations)),
        ("noise_variance", _fmt(cfg.noise_variance)),
        ("input", "white gaussian, zero mean, unit variance, tapped delay line"),
        ("initial_weight", _fmt(cfg.initial_weight)),
        ("steady_state_fraction", _fmt(cfg.steady_state_fraction)),
        ("seed", _fmt(cfg.seed)),
        ("algorithms", ",".join(cfg.algorithms)),
    ]
    for name, acfg in cfg.algorithms.items():
        for f in dataclasses.fields(acfg):
            items.append((f"{name}.{f.name}", _fmt(getattr(acfg, f.name))))
    return items


def write_results(cfg: ExperimentConfig, results: dict, out_dir: Path) -> dict[str, Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "mse_curve": out_dir / "mse_curve.csv",
        "summary": out_dir / "summary.csv",
        "manifest": out_dir / "manifest.txt",
    }
    names = list(results)
    with open(paths["mse_curve"], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        header = ["iteration"]
        for n in names:
            header += [f"{n}_mse", f"{n}_mse_db"]
        w.writerow(header)
        curves = [(results[n].mse_curve, mse_to_db(results[n].mse_curve)) for n in names]
        for k in range(cfg.iterations):
            row = [k]
            for lin, db in curves:
                row += [_fmt(lin[k]), _fmt(db[k])]
            w.writerow(row)
    with open(paths["summary"], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([
            "algorithm", "update_rate", "steady_state_mse", "steady_state_mse_db",
            "mean_active_count", "active_count_mode", "add_sub", "mul", "div",
        ])
        for n in names:
            r = results[n]
            ss = steady_state_mse(r, cfg.steady_state_fraction)
            mode = r.active_mode()
            w.writerow([
                n, _fmt(r.update_rate), _fmt(ss), _fmt(float(mse_to_db(ss))),
                _fmt(r.mean_active()), "" if mode is None else mode,
                r.ops.add_sub, r.ops.mul, r.ops.div,
            ])
    lines = [("version", __version__), ("timestamp", datetime.now(timezone.utc).isoformat(timespec="seconds"))]
    lines += config_echo(cfg)
    lines += [(f"output.{k}", str(p)) for k, p in paths.items()]
    with open(paths["manifest"], "w", encoding="utf-8") as fh:
        fh.writelines(f"{k}={v}\n" for k, v in lines)
    return paths


def cmd_run(args) -> int:
    try:
        cfg = load_config(args.config, preset=args.preset, seed=args.seed, runs=args.runs, algorithms=args.algorithms)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        results = run_experiment(cfg)
        paths = write_results(cfg, results, Path(args.out))
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    for n, r in results.items():
        ss = steady_state_mse(r, cfg.steady_state_fraction)
        print(f"{n:12s} update_rate={r.update_rate:.4f} steady_mse_db={float(mse_to_db(ss)):.2f} "
              f"mean_active={r.mean_active():.2f}")
    print(f"wrote {', '.join(str(p) for p in paths.values())}")
    return EXIT_OK


def probe_count(algorithm: str, order: int) -> OpCount:
    """Measured cost of one fired update with every tap active."""
    algo = get_algorithm(algorithm)
    cfg = _default_algorithm_config(algo.name, order, DEFAULT_NOISE_VARIANCE)
    if algo.config_type is FilterConfig:
        cfg = dataclasses.replace(cfg, epsilon=0.0)
    rng = np.random.default_rng(order)
    w = np.full(order + 1, 0.1)
    x = rng.standard_normal(order + 1)
    # error of 1 + gamma_bar always fires
    sample = Sample(x, float(w @ x) + 1.0 + cfg.gamma_bar)
    _, outcome, ops = counted_update(algo.name, FilterState(w), sample, cfg)
    assert outcome.updated
    return ops


def cmd_count(args) -> int:
    try:
        algo = get_algorithm(args.algorithm)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_CONFIG
    if args.order < 0:
        print("error: order must be >= 0", file=sys.stderr)
        return EXIT_CONFIG
    predicted = predicted_count(algo.name, args.order)
    measured = probe_count(algo.name, args.order)
    match = predicted == measured
    print(f"algorithm {algo.name} order {args.order}")
    print("predicted add_sub={} mul={} div={}".format(*predicted.as_tuple()))
    print("measured add_sub={} mul={} div={}".format(*measured.as_tuple()))
    if algo.config_type is FilterConfig:
        print("match" if match else "MISMATCH")
        return EXIT_OK if match else EXIT_MISMATCH
    print("match" if match else "differs from closed form (reported only)")
    return EXIT_OK


def cmd_presets(args) -> int:
    for preset, system in PRESETS.items():
        cfg = preset_experiment(system)
        print(f"[{preset}]")
        for k, v in config_echo(cfg):
            print(f"{k}={v}")
        print()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sparse-smf", description="Sparse set-membership adaptive filtering experiments.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a Monte-Carlo experiment and write CSV results")
    r.add_argument("--config", type=Path, help="INI experiment config")
    r.add_argument("--preset", choices=sorted(PRESETS), help="start from a built-in preset")
    r.add_argument("--out", required=True, type=Path, help="output directory")
    r.add_argument("--seed", type=int)
    r.add_argument("--runs", type=int)
    r.add_argument("--algorithms", help="comma-separated algorithm names")
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("count", help="closed-form vs measured operation count of one update")
    c.add_argument("algorithm", help=", ".join(ALGORITHMS))
    c.add_argument("order", type=int)
    c.set_defaults(func=cmd_count)

    s = sub.add_parser("presets", help="list built-in experiment presets")
    s.set_defaults(func=cmd_presets)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run" and args.config is None and args.preset is None:
        print("config error: give --config or --preset", file=sys.stderr)
        return EXIT_CONFIG
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
