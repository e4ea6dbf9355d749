"""Command line runner: ``ibc run <config>``, ``ibc list``, ``ibc check``.

Config files hold one ``key = value`` pair per line; ``#`` starts a
comment. ``experiment`` is required, ``seed`` defaults to 42 and ``out``
names the output directory (``IBC_OUT`` takes precedence). Lists are
comma separated. Each run writes ``<out>/<experiment>/results.csv`` and
``summary.json``.

Exit codes: 0 all claims pass, 1 a claim fails, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .experiments import EXPERIMENTS, ExperimentResult, run

DEFAULT_OUT = "ibc_out"


class ConfigError(ValueError):
    """Malformed or out-of-range configuration."""


@dataclass
class ExperimentConfig:
    experiment: str
    params: dict = field(default_factory=dict)
    out: str | None = None
    seed_defaulted: bool = True


def _positive(v):
    return v > 0


def _count(v):
    return v >= 1


def _prob(v):
    return 0 < v < 1


def _pow2(v):
    return float(v).is_integer() and v >= 1 and int(v) & (int(v) - 1) == 0


_RANGES = {
    "seed": (lambda v: v >= 0, "must be a nonnegative integer"),
    "eps": (_positive, "must be positive"),
    "t": (_positive, "must be positive"),
    "delta": (_prob, "must lie in (0, 1)"),
    "m": (_pow2, "must be a power of 2"),
    "bp_m": (lambda v: _pow2(v) and v >= 2, "must be a power of 2, at least 2"),
    "n": (_count, "must be >= 1"),
    "M": (lambda v: v >= 0, "must be >= 0"),
    "N": (lambda v: v >= 2, "must be >= 2"),
    "alpha": (lambda v: v > 0.5, "must exceed 1/2"),
    "gamma": (lambda v: 0 < v <= 1, "must lie in (0, 1]"),
    "r": (_positive, "must be positive"),
    "dim": (lambda v: v >= 2, "must be >= 2"),
    "bp_points": (lambda v: v >= 0, "must be >= 0"),
}


def _parse_scalar(text: str, kind, key: str, lineno: int):
    try:
        if kind is int:
            f = float(text)
            if not f.is_integer():
                raise ValueError
            return int(f)
        v = float(text)
        if not math.isfinite(v):
            raise ValueError
        return v
    except ValueError:
        raise ConfigError(f"line {lineno}: {key}: cannot read {text!r} as {kind.__name__}") from None


def _parse_value(text: str, default, key: str, lineno: int):
    if isinstance(default, list):
        kind = int if all(isinstance(v, int) for v in default) else float
        items = [s.strip() for s in text.split(",") if s.strip()]
        if not items:
            raise ConfigError(f"line {lineno}: {key}: empty list")
        return [_parse_scalar(s, kind, key, lineno) for s in items]
    return _parse_scalar(text, int if isinstance(default, int) else float, key, lineno)


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a ``key = value`` configuration.

    Examples
    --------
    >>> parse_config("experiment = bisection\\nn = 20").params["n"]
    [20]
    """
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        pairs.append((lineno, key, value))
    seen = {}
    for lineno, key, _ in pairs:
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r} (first on line {seen[key]})")
        seen[key] = lineno
    # range errors are reported even before the experiment is known
    for lineno, key, value in pairs:
        if key in _RANGES:
            try:
                vals = [float(x) for x in value.split(",") if x.strip()]
            except ValueError:
                continue
            if not all(_RANGES[key][0](x) for x in vals):
                raise ConfigError(f"line {lineno}: {key} {_RANGES[key][1]}")
    names = [v for _, k, v in pairs if k == "experiment"]
    if not names:
        raise ConfigError("missing 'experiment'")
    name = names[0]
    if name not in EXPERIMENTS:
        raise ConfigError(f"line {seen['experiment']}: unknown experiment {name!r}; see 'ibc list'")
    defaults = EXPERIMENTS[name].defaults
    cfg = ExperimentConfig(name)
    for lineno, key, value in pairs:
        if key == "experiment":
            continue
        if key == "out":
            cfg.out = value
            continue
        if key not in defaults:
            raise ConfigError(f"line {lineno}: unknown key {key!r} for experiment {name!r}")
        v = _parse_value(value, defaults[key], key, lineno)
        check = _RANGES.get(key)
        if check and not all(check[0](x) for x in (v if isinstance(v, list) else [v])):
            raise ConfigError(f"line {lineno}: {key} {check[1]}")
        cfg.params[key] = v
        if key == "seed":
            cfg.seed_defaulted = False
    cfg.params.setdefault("seed", defaults["seed"])
    return cfg


# --------------------------------------------------------------------------
# output


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def write_csv(path: Path, columns, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r.get(c, "")) for c in columns])


def _default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    return str(o)


def write_outputs(res: ExperimentResult, directory: Path, seed_defaulted: bool = False) -> Path:
    d = directory / res.experiment
    d.mkdir(parents=True, exist_ok=True)
    write_csv(d / "results.csv", res.columns, res.rows)
    for name, (cols, rows) in res.tables.items():
        write_csv(d / f"{name}.csv", cols, rows)
    info = dict(res.info)
    params = info.pop("params", {})
    summary = {
        "experiment": res.experiment,
        "criterion": res.criterion,
        "seed": params.get("seed"),
        "seed_defaulted": seed_defaulted,
        "params": params,
        "claims": [c.to_dict() for c in res.claims],
        "pass": res.passed,
        "info": info,
        "runtime_seconds": res.runtime,
    }
    with open(d / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, default=_default)
        fh.write("\n")
    return d


def _out_dir(cfg_out: str | None) -> Path:
    return Path(os.environ.get("IBC_OUT") or cfg_out or DEFAULT_OUT)


def run_experiment(cfg: ExperimentConfig) -> tuple[ExperimentResult, Path]:
    res = run(cfg.experiment, cfg.params)
    return res, write_outputs(res, _out_dir(cfg.out), cfg.seed_defaulted)


def _print_claims(res: ExperimentResult, stream) -> None:
    for c in res.claims:
        print(f"{res.experiment}: {c.line()}", file=stream)


# --------------------------------------------------------------------------
# entry point


def _cmd_run(args) -> int:
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"ibc: cannot read config: {exc}", file=sys.stderr)
        return 2
    try:
        cfg = parse_config(text)
    except ConfigError as exc:
        print(f"ibc: {args.config}: {exc}", file=sys.stderr)
        return 2
    try:
        res, d = run_experiment(cfg)
    except ValueError as exc:
        print(f"ibc: {cfg.experiment}: {exc}", file=sys.stderr)
        return 2
    _print_claims(res, sys.stdout)
    print(f"wrote {d}")
    return 0 if res.passed else 1


def _cmd_list(args) -> int:
    for name, e in EXPERIMENTS.items():
        print(f"{name:24s} {e.description}")
    return 0


def _cmd_check(args) -> int:
    out = _out_dir(None)
    ok = True
    for name in EXPERIMENTS:
        res = run(name)
        write_outputs(res, out)
        _print_claims(res, sys.stdout)
        ok &= res.passed
    print("all claims pass" if ok else "some claims FAIL")
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="ibc", description="Run worst-case error experiments.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="run one experiment from a config file")
    p.add_argument("config")
    p.set_defaults(fn=_cmd_run)
    sub.add_parser("list", help="list experiments").set_defaults(fn=_cmd_list)
    sub.add_parser("check", help="run every experiment with default parameters").set_defaults(fn=_cmd_check)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 2
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
