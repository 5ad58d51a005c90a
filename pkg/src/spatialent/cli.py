"""Command-line front end: temperature sweeps and oracle verification runs.

    spatialent sweep --n-mean 10 --t-min 0.1 --t-max 100 --t-steps 50 --grid log --out lam.csv
    spatialent verify --k 3 --out report.json

A ``--config FILE`` of ``key = value`` lines (keys as the long flag names,
with or without leading dashes) sets defaults; explicit flags win.

Exit codes: 0 success, 1 a sweep row or certificate failed, 2 bad config.
"""
import argparse
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import csv
import json
import logging
import math
import os
import sys

import numpy as np

from .entanglement import lambda_lower_bound
from .verify import DEFAULT_N_VALUES, DEFAULT_TEMPERATURES, run_verification

log = logging.getLogger("spatialent")

COLUMNS = ["T", "mu", "K_max", "lambda", "chi_norm_sq", "condensate_fraction", "tail_bound", "status"]
EXACT_COLUMN = "lambda_exact"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    N_mean: float
    T_min: float
    T_max: float
    T_steps: int
    grid: str = "log"
    eps_tail: float = 1e-8
    split: float = 0.0
    out: str | None = None
    format: str = "csv"
    workers: int = 1
    with_exact: bool = False
    resume: bool = False

    def __post_init__(self):
        if not (self.N_mean > 0 and math.isfinite(self.N_mean)):
            raise ConfigError("n-mean must be positive")
        if not (self.T_min > 0 and math.isfinite(self.T_min)):
            raise ConfigError("t-min must be positive")
        if not (self.T_max >= self.T_min and math.isfinite(self.T_max)):
            raise ConfigError("t-max must be >= t-min")
        if self.T_steps < 1:
            raise ConfigError("t-steps must be >= 1")
        if not (0.0 < self.eps_tail < 1.0):
            raise ConfigError("eps-tail must lie in (0, 1)")
        if self.grid not in ("linear", "log"):
            raise ConfigError("grid must be 'linear' or 'log'")
        if self.format not in ("csv", "jsonl"):
            raise ConfigError("format must be 'csv' or 'jsonl'")
        if self.split != 0.0:
            raise ConfigError("the negativity bound is defined for the symmetric split; use --split 0")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    def temperatures(self):
        if self.T_steps == 1:
            return [float(self.T_min)]
        if self.grid == "log":
            return [float(t) for t in np.geomspace(self.T_min, self.T_max, self.T_steps)]
        return [float(t) for t in np.linspace(self.T_min, self.T_max, self.T_steps)]


def fmt(x):
    """Fixed float formatting: 17 significant digits, round-trips exactly."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "nan"
    return format(float(x), ".17g")


def compute_row(T, N_mean, eps_tail, with_exact=False):
    try:
        r = lambda_lower_bound(T, N_mean, eps_tail)
        row = {
            "T": T, "mu": r.mu, "K_max": r.K_max, "lambda": r.lambda_,
            "chi_norm_sq": r.chi_norm_sq, "condensate_fraction": r.condensate_fraction,
            "tail_bound": r.tail_bound, "status": "ok",
        }
        if with_exact:
            row[EXACT_COLUMN] = r.lambda_exact
    except Exception as exc:  # recorded in-row, the sweep continues
        row = {c: None for c in COLUMNS}
        row["T"] = T
        row["status"] = f"error: {type(exc).__name__}: {exc}".replace("\n", " ")
        if with_exact:
            row[EXACT_COLUMN] = None
    return row


def _row_task(args):
    return compute_row(*args)


class RowWriter:
    def __init__(self, fh, fmt_name, columns):
        self.fh = fh
        self.format = fmt_name
        self.columns = columns
        if fmt_name == "csv":
            self._csv = csv.writer(fh, lineterminator="\n")
            self._csv.writerow(columns)

    def write(self, row):
        if self.format == "csv":
            self._csv.writerow([row[c] if c == "status" else fmt(row[c]) for c in self.columns])
        else:
            rec = {c: row[c] for c in self.columns}
            for c in self.columns:
                v = rec[c]
                if isinstance(v, float) and math.isnan(v):
                    rec[c] = None
            self.fh.write(json.dumps(rec) + "\n")
        self.fh.flush()


def read_rows(path, fmt_name):
    """Rows of an existing sweep output, keyed by formatted T."""
    rows = {}
    if not path or not os.path.exists(path):
        return rows
    with open(path, newline="") as fh:
        if fmt_name == "csv":
            for rec in csv.DictReader(fh):
                row = {k: _parse(k, v) for k, v in rec.items()}
                rows[fmt(row["T"])] = row
        else:
            for line in fh:
                if line.strip():
                    row = json.loads(line)
                    rows[fmt(row["T"])] = row
    return rows


def _parse(key, value):
    if key == "status":
        return value
    if key == "K_max":
        return None if value == "nan" else int(value)
    return float(value)


def run_sweep(config, stream=None):
    """Compute lambda on the temperature grid, writing rows in grid order.

    With ``config.resume`` rows already present (status ok) in the output
    file are reused instead of recomputed.
    """
    columns = COLUMNS + ([EXACT_COLUMN] if config.with_exact else [])
    temps = config.temperatures()
    done = read_rows(config.out, config.format) if config.resume else {}
    done = {k: v for k, v in done.items() if v.get("status") == "ok" and all(c in v for c in columns)}
    todo = [T for T in temps if fmt(T) not in done]

    if config.out:
        fh = open(config.out, "w", newline="")
    else:
        fh = stream if stream is not None else sys.stdout
    rows = []
    try:
        writer = RowWriter(fh, config.format, columns)
        tasks = [(T, config.N_mean, config.eps_tail, config.with_exact) for T in todo]
        if config.workers > 1 and len(tasks) > 1:
            pool = ProcessPoolExecutor(max_workers=config.workers)
            computed = pool.map(_row_task, tasks)
        else:
            pool = None
            computed = map(_row_task, tasks)
        try:
            for T in temps:
                key = fmt(T)
                row = done[key] if key in done else next(computed)
                if row["status"] != "ok":
                    log.warning("T=%s failed: %s", key, row["status"])
                writer.write(row)
                rows.append(row)
        finally:
            if pool is not None:
                pool.shutdown()
    finally:
        if config.out:
            fh.close()
    return rows


def read_config_file(path):
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            values[key.lstrip("-").replace("-", "_")] = value
    return values


def _float_list(text):
    return [float(x) for x in text.replace(",", " ").split()]


def build_parser():
    parser = argparse.ArgumentParser(prog="spatialent", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="key = value file supplying defaults")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="lambda(T) at fixed mean particle number")
    sw.add_argument("--n-mean", type=float, required=True)
    sw.add_argument("--t-min", type=float, required=True)
    sw.add_argument("--t-max", type=float)
    sw.add_argument("--t-steps", type=int, default=1)
    sw.add_argument("--grid", choices=["linear", "log"], default="log")
    sw.add_argument("--eps-tail", type=float, default=1e-8)
    sw.add_argument("--split", type=float, default=0.0)
    sw.add_argument("--out")
    sw.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    sw.add_argument("--workers", type=int, default=1)
    sw.add_argument("--with-exact", action="store_true",
                    help="append the exact coherence-vector lambda as an extra column")
    sw.add_argument("--resume", action="store_true", help="reuse finished rows from --out")

    vf = sub.add_parser("verify", help="oracle certificates at small truncation")
    vf.add_argument("--k", type=int, default=3)
    vf.add_argument("--temperatures", type=_float_list,
                    default=list(DEFAULT_TEMPERATURES))
    vf.add_argument("--n-values", type=_float_list, default=list(DEFAULT_N_VALUES))
    vf.add_argument("--out")
    vf.add_argument("--corrupt-gram-scale", type=float, default=None, help=argparse.SUPPRESS)
    return parser


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    values = read_config_file(known.config)
    for action_group in parser._subparsers._group_actions:
        for name, subparser in action_group.choices.items():
            defaults = {}
            for action in subparser._actions:
                if action.dest in values:
                    raw = values[action.dest]
                    if action.nargs == 0:
                        defaults[action.dest] = raw.lower() in ("1", "true", "yes", "on")
                    elif action.type is not None:
                        defaults[action.dest] = action.type(raw)
                    else:
                        defaults[action.dest] = raw
                    action.required = False
            subparser.set_defaults(**defaults)


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
    except (OSError, ConfigError, ValueError) as exc:
        print(f"spatialent: bad config: {exc}", file=sys.stderr)
        return 2
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")

    if args.command == "sweep":
        try:
            config = SweepConfig(
                N_mean=args.n_mean, T_min=args.t_min,
                T_max=args.t_max if args.t_max is not None else args.t_min,
                T_steps=args.t_steps, grid=args.grid, eps_tail=args.eps_tail,
                split=args.split, out=args.out, format=args.format, workers=args.workers,
                with_exact=args.with_exact, resume=args.resume,
            )
        except ConfigError as exc:
            print(f"spatialent: bad config: {exc}", file=sys.stderr)
            return 2
        rows = run_sweep(config)
        return 0 if all(r["status"] == "ok" for r in rows) else 1

    if not 1 <= args.k <= 6:
        print("spatialent: bad config: --k must be in 1..6", file=sys.stderr)
        return 2
    report = run_verification(args.k, args.temperatures, args.n_values, args.corrupt_gram_scale)
    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    for c in report["checks"]:
        if not c["pass"]:
            log.error("certificate %s failed: %s", c["name"], c)
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
