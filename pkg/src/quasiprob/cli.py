"""Command-line entry point: ``quasiprob <command> [options]``.

Settings come from command-line flags first, then ``quasiprob.json`` in the
working directory (or the file named by QUASIPROB_CONFIG), then built-in
defaults.  Exit status is 0 on success, 1 when a verification (or cmtest) fails and
2 for configuration or usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import mixtures as mx
from . import quasibayes as qb
from . import series as sr
from . import transforms as tr
from . import wigner as wg
from .core import GRID_POINTS, MASS_TOL, SERIES_ORDER, GridDensity, format_float, uniform_grid

__all__ = ["main", "load_config", "ConfigError"]

CONFIG_NAME = "quasiprob.json"
CONFIG_ENV = "QUASIPROB_CONFIG"
DEFAULTS = {"grid_points": GRID_POINTS, "mass_tol": MASS_TOL, "series_order": SERIES_ORDER}
SUITE_NAMES = ("series", "transforms", "mixtures", "quasibayes", "wigner", "all")
EMIT_OBJECTS = ("halfcoin", "dual", "feynman", "diffusion", "wigner", "linnik")
# functions of u > 0 for cmtest; catalog densities enter as p(sqrt(2u))
CM_FUNCTIONS = {
    "exp": lambda u: np.exp(-u),
    "exp_sqrt": lambda u: np.exp(-np.sqrt(u)),
    "rational": lambda u: 1.0 / (1.0 + u),
    "gaussian": lambda u: np.exp(-u * u),
}
DUAL_POINTS = 80001
DUAL_FAMILIES = {"normal": 12.0, "laplace": 40.0, "normal_mixture": 24.0}


class ConfigError(Exception):
    pass


def load_config(path: str | os.PathLike | None = None) -> dict:
    """Defaults overlaid with the config file, if any.

    An explicitly named file (argument or environment variable) must exist.
    """
    cfg = dict(DEFAULTS)
    explicit = path if path is not None else os.environ.get(CONFIG_ENV)
    p = Path(explicit) if explicit else Path(CONFIG_NAME)
    if not p.exists():
        if explicit:
            raise ConfigError(f"config file {str(p)!r} not found")
        return cfg
    try:
        doc = json.loads(p.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read {str(p)!r}: {e}") from e
    if not isinstance(doc, dict):
        raise ConfigError("config file must hold a JSON object")
    unknown = set(doc) - set(DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for key in ("grid_points", "series_order"):
        if key in doc:
            if not isinstance(doc[key], int) or isinstance(doc[key], bool) or doc[key] < 1:
                raise ConfigError(f"{key} must be a positive integer")
            cfg[key] = doc[key]
    if "mass_tol" in doc:
        v = doc["mass_tol"]
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not v > 0:
            raise ConfigError("mass_tol must be a positive number")
        cfg["mass_tol"] = float(v)
    return cfg


# ---------------------------------------------------------------------------
# Output helpers


def _rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([c if isinstance(c, (str, int, np.integer)) else format_float(c) for c in r])
    return buf.getvalue()


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


def _columns_to_json(columns: dict) -> str:
    doc = {k: [_json_value(x) if not isinstance(x, (np.integer, int)) else int(x)
               for x in (np.asarray(v).tolist())] for k, v in columns.items()}
    return json.dumps(doc, sort_keys=False) + "\n"


def _table(columns: dict, fmt: str) -> str:
    if fmt == "json":
        return _columns_to_json(columns)
    keys = list(columns)
    rows = zip(*(np.asarray(columns[k]).tolist() for k in keys))
    return _rows_to_csv(keys, rows)


def _write(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as e:
        raise ConfigError(f"cannot write {out!r}: {e}") from e


# ---------------------------------------------------------------------------
# Emitters


def emit_halfcoin(order: int, fmt: str) -> str:
    c = sr.halfcoin_coeffs(order).coeffs
    return _table({"index": np.arange(c.size), "coefficient": c}, fmt)


def emit_dual(family: str, grid: int, fmt: str, span: float = 8.0, src: str | None = None) -> str:
    """Dual of a catalog family, or of the abscissa,value CSV named by ``src``."""
    if src is not None:
        try:
            p = GridDensity.from_csv(src)
            d = tr.dual_density(p, decay_tol=None)
        except OSError as e:
            raise ConfigError(f"cannot read {src!r}: {e}") from e
        except (ValueError, IndexError, KeyError) as e:
            raise ConfigError(f"bad density file {src!r}: {e}") from e
        return _table({"abscissa": d.x, "value": d.values}, fmt)
    if family not in DUAL_FAMILIES:
        raise ConfigError(f"dual needs one of {', '.join(DUAL_FAMILIES)}; got {family!r}")
    x = uniform_grid(DUAL_FAMILIES[family], grid if grid % 2 else grid + 1)
    p = GridDensity(x, mx.catalog()[family].density(x))
    d = tr.dual_density(p)
    keep = np.abs(d.x) <= span
    return _table({"abscissa": d.x[keep], "value": d.values[keep]}, fmt)


def cm_function(name: str):
    if name in CM_FUNCTIONS:
        return CM_FUNCTIONS[name]
    cat = mx.catalog()
    if name in cat:
        fam = cat[name]
        return lambda u: fam.density(np.sqrt(2.0 * u))
    raise ConfigError(f"unknown function {name!r}; choose from "
                      f"{', '.join(list(CM_FUNCTIONS) + list(cat))}")


def emit_feynman(fmt: str) -> str:
    pmf = qb.total_probability(qb.feynman_table())
    return _table({"state": pmf.indices, "probability": pmf.weights}, fmt)


def emit_diffusion(init: str, t: float, grid: int, order: int, fmt: str) -> str:
    if init == "bump":
        sol = qb.bump_coeffs(order)
    elif init == "sine":
        sol = qb.SineSeriesSolution(np.r_[1.0, np.zeros(order - 1)])
    else:
        raise ConfigError(f"unknown initial condition {init!r}")
    if t < 0:
        raise ConfigError("--t must be nonnegative")
    x = np.linspace(0.0, math.pi, grid)
    return _table({"x": x, "P": sol(x, t)}, fmt)


def emit_wigner(state: str, grid: int | None, fmt: str) -> str:
    try:
        psi = wg.make_state(state) if grid is None else wg.make_state(
            state, wg.phase_grid(_state_half_width(state), grid))
    except ValueError as e:
        raise ConfigError(str(e)) from e
    W = wg.wigner_transform(psi, None if grid is None else wg.phase_grid(n=grid))
    if fmt == "json":
        doc = {"x": W.x.tolist(), "p": W.p.tolist(), "values": W.values.tolist()}
        return json.dumps(doc) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x\\p"] + [format_float(p) for p in W.p])
    for xi, row in zip(W.x, W.values):
        w.writerow([format_float(xi)] + [format_float(v) for v in row])
    return buf.getvalue()


def _state_half_width(state: str) -> float:
    name, _, arg = state.partition(":")
    if name == "squeezed" and arg:
        return max(wg.WIGNER_HALF_WIDTH, 12.0 * float(arg))
    return wg.WIGNER_HALF_WIDTH


def emit_linnik(alpha: float, grid: int, fmt: str, span: float = 10.0) -> str:
    if not 0 < alpha <= 2:
        raise ConfigError("--alpha must lie in (0, 2]")
    x = uniform_grid(span, grid)
    return _table({"abscissa": x, "value": mx.linnik_density(alpha, x)}, fmt)


# ---------------------------------------------------------------------------
# Argument parsing


def _common(p: argparse.ArgumentParser):
    p.add_argument("--out", help="output path (default: standard output)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--grid", type=int, help="number of grid points")
    p.add_argument("--order", type=int, help="series truncation order")
    p.add_argument("--tol", type=float, help="tolerance override")
    p.add_argument("--config", help=f"config file (default ./{CONFIG_NAME} or ${CONFIG_ENV})")


def _object_options(p: argparse.ArgumentParser):
    p.add_argument("--family", default="laplace", help="dual: " + ", ".join(DUAL_FAMILIES))
    p.add_argument("--state", default="gaussian", help="wigner: gaussian, hermite1, squeezed:SIGMA")
    p.add_argument("--alpha", type=float, default=1.0, help="linnik index in (0, 2]")
    p.add_argument("--init", default="bump", choices=("bump", "sine"), help="diffusion start")
    p.add_argument("--t", type=float, default=0.1, help="diffusion time")
    p.add_argument("--in", dest="src", help="dual: density CSV (abscissa,value) instead of --family")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="quasiprob", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run identity checks and print JSON lines")
    _common(v)
    v.add_argument("--suite", choices=SUITE_NAMES, default="all")

    e = sub.add_parser("emit", help="write a table for a named object")
    e.add_argument("object", choices=EMIT_OBJECTS)
    _common(e)
    _object_options(e)

    for name in EMIT_OBJECTS:
        s = sub.add_parser(name, help=f"shorthand for 'emit {name}'")
        _common(s)
        _object_options(s)

    c = sub.add_parser("cmtest", help="finite-difference complete monotonicity test")
    _common(c)
    c.add_argument("--fn", required=True,
                   help=f"{', '.join(CM_FUNCTIONS)} or a catalog family (tested as p(sqrt(2u)))")
    c.add_argument("--lo", type=float, default=0.1, help="left end of the u interval")
    c.add_argument("--hi", type=float, default=10.0, help="right end of the u interval")
    return ap


def _emit(obj: str, args, cfg) -> str:
    grid = args.grid if args.grid is not None else cfg["grid_points"]
    order = args.order if args.order is not None else cfg["series_order"]
    if grid < 3 or order < 1:
        raise ConfigError("--grid must be at least 3 and --order at least 1")
    if obj == "halfcoin":
        return emit_halfcoin(order, args.format)
    if obj == "dual":
        # the Laplace kink needs a fine primal grid for a 1e-7 accurate dual
        return emit_dual(args.family, args.grid or DUAL_POINTS, args.format, src=args.src)
    if obj == "feynman":
        return emit_feynman(args.format)
    if obj == "diffusion":
        # the sine series needs more terms than the pgf default near t = 0
        return emit_diffusion(args.init, args.t, grid, args.order or 256, args.format)
    if obj == "wigner":
        return emit_wigner(args.state, args.grid, args.format)
    if obj == "linnik":
        return emit_linnik(args.alpha, grid, args.format)
    raise ConfigError(f"unknown object {obj!r}")


def cmd_verify(args, cfg) -> int:
    from .verify import run_suite

    tol = args.tol
    checks = run_suite(args.suite, tol=tol, grid_points=args.grid or cfg["grid_points"],
                       mass_tol=cfg["mass_tol"],
                       series_order=args.order or cfg["series_order"])
    text = "".join(json.dumps(c.as_dict()) + "\n" for c in checks)
    _write(text, args.out)
    return 0 if all(c.passed for c in checks) else 1


def cmd_cmtest(args, cfg) -> int:
    f = cm_function(args.fn)
    order = args.order if args.order is not None else 8
    n = args.grid - 1 if args.grid else 2048
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            kw = {} if args.tol is None else {"rtol": args.tol}
            rep = tr.completely_monotone_test(f, (args.lo, args.hi), order=order, n=n, **kw)
    except ValueError as e:
        raise ConfigError(str(e)) from e
    doc = {"fn": args.fn, "order": rep.order, "pass": rep.passed,
           "first_violation": None if rep.first_violation is None else
           {"x": rep.first_violation[0], "difference_order": rep.first_violation[1]},
           "tol": rep.tol}
    _write(json.dumps(doc) + "\n", args.out)
    return 0 if rep.passed else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0


def _run(args) -> int:
    try:
        cfg = load_config(args.config)
        if args.tol is not None and not args.tol >= 0:
            raise ConfigError("--tol must be nonnegative")
        if args.command == "verify":
            return cmd_verify(args, cfg)
        if args.command == "cmtest":
            return cmd_cmtest(args, cfg)
        obj = args.object if args.command == "emit" else args.command
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            text = _emit(obj, args, cfg)
        _write(text, args.out)
        return 0
    except ConfigError as e:
        print(f"quasiprob: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
