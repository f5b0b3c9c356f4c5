"""Command-line front end: single evaluations and figure-data sweeps.

Exit codes: 0 success, 2 domain error, 3 parse error.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from . import bounds as B
from .copies import (
    EXACT,
    LOG,
    named_hamiltonian,
    noisy_strange,
    pairs_power,
    strange_copies,
    thermal_state,
    thermal_strange_pairs,
)
from .phase_space import all_points
from .wigner import mana, noisy_strange_state, sum_negativity, wigner_of_state

EXIT_OK, EXIT_DOMAIN, EXIT_PARSE = 0, 2, 3
OUTPUT_ENV = "WIGMAJ_OUTPUT_DIR"
FIGURES = ("fig1", "fig3a", "fig3b", "fig4", "supp_entropy_contour")
BOUND_METHODS = ("unital", "mana", "numeric", "renyi", "renyi-opt", "thermal", "thermal-np", "divergence")


class ParseError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


# --- value parsing ----------------------------------------------------------


def parse_number(text: str) -> Fraction:
    """Decimal or ``p/q`` literal as an exact ``Fraction``."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a number: {text!r}") from exc


def parse_list(text: str) -> list[Fraction]:
    return [parse_number(t) for t in str(text).split(",") if t.strip()]


def parse_grid(text: str) -> list[Fraction]:
    """``start:stop:step`` (inclusive) or a comma-separated list."""
    text = str(text).strip()
    if ":" not in text:
        vals = parse_list(text)
    else:
        parts = text.split(":")
        if len(parts) != 3:
            raise ParseError(f"grid must be start:stop:step, got {text!r}")
        start, stop, step = (parse_number(p) for p in parts)
        if step <= 0:
            raise ParseError("grid step must be positive")
        vals, k = [], 0
        while start + k * step <= stop:
            vals.append(start + k * step)
            k += 1
    if not vals:
        raise ParseError(f"empty grid {text!r}")
    return vals


def parse_ints(text: str) -> list[int]:
    out = []
    for v in parse_list(text):
        if v.denominator != 1 or v < 1:
            raise ParseError(f"expected positive integers, got {text!r}")
        out.append(int(v))
    return out


_MIX = re.compile(r"^A12-mix\(\s*([^,()]+)\s*,\s*([^,()]+)\s*\)$")


def parse_hamiltonian(text: str) -> np.ndarray:
    """Preset name, ``A12-mix(p,q)``, or 18 reals (row-major, real/imag interleaved)."""
    text = str(text).strip()
    if text in ("diag012", "A0", "A12"):
        return named_hamiltonian(text)
    m = _MIX.match(text)
    if m:
        p, q = (float(parse_number(g)) for g in m.groups())
        return named_hamiltonian("A12-mix", p, q)
    vals = [float(v) for v in parse_list(text)]
    if len(vals) != 18:
        raise ParseError(f"unknown Hamiltonian {text!r}: need a preset or 18 reals")
    return (np.array(vals[0::2]) + 1j * np.array(vals[1::2])).reshape(3, 3)


def read_config(path: str) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment, keys use dashes or underscores."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read config {path!r}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ParseError(f"{path}:{lineno}: empty key")
        out[key.replace("-", "_")] = value
    return out


# --- output -----------------------------------------------------------------


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def _json_safe(x):
    if isinstance(x, dict):
        return {k: _json_safe(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_safe(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, Fraction)):
        return float(x)
    return x


def render_table(columns, rows, fmt_name: str, meta: dict | None = None, footer=()) -> str:
    buf = io.StringIO()
    if fmt_name == "json":
        payload = {"columns": list(columns), "rows": [[_json_safe(v) for v in r] for r in rows]}
        if meta:
            payload["meta"] = _json_safe(meta)
        if footer:
            payload["summary"] = {k: _json_safe(v) for k, v in footer}
        buf.write(json.dumps(payload, indent=2) + "\n")
        return buf.getvalue()
    for k, v in (meta or {}).items():
        buf.write(f"# {k}={fmt(v)}\n")
    buf.write(",".join(columns) + "\n")
    for r in rows:
        buf.write(",".join(fmt(v) for v in r) + "\n")
    for k, v in footer:
        buf.write(f"# {k},{fmt(v)}\n")
    return buf.getvalue()


def _destination(opts, default_name: str) -> Path | None:
    if opts.output:
        return Path(opts.output)
    env = os.environ.get(OUTPUT_ENV)
    if env:
        return Path(env) / default_name
    return None


def emit(text: str, dest: Path | None, stdout) -> None:
    if dest is None:
        stdout.write(text)
        return
    dest.parent.mkdir(parents=True, exist_ok=True)
    with open(dest, "w", newline="\n") as fh:
        fh.write(text)


# --- option table and resolution -------------------------------------------

COMMON = {
    "output": (str, None),
    "format": (str, "csv"),
    "log_base": (str, "e"),
    "jobs": (int, 1),
}

OPTIONS = {
    "wigner": {"state": (str, "strange"), "eps": (parse_number, Fraction(0)), "file": (str, None), "exact": (bool, False)},
    "lorenz": {
        "n": (parse_ints, [1]),
        "eps": (parse_list, [Fraction(0)]),
        "reference": (str, "uniform"),
        "beta": (parse_number, Fraction(0)),
        "hamiltonian": (parse_hamiltonian, "diag012"),
        "mode": (str, EXACT),
    },
    "bound": {
        "eps": (parse_number, None),
        "eps_prime": (parse_number, Fraction(0)),
        "n": (parse_ints, [10]),
        "alpha": (parse_number, Fraction(10)),
        "beta": (parse_number, Fraction(0)),
        "hamiltonian": (parse_hamiltonian, "diag012"),
        "hamiltonian_out": (parse_hamiltonian, None),
        "reference": (str, "thermal"),
        "mode": (str, LOG),
    },
    "figure": {
        "eps_grid": (parse_grid, None),
        "beta_grid": (parse_grid, None),
        "alpha_grid": (parse_grid, None),
        "p_grid": (parse_grid, None),
        "q_grid": (parse_grid, None),
        "n": (parse_ints, [10]),
        "eps": (parse_number, Fraction(1, 10)),
        "eps_prime": (parse_number, Fraction(0)),
        "beta": (parse_number, Fraction(1, 5)),
    },
}

CHOICES = {
    "format": ("csv", "json"),
    "log_base": ("e", "2"),
    "state": ("strange", "mixed", "zero", "file"),
    "reference": ("uniform", "thermal"),
    "mode": (EXACT, LOG),
}


def _add_options(p: argparse.ArgumentParser, table: dict) -> None:
    for name, (typ, _) in table.items():
        flag = "--" + name.replace("_", "-")
        if typ is bool:
            p.add_argument(flag, dest=name, action="store_const", const="1", default=None)
        else:
            p.add_argument(flag, dest=name, default=None, metavar=name.upper())


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wigmaj", description="Wigner-negativity majorization toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "wigner": "Wigner distribution of a qutrit state",
        "lorenz": "Lorenz-curve elbows of noisy Strange copies",
        "bound": "evaluate one distillation bound",
        "figure": "figure-data sweeps as CSV",
    }
    for cmd, table in OPTIONS.items():
        p = sub.add_parser(cmd, help=helps[cmd])
        if cmd == "bound":
            p.add_argument("method", choices=BOUND_METHODS)
        if cmd == "figure":
            p.add_argument("figure", choices=FIGURES)
        p.add_argument("--config", default=None, help="flat key = value file; flags override it")
        _add_options(p, {**COMMON, **table})
    return parser


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Merge flags over config values over defaults, converting types."""
    table = {**COMMON, **OPTIONS[args.command]}
    config = read_config(args.config) if args.config else {}
    unknown = set(config) - set(table) - {"method", "figure"}
    if unknown:
        raise ParseError(f"unknown config keys: {', '.join(sorted(unknown))}")
    out = argparse.Namespace(command=args.command)
    for key in ("method", "figure"):
        if hasattr(args, key):
            setattr(out, key, getattr(args, key))
    for name, (typ, default) in table.items():
        raw = getattr(args, name)
        if raw is None:
            raw = config.get(name)
        if raw is None:
            value = default
            if typ is parse_hamiltonian and isinstance(default, str):
                value = parse_hamiltonian(default)
        elif typ is bool:
            value = str(raw).lower() in ("1", "true", "yes", "on")
        elif typ is int:
            try:
                value = int(raw)
            except ValueError as exc:
                raise ParseError(f"--{name} expects an integer") from exc
        else:
            value = typ(raw)
        if name in CHOICES and value is not None and value not in CHOICES[name]:
            raise ParseError(f"--{name.replace('_', '-')} must be one of {', '.join(CHOICES[name])}")
        setattr(out, name, value)
    if out.jobs < 1:
        raise ParseError("--jobs must be at least 1")
    return out


def _base(opts) -> float | None:
    return 2.0 if opts.log_base == "2" else None


# --- commands ---------------------------------------------------------------


def _load_state(path: str) -> np.ndarray:
    try:
        return np.loadtxt(path, dtype=complex, ndmin=2)
    except (OSError, ValueError) as exc:
        raise ParseError(f"cannot read density matrix from {path!r}: {exc}") from exc


def cmd_wigner(opts, stdout) -> int:
    if opts.state == "file":
        if not opts.file:
            raise ParseError("--state file needs --file PATH")
        rho = _load_state(opts.file)
        values = list(wigner_of_state(rho))
    elif opts.state == "strange":
        w, _ = noisy_strange(opts.eps if opts.exact else float(opts.eps))
        values = list(w)
    elif opts.state == "mixed":
        values = [Fraction(1, 9)] * 9 if opts.exact else [1 / 9] * 9
    else:
        values = [Fraction(1, 3) if q == 0 else Fraction(0) for q, _ in all_points(3, 1)]
        if not opts.exact:
            values = [float(v) for v in values]
    n = round(math.log(len(values), 3) / 2)
    pts = all_points(3, n)
    cols = ["q", "p"] if n == 1 else [f"q{i + 1}" for i in range(n)] + [f"p{i + 1}" for i in range(n)]
    cell = str if opts.exact else (lambda v: v)
    rows = [[*map(int, z), cell(v)] for z, v in zip(pts, values)]
    fw = np.array([float(v) for v in values])
    footer = [("sum_negativity", sum_negativity(fw)), ("mana", mana(fw, _base(opts)))]
    emit(render_table(cols + ["value"], rows, opts.format, footer=footer), _destination(opts, "wigner.csv"), stdout)
    return EXIT_OK


def _lorenz_pairs(opts, n: int, eps: Fraction):
    if opts.reference == "uniform":
        return strange_copies(eps if opts.mode == EXACT else float(eps), n, opts.mode)
    _, ctx = thermal_state(opts.hamiltonian, float(opts.beta))
    return pairs_power(thermal_strange_pairs(eps, ctx), n)


def cmd_lorenz(opts, stdout) -> int:
    combos = [(n, e) for n in opts.n for e in opts.eps]
    out = Path(opts.output) if opts.output else None
    env = os.environ.get(OUTPUT_ENV)
    as_dir = out is not None and (len(combos) > 1 or out.is_dir())
    for n, e in combos:
        curve = _lorenz_pairs(opts, n, e).lorenz()
        rows = [[x, l] for x, l in curve.elbows]
        meta = {"n": n, "eps": float(e), "reference": opts.reference}
        if opts.reference == "thermal":
            meta["beta"] = float(opts.beta)
        text = render_table(["x", "L"], rows, opts.format, meta=meta)
        name = f"lorenz_n{n}_eps{float(e)!r}.{opts.format}"
        if as_dir:
            emit(text, out / name, stdout)
        elif out is not None:
            emit(text, out, stdout)
        elif env:
            emit(text, Path(env) / name, stdout)
        else:
            emit(text, None, stdout)
    return EXIT_OK


def _need_eps(opts) -> Fraction:
    if opts.eps is None:
        raise ParseError("--eps is required")
    return opts.eps


def run_bound(opts) -> B.BoundResult:
    eps, ep = _need_eps(opts), opts.eps_prime
    m = opts.method
    if m == "unital":
        return B.bound_unital_inf(eps, ep)
    if m == "mana":
        return B.bound_mana_strange(eps, ep)
    if m == "numeric":
        if len(opts.n) != 1:
            raise ParseError("bound numeric takes a single --n")
        if opts.mode == EXACT:
            return B.bound_numeric(eps, ep, opts.n[0], EXACT)
        return B.bound_numeric(float(eps), float(ep), opts.n[0], LOG)
    if m == "renyi":
        return B.bound_renyi(eps, ep, opts.alpha)
    if m == "renyi-opt":
        return B.bound_renyi_optimized(eps, ep)
    h_out = opts.hamiltonian if opts.hamiltonian_out is None else opts.hamiltonian_out
    beta = float(opts.beta)
    if m == "thermal":
        _, c_in = thermal_state(opts.hamiltonian, beta)
        _, c_out = thermal_state(h_out, beta)
        return B.bound_thermal(eps, ep, c_in, c_out)
    if m == "thermal-np":
        return B.bound_thermal_no_processing(eps, ep, beta, opts.hamiltonian, h_out)
    # divergence
    w_in, _ = noisy_strange(float(eps))
    w_out, _ = noisy_strange(float(ep))
    if opts.reference == "uniform":
        r_in = r_out = np.full(9, 1 / 9)
    else:
        r_in = thermal_state(opts.hamiltonian, beta)[1].w_tau
        r_out = thermal_state(h_out, beta)[1].w_tau
    return B.bound_divergence(w_in, r_in, w_out, r_out, opts.alpha)


def cmd_bound(opts, stdout) -> int:
    res = run_bound(opts)
    d = _json_safe(res.as_dict())
    if opts.format == "json":
        text = json.dumps(d, indent=2) + "\n"
    else:
        keys = sorted(d["params"])
        row = [d["method"], d["rate"], "|".join(d["flags"])] + [d["params"][k] for k in keys]
        text = render_table(["method", "rate", "flags"] + keys, [row], "csv")
    emit(text, _destination(opts, f"bound_{opts.method}.{opts.format}"), stdout)
    return EXIT_OK


# --- figure sweeps (top-level workers so they pickle) ------------------------


def _fig1_row(args):
    eps, n = args
    e = float(eps)
    return [
        e,
        B.bound_unital_inf(e, 0.0).rate,
        B.bound_mana_strange(e, 0.0).rate,
        B.bound_renyi(e, 0.0, 10).rate,
        B.bound_renyi_optimized(e, 0.0).rate,
        B.bound_numeric(e, 0.0, n, LOG).rate,
        n,
    ]


def _fig3a_row(args):
    beta, eps = args
    H = named_hamiltonian("diag012")
    res = B.bound_thermal_no_processing(float(eps), 0.0, float(beta), H, H)
    return [float(beta), float(eps), res.rate, res.diagnostics["eps_star"], res.diagnostics["beta_star"]]


def _fig3b_row(args):
    beta, eps = args
    _, ctx = thermal_state(named_hamiltonian("diag012"), float(beta))
    return [float(beta), float(eps), B.bound_thermal(float(eps), 0.0, ctx, ctx).rate]


def _fig4_row(args):
    p, q, eps, ep, beta = args
    try:
        _, c_in = thermal_state(named_hamiltonian("A0"), beta)
        _, c_out = thermal_state(named_hamiltonian("A12-mix", p, q), beta)
        rate = B.bound_thermal(eps, ep, c_in, c_out).rate
    except ValueError:
        rate = math.nan
    return [p, q, rate]


def strange_entropy_root(eps: float) -> float:
    """The order ``alpha > 1`` where the noisy Strange entropy crosses zero."""
    w, _ = noisy_strange(float(eps))
    f = lambda a: B.renyi_entropy_continuous(w, a)
    return brentq(f, 1 + 1e-9, 1e3, xtol=1e-14, rtol=1e-14)


def _supp_rows(args):
    eps, alphas, base = args
    w, _ = noisy_strange(float(eps))
    rows = [[float(a), float(eps), B.renyi_entropy_continuous(w, float(a), base), 0] for a in alphas]
    rows.append([strange_entropy_root(float(eps)), float(eps), 0.0, 1])
    return rows


def _map(fn, items, jobs: int):
    if jobs <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def figure_table(opts):
    fig = opts.figure
    grid = lambda g, default: g if g is not None else parse_grid(default)
    if fig == "fig1":
        n = opts.n[0]
        eps = grid(opts.eps_grid, "1/50:21/50:1/50")
        cols = ["eps", "R_inf", "R_mana", "R_10", "R_renyi_opt", "R_num_n", "n"]
        return cols, _map(_fig1_row, [(e, n) for e in eps], opts.jobs), {"n": n, "eps_prime": 0}
    if fig in ("fig3a", "fig3b"):
        betas = grid(opts.beta_grid, "0:1:1/20")
        eps = grid(opts.eps_grid, "0:2/5:1/50")
        items = [(b, e) for b in betas for e in eps]
        if fig == "fig3a":
            cols = ["beta", "eps", "R", "eps_star", "beta_star"]
            return cols, _map(_fig3a_row, items, opts.jobs), {"hamiltonian": "diag012", "eps_prime": 0}
        cols = ["beta", "eps", "R"]
        return cols, _map(_fig3b_row, items, opts.jobs), {"hamiltonian": "diag012", "eps_prime": 0}
    if fig == "fig4":
        ps = grid(opts.p_grid, "0:1:1/20")
        qs = grid(opts.q_grid, "0:1:1/20")
        e, ep, beta = float(opts.eps), float(opts.eps_prime), float(opts.beta)
        items = [(float(p), float(q), e, ep, beta) for p in ps for q in qs if p + q <= 1]
        meta = {"eps": e, "eps_prime": ep, "beta": beta}
        return ["p", "q", "R"], _map(_fig4_row, items, opts.jobs), meta
    alphas = grid(opts.alpha_grid, "21/20:3:1/20")
    eps = grid(opts.eps_grid, "0:7/10:1/20")
    if any(a <= 1 for a in alphas):
        raise ValueError("alpha grid must lie above 1")
    blocks = _map(_supp_rows, [(e, alphas, _base(opts)) for e in eps], opts.jobs)
    rows = [r for blk in blocks for r in blk]
    return ["alpha", "eps", "H_alpha", "is_zero_contour"], rows, {"log_base": opts.log_base}


def cmd_figure(opts, stdout) -> int:
    cols, rows, meta = figure_table(opts)
    text = render_table(cols, rows, opts.format, meta=meta)
    emit(text, _destination(opts, f"{opts.figure}.{opts.format}"), stdout)
    return EXIT_OK


COMMANDS = {"wigner": cmd_wigner, "lorenz": cmd_lorenz, "bound": cmd_bound, "figure": cmd_figure}


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        opts = resolve(args)
        return COMMANDS[opts.command](opts, stdout)
    except ParseError as exc:
        print(f"wigmaj: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"wigmaj: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
