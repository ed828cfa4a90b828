"""Command line interface.

Subcommands: psi, coeffs, approx, modulus, direct, equivalence, lemmas.
Shared flags: --xi --alpha --beta --lambda --r --q --n-list --grid --out
--seed, plus --config FILE with flat key=value lines (explicit flags
override the file; the file overrides built-in defaults).

Exit codes: 0 success, 2 invalid configuration, 3 DomainTooSmall,
4 InsufficientData.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional

from .combination import solve_coefficients
from .core import SmoothnessParams, WeightParams, preset_function
from .errors import (ConfigError, DomainError, DomainTooSmall,
                     InsufficientData, SingBernError)
from .experiments import (ExperimentConfig, run_direct, run_equivalence,
                          run_lemma_diagnostics, write_csv)
from .modifier import determinant_exact, smoother_system, solve_smoother
from .modulus import ModulusQuery, main_part_modulus, weighted_modulus
from .operator import OperatorConfig, PreparedOperator

_FLOAT_KEYS = {"xi", "alpha", "beta", "lambda", "x", "t"}
_INT_KEYS = {"r", "q", "n", "grid", "seed"}
_STR_KEYS = {"preset", "out", "n-list", "multipliers"}

_DEFAULTS = {
    "preset": "cusp", "xi": 0.5, "alpha": 1.0, "beta": 0.5, "lambda": 0.0,
    "r": 2, "q": 2, "n": 256, "x": 0.75, "t": 0.1, "grid": 201, "seed": 0,
    "n-list": "64,128,256,512,1024,2048", "multipliers": None, "out": None,
}


def _parse_config_file(path: str) -> dict:
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"bad config line (want key=value): {line!r}")
            key, val = (part.strip() for part in line.split("=", 1))
            if key not in _DEFAULTS:
                raise ConfigError(f"unknown config key {key!r}")
            values[key] = val
    return values


def _coerce(key: str, val):
    if val is None or not isinstance(val, str):
        return val
    try:
        if key in _FLOAT_KEYS:
            return float(val)
        if key in _INT_KEYS:
            return int(val)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key!r}: {val!r}") from exc
    return val


def _resolve(args: argparse.Namespace, keys) -> dict:
    file_vals = _parse_config_file(args.config) if args.config else {}
    out = {}
    for key in keys:
        attr = key.replace("-", "_")
        flag = getattr(args, attr, None)
        if flag is not None:
            out[key] = flag
        elif key in file_vals:
            out[key] = _coerce(key, file_vals[key])
        else:
            out[key] = _DEFAULTS[key]
    return out


def _parse_int_list(text: str):
    try:
        return tuple(int(tok) for tok in text.split(",") if tok)
    except ValueError as exc:
        raise ConfigError(f"bad integer list {text!r}") from exc


_HELP = {
    "xi": "singularity location in (0,1)",
    "alpha": "weight exponent, w(x) = |x-xi|^alpha",
    "beta": "preset exponent for cusp/jump_cusp",
    "lambda": "step-weight exponent in [0,1]",
    "r": "difference/patch order",
    "q": "combination index",
    "n": "base degree",
    "x": "evaluation point",
    "t": "modulus scale",
    "n-list": "comma-separated degree sweep",
    "grid": "norm grid size",
    "out": "CSV output path",
    "seed": "seed for randomized inputs",
    "preset": "smooth | poly_k | cusp | jump_cusp",
    "multipliers": "comma-separated degree multipliers (first must be 1)",
}


def _add(parser, *names):
    for name in names:
        key = name.lstrip("-")
        kind = float if key in _FLOAT_KEYS else int if key in _INT_KEYS else str
        parser.add_argument(name, type=kind, default=None,
                            dest=key.replace("-", "_"), help=_HELP.get(key))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="singbern", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("psi", "coeffs", "approx", "modulus", "direct",
                 "equivalence", "lemmas"):
        p = sub.add_parser(name)
        p.add_argument("--config", type=str, default=None)
        _add(p, "--xi", "--alpha", "--beta", "--lambda", "--r", "--q",
             "--n-list", "--grid", "--out", "--seed")
        if name == "coeffs":
            _add(p, "--multipliers")
        if name == "approx":
            _add(p, "--preset", "--n", "--x")
        if name == "modulus":
            _add(p, "--preset", "--t")
        if name in ("direct", "equivalence", "lemmas"):
            _add(p, "--preset")
    return parser


def cmd_psi(v) -> int:
    r = v["r"]
    poly = solve_smoother(r)
    print(f"r = {r}")
    for j, a in enumerate(poly.coeffs, start=1):
        print(f"a_{j} = {a}")
    A, _ = smoother_system(r)
    det = determinant_exact(A)
    expect = Fraction(1)
    for j in range(2, 2 * r + 1):
        fac = Fraction(1)
        for t in range(1, j + 1):
            fac *= t
        expect *= fac
    print(f"determinant = {det}")
    print(f"determinant_factorial_product = {expect}")
    print(f"determinant_match = {det == expect}")
    if v["out"]:
        rows = [(j, a.numerator, a.denominator)
                for j, a in enumerate(poly.coeffs, start=1)]
        write_csv(v["out"], ("index", "numerator", "denominator"), rows)
    return 0


def cmd_coeffs(v) -> int:
    mult = _parse_int_list(v["multipliers"]) if v["multipliers"] else None
    base_n = _parse_int_list(v["n-list"])[0] if v["n-list"] else 64
    s = solve_coefficients(base_n, v["q"], mult)
    print(f"q = {s.q}")
    print(f"base_n = {s.base_n}")
    print(f"multipliers = {','.join(str(m) for m in s.multipliers)}")
    for i, (c, ce) in enumerate(zip(s.coefficients, s.exact_coefficients)):
        print(f"C_{i} = {ce} = {c:.17g}")
    print(f"sum = {sum(s.exact_coefficients)}")
    print(f"abs_sum = {float(sum(abs(c) for c in s.exact_coefficients)):.17g}")
    for k in range(1, s.q):
        val = sum(ce * Fraction(1, n ** k)
                  for ce, n in zip(s.exact_coefficients, s.degrees))
        print(f"sum_inverse_power_{k} = {val}")
    if v["out"]:
        rows = [(i, m, n, f"{c:.17g}")
                for i, (m, n, c) in enumerate(
                    zip(s.multipliers, s.degrees, s.coefficients))]
        write_csv(v["out"], ("index", "multiplier", "degree", "coefficient"),
                  rows)
    return 0


def cmd_approx(v) -> int:
    w = WeightParams(v["xi"], v["alpha"])
    f = preset_function(v["preset"], w, v["beta"])
    cfg = OperatorConfig(v["n"], v["q"], v["r"], w, v["lambda"])
    op = PreparedOperator(cfg, f)
    x = v["x"]
    approx = op.evaluate(x)
    fx = f(x)
    print(f"x = {x:.17g}")
    print(f"f = {fx:.17g}")
    print(f"approx = {approx:.17g}")
    print(f"weighted_error = {op.weighted_error(x):.17g}")
    if v["out"]:
        write_csv(v["out"], ("x", "f", "approx", "weighted_error"),
                  [(x, fx, approx, op.weighted_error(x))])
    return 0


def cmd_modulus(v) -> int:
    w = WeightParams(v["xi"], v["alpha"])
    f = preset_function(v["preset"], w, v["beta"])
    q = ModulusQuery(f, w, SmoothnessParams(v["lambda"], v["r"]), v["t"])
    om = weighted_modulus(q)
    om_main = main_part_modulus(q)
    print(f"t = {v['t']:.17g}")
    print(f"omega = {om:.17g}")
    print(f"omega_main_part = {om_main:.17g}")
    if v["out"]:
        write_csv(v["out"], ("t", "omega", "omega_main_part"),
                  [(v["t"], om, om_main)])
    return 0


def _experiment_config(v) -> ExperimentConfig:
    return ExperimentConfig(
        preset=v["preset"], xi=v["xi"], alpha=v["alpha"], beta=v["beta"],
        lam=v["lambda"], r=v["r"], q=v["q"],
        n_list=_parse_int_list(v["n-list"]), grid_size=v["grid"],
        output_path=v["out"], seed=v["seed"])


def cmd_direct(v) -> int:
    res = run_direct(_experiment_config(v))
    for n, e, s in zip(res.n_list, res.sup_errors, res.sup_scales):
        print(f"n = {n}  sup_error = {e:.17g}  scale = {s:.17g}")
    print(f"exact_reproduction = {res.exact_reproduction}")
    if res.report is not None:
        print(f"fitted_exponent = {res.report.slope:.17g}")
        print(f"max_residual = {res.report.max_residual:.17g}")
    return 0


def cmd_equivalence(v) -> int:
    res = run_equivalence(_experiment_config(v))
    for t, om in zip(res.ts, res.omegas):
        print(f"t = {t:.17g}  omega = {om:.17g}")
    print(f"degenerate = {res.degenerate}")
    if not res.degenerate:
        print(f"slope_error = {res.slope_error:.17g}")
        print(f"slope_modulus = {res.slope_modulus:.17g}")
        print(f"gap = {res.gap:.17g}")
    return 0


def cmd_lemmas(v) -> int:
    res = run_lemma_diagnostics(_experiment_config(v))
    for lemma, n, param, value, ratio in res.rows:
        print(f"{lemma} n={n} param={param:.17g} value={value:.17g} "
              f"ratio={ratio:.17g}")
    for key in sorted(res.verdicts):
        print(f"verdict {key} = {'bounded' if res.verdicts[key] else 'GROWING'}")
    return 0


_COMMANDS = {
    "psi": cmd_psi, "coeffs": cmd_coeffs, "approx": cmd_approx,
    "modulus": cmd_modulus, "direct": cmd_direct,
    "equivalence": cmd_equivalence, "lemmas": cmd_lemmas,
}

_KEYS = {
    "psi": ("r", "out"),
    "coeffs": ("q", "multipliers", "n-list", "out"),
    "approx": ("preset", "xi", "alpha", "beta", "lambda", "r", "q", "n", "x",
               "out"),
    "modulus": ("preset", "xi", "alpha", "beta", "lambda", "r", "t", "out"),
    "direct": ("preset", "xi", "alpha", "beta", "lambda", "r", "q", "n-list",
               "grid", "out", "seed"),
    "equivalence": ("preset", "xi", "alpha", "beta", "lambda", "r", "q",
                    "n-list", "grid", "out", "seed"),
    "lemmas": ("preset", "xi", "alpha", "beta", "lambda", "r", "q", "n-list",
               "grid", "out", "seed"),
}


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        values = _resolve(args, _KEYS[args.command])
        return _COMMANDS[args.command](values)
    except DomainTooSmall as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except InsufficientData as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (ConfigError, DomainError, SingBernError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
