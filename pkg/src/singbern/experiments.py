"""Experiment harness: log-log rate fitting, the direct-rate and
rate-equivalence runs, per-lemma boundedness diagnostics, and deterministic
CSV emission.

The rate experiments pair the modulus order r with the combination of
q-1 terms (clamped to one term), so ``q`` here is the combination index,
one more than the term count. The combination/operator modules themselves keep q =
literal term count.

Error sups are taken over a Chebyshev-root grid (dense near the endpoints,
never containing 0, 1, or the guarded point). Each sup is paired with the
pointwise scale n^{-1/2} phi^{-lambda}(x) delta_n(x) evaluated at the
maximizing grid point; the CSV carries the full pointwise (n, x, error,
scale) table so every reported number is auditable.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .bernstein import basis_matrix
from .core import (FunctionHandle, SmoothnessParams, WeightParams,
                   chebyshev_grid, delta_n, phi, preset_function, weight_eval)
from .errors import ConfigError, DomainError, InsufficientData
from .modifier import SingularModifier, knots, lagrange_eval
from .modulus import ModulusQuery, weighted_modulus
from .operator import OperatorConfig, PreparedOperator

DEFAULT_N_LIST = (64, 128, 256, 512, 1024, 2048)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a run needs; defaults match the CLI."""

    preset: str = "cusp"
    xi: float = 0.5
    alpha: float = 1.0
    beta: float = 0.5
    lam: float = 0.0
    r: int = 2
    q: int = 2
    n_list: Tuple[int, ...] = DEFAULT_N_LIST
    grid_size: int = 201
    output_path: Optional[str] = None
    seed: int = 0

    def __post_init__(self):
        if self.grid_size < 51:
            raise ConfigError("grid_size must be >= 51")
        if len(self.n_list) == 0 or any(
                b <= a for a, b in zip(self.n_list, self.n_list[1:])):
            raise ConfigError("n_list must be non-empty and strictly increasing")
        if self.r < 1 or self.q < 1:
            raise ConfigError("r and q must be >= 1")
        w = self.weight()
        for n in self.n_list:
            knots(n, w)  # DomainTooSmall for degrees that cannot carry knots

    def weight(self) -> WeightParams:
        return WeightParams(self.xi, self.alpha)

    def function(self) -> FunctionHandle:
        return preset_function(self.preset, self.weight(), self.beta)

    def operator_terms(self) -> int:
        # rate pairing: q is the combination index; q-1 terms, at least one
        return max(self.q - 1, 1)


@dataclass(frozen=True)
class RateReport:
    """(scale, value) pairs with the fitted log-log line."""

    pairs: Tuple[Tuple[float, float], ...]
    slope: float
    intercept: float
    max_residual: float


def rate_fit(pairs) -> RateReport:
    """Least-squares line through (log scale, log value).

    Exact zeros are dropped; negative values or nonpositive scales are
    errors; fewer than two surviving points is InsufficientData.
    """
    pts = [(float(s), float(v)) for s, v in pairs]
    for s, v in pts:
        if s <= 0.0:
            raise DomainError(f"nonpositive scale {s} in rate_fit")
        if v < 0.0:
            raise DomainError(f"negative value {v} in rate_fit")
    kept = tuple((s, v) for s, v in pts if v > 0.0)
    if len(kept) < 2:
        raise InsufficientData(
            f"rate_fit needs >= 2 positive pairs, has {len(kept)}")
    ls = np.log([s for s, _ in kept])
    lv = np.log([v for _, v in kept])
    A = np.vstack([ls, np.ones_like(ls)]).T
    sol, *_ = np.linalg.lstsq(A, lv, rcond=None)
    slope, intercept = float(sol[0]), float(sol[1])
    resid = float(np.max(np.abs(lv - (slope * ls + intercept))))
    return RateReport(kept, slope, intercept, resid)


EXACT_REPRODUCTION_TOL = 1e-9


@dataclass(frozen=True)
class DirectResult:
    """Per-n sup errors/scales, pointwise rows, and the fitted exponent."""

    n_list: Tuple[int, ...]
    sup_errors: Tuple[float, ...]
    sup_scales: Tuple[float, ...]
    rows: List[Tuple[int, float, float, float]] = field(repr=False)
    report: Optional[RateReport] = None
    exact_reproduction: bool = False

    @property
    def slope(self) -> float:
        return math.nan if self.report is None else self.report.slope


def pointwise_scale(n: int, lam: float, xs: np.ndarray) -> np.ndarray:
    """n^{-1/2} phi^{-lambda}(x) delta_n(x) on grid points (0 < x < 1)."""
    return n ** -0.5 * phi(xs) ** (-lam) * delta_n(n, xs)


def run_direct(cfg: ExperimentConfig) -> DirectResult:
    """Sup weighted error per n, paired with the scale at the maximizing
    point, fitted on log-log axes; writes the pointwise CSV if requested."""
    w = cfg.weight()
    f = cfg.function()
    grid = chebyshev_grid(cfg.grid_size, w).points
    wall = weight_eval(w, grid)
    fvals = np.asarray(f(grid), dtype=float)
    rows: List[Tuple[int, float, float, float]] = []
    sup_e, sup_s = [], []
    for n in cfg.n_list:
        op = PreparedOperator(
            OperatorConfig(n, cfg.operator_terms(), cfg.r, w, cfg.lam), f)
        err = wall * np.abs(fvals - op.evaluate(grid))
        scale = pointwise_scale(n, cfg.lam, grid)
        rows.extend((n, float(x), float(e), float(s))
                    for x, e, s in zip(grid, err, scale))
        i = int(np.argmax(err))
        sup_e.append(float(err[i]))
        sup_s.append(float(scale[i]))
    exact = max(sup_e) <= EXACT_REPRODUCTION_TOL
    report = None if exact else rate_fit(zip(sup_s, sup_e))
    result = DirectResult(tuple(cfg.n_list), tuple(sup_e), tuple(sup_s),
                          rows, report, exact)
    if cfg.output_path:
        write_csv(cfg.output_path, ("n", "x", "error", "scale"), rows)
    return result


@dataclass(frozen=True)
class EquivalenceResult:
    """Error-side and modulus-side fitted exponents and their gap."""

    direct: DirectResult
    ts: Tuple[float, ...]
    omegas: Tuple[float, ...]
    mod_report: Optional[RateReport]
    degenerate: bool

    @property
    def slope_error(self) -> float:
        return self.direct.slope

    @property
    def slope_modulus(self) -> float:
        return math.nan if self.mod_report is None else self.mod_report.slope

    @property
    def gap(self) -> float:
        return abs(self.slope_error - self.slope_modulus)


def modulus_ladder(r: int, steps: int = 6) -> Tuple[float, ...]:
    """t-ladder 1/(8r), halved ``steps`` times in total.

    One octave below the admissible maximum 1/(4r): at t = 1/(4r) the
    one-sided pieces can straddle an interior singularity (a stencil arm
    lands on xi while the base point carries full weight), kinking the
    fitted exponent; one octave lower the ladder is in the scaling regime.
    """
    t0 = 1.0 / (8 * r)
    return tuple(t0 / 2 ** j for j in range(steps))


def run_equivalence(cfg: ExperimentConfig) -> EquivalenceResult:
    """Direct-rate exponent vs weighted-modulus exponent on the t-ladder."""
    direct = run_direct(dataclasses.replace(cfg, output_path=None))
    w = cfg.weight()
    f = cfg.function()
    s = SmoothnessParams(cfg.lam, cfg.r)
    ts = modulus_ladder(cfg.r)
    omegas = tuple(weighted_modulus(ModulusQuery(f, w, s, t)) for t in ts)
    degenerate = direct.exact_reproduction or max(omegas) <= 1e-10
    mod_report = None if degenerate else rate_fit(zip(ts, omegas))
    result = EquivalenceResult(direct, ts, omegas, mod_report, degenerate)
    if cfg.output_path:
        rows = [("error", n, s_, e) for n, s_, e in
                zip(direct.n_list, direct.sup_scales, direct.sup_errors)]
        rows += [("modulus", t, t, om) for t, om in zip(ts, omegas)]
        write_csv(cfg.output_path, ("kind", "param", "scale", "value"), rows)
    return result


def random_piecewise(seed: int, w: WeightParams,
                     normalize: bool = True) -> FunctionHandle:
    """Seeded random piecewise-cubic function with jumps away from xi,
    scaled so the weighted sup norm on the default grid is 1."""
    rng = np.random.default_rng(seed)
    nb = int(rng.integers(1, 3))
    breaks = []
    while len(breaks) < nb:
        b = float(rng.uniform(0.1, 0.9))
        if abs(b - w.xi) > 0.05 and all(abs(b - o) > 0.05 for o in breaks):
            breaks.append(b)
    breaks = sorted(breaks)
    coeffs = rng.uniform(-1.0, 1.0, size=(nb + 1, 4))

    def raw(x):
        xs = np.asarray(x, dtype=float)
        idx = np.searchsorted(np.asarray(breaks), xs, side="right")
        out = np.zeros_like(xs)
        for p in range(nb + 1):
            m = idx == p
            if np.any(m):
                out[m] = np.polyval(coeffs[p], xs[m])
        return out

    scale = 1.0
    if normalize:
        g = chebyshev_grid(201, w).points
        nrm = float(np.max(weight_eval(w, g) * np.abs(raw(g))))
        scale = 1.0 / nrm if nrm > 0 else 1.0
    return FunctionHandle(lambda x, s=scale: s * raw(x), None,
                          f"piecewise[{seed}]")


def grid_sup(w: WeightParams, values: np.ndarray, grid: np.ndarray) -> float:
    """Weighted sup norm max |w(x) v(x)| over a grid."""
    return float(np.max(weight_eval(w, grid) * np.abs(values)))


@dataclass(frozen=True)
class LemmaDiagnostics:
    """Per-lemma ratio tables and no-growth verdicts."""

    rows: List[Tuple[str, int, float, float, float]] = field(repr=False)
    verdicts: dict = field(default_factory=dict)


GROWTH_FACTOR = 2.0


def _verdict(ratios: Sequence[float]) -> bool:
    return max(ratios) <= GROWTH_FACTOR * ratios[0]


def run_lemma_diagnostics(cfg: ExperimentConfig) -> LemmaDiagnostics:
    """Ratio tables for the moment bound (L1), the weighted basis-mass decay
    (L2), the derivative bound (L3), stability (L4), and the patch error
    (L7); each with a bounded-growth verdict across n_list."""
    w = cfg.weight()
    grid = chebyshev_grid(cfg.grid_size, w).points
    rows: List[Tuple[str, int, float, float, float]] = []
    verdicts = {}

    inner = grid[(grid >= 0.1) & (grid <= 0.9)]
    for gamma in (0.0, 1.0, 2.0, 3.0, 4.0):
        ratios = []
        for n in cfg.n_list:
            P = basis_matrix(n, inner)
            K = np.arange(n + 1)
            mom = (P * np.abs(K[None, :] - n * inner[:, None]) ** gamma).sum(axis=1)
            ratio = float(np.max(mom / (n ** (gamma / 2) * phi(inner) ** gamma)))
            ratios.append(ratio)
            rows.append(("L1", n, gamma, ratio, ratio))
        verdicts[f"L1_gamma_{gamma:g}"] = _verdict(ratios)

    ratios = []
    for n in cfg.n_list:
        P = basis_matrix(n, grid)
        K = np.arange(n + 1)
        window = np.abs(K - n * w.xi) <= math.sqrt(n)
        a_n = float(np.max(weight_eval(w, grid) * P[:, window].sum(axis=1)))
        ratio = a_n * n ** (w.alpha / 2)
        ratios.append(ratio)
        rows.append(("L2", n, w.alpha, a_n, ratio))
    verdicts["L2"] = _verdict(ratios)

    f = random_piecewise(cfg.seed, w)
    fnorm = grid_sup(w, np.asarray(f(grid)), grid)
    r3, r4 = [], []
    for n in cfg.n_list:
        op = PreparedOperator(
            OperatorConfig(n, cfg.operator_terms(), cfg.r, w, cfg.lam), f)
        dnorm = grid_sup(w, np.asarray(op.derivative(cfg.r, grid)), grid)
        ratio3 = dnorm / (n ** cfg.r * fnorm)
        r3.append(ratio3)
        rows.append(("L3", n, float(cfg.r), dnorm, ratio3))
        bnorm = grid_sup(w, np.asarray(op.evaluate(grid)), grid)
        ratio4 = bnorm / fnorm
        r4.append(ratio4)
        rows.append(("L4", n, 0.0, bnorm, ratio4))
    verdicts["L3"] = _verdict(r3)
    verdicts["L4"] = _verdict(r4)

    g = preset_function("smooth", w)
    r7 = []
    for n in cfg.n_list:
        ratio = patch_error_ratio(n, w, cfg.r, cfg.lam, g)
        r7.append(ratio)
        rows.append(("L7", n, float(cfg.r), ratio, ratio))
    verdicts["L7"] = _verdict(r7)

    if cfg.output_path:
        write_csv(cfg.output_path, ("lemma", "n", "param", "value", "ratio"),
                  rows)
    return LemmaDiagnostics(rows, verdicts)


def patch_error_ratio(n: int, w: WeightParams, r: int, lam: float, g,
                      band_points: int = 101) -> float:
    """max over [x'_2, x'_3] of w(x)|g - H(g)| / (delta_n/(sqrt(n) phi^lam))^r."""
    mod = SingularModifier.build(n, w, r, g)
    x2, x3 = mod.knots[1], mod.knots[2]
    band = np.linspace(x2, x3, band_points)
    band = band[np.abs(band - w.xi) > 1e-9]
    err = weight_eval(w, band) * np.abs(np.asarray(g(band)) - lagrange_eval(mod, band))
    denom = (delta_n(n, band) / (math.sqrt(n) * phi(band) ** lam)) ** r
    return float(np.max(err / denom))


def write_csv(path: str, header: Sequence[str], rows) -> None:
    """Deterministic CSV: header, then rows; floats at 17 significant digits,
    UTF-8, LF line endings."""
    def fmt(v):
        if isinstance(v, str):
            return v
        if isinstance(v, (int, np.integer)):
            return str(int(v))
        return format(float(v), ".17g")

    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")
