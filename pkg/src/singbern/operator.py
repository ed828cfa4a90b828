"""The headline operator: the degree-raising combination applied to the
locally modified function, its r-th derivative, and the weighted pointwise
error.

One modifier F is built per (config, f) from base_n, and the SAME F feeds
every B_{n_i} in the combination. PreparedOperator caches the modifier and
all operator samples F(k/n_i); the module-level functions are convenience
wrappers that accept scalar or vector x.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bernstein import (N_MAX, basis_matrix, falling_factorial,
                        forward_diff_table)
from .combination import CombinationScheme, solve_coefficients
from .core import SINGULARITY_GUARD, FunctionHandle, WeightParams, weight_eval
from .errors import DomainError, SingularSample
from .modifier import SingularModifier, knots, modified_handle


@dataclass(frozen=True)
class OperatorConfig:
    """base_n, term count q, modifier width/order r, weight, and lambda."""

    base_n: int
    q: int
    r: int
    w: WeightParams
    lam: float = 0.0

    def __post_init__(self):
        if self.q < 1 or self.r < 1:
            raise DomainError("q and r must be >= 1")
        if not (0.0 <= self.lam <= 1.0):
            raise DomainError("lambda must lie in [0,1]")
        knots(self.base_n, self.w)  # raises DomainTooSmall early


class PreparedOperator:
    """Modifier, combination scheme, and cached samples for one (config, f)."""

    def __init__(self, cfg: OperatorConfig, f):
        self.cfg = cfg
        self.scheme: CombinationScheme = solve_coefficients(cfg.base_n, cfg.q)
        if max(self.scheme.degrees) > N_MAX:
            raise DomainError(
                f"combination degree {max(self.scheme.degrees)} exceeds the "
                f"basis table cap {N_MAX}")
        self.modifier: SingularModifier = SingularModifier.build(
            cfg.base_n, cfg.w, cfg.r, f)
        self.fbar: FunctionHandle = modified_handle(self.modifier, f)
        self._samples = {
            n_i: np.asarray(self.fbar(np.arange(n_i + 1) / n_i), dtype=float)
            for n_i in self.scheme.degrees
        }
        self._f = f

    def evaluate(self, x):
        """Operator value at x (scalar or vector)."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        tot = np.zeros(len(xs))
        for c, n_i in zip(self.scheme.coefficients, self.scheme.degrees):
            tot += c * (basis_matrix(n_i, xs) @ self._samples[n_i])
        return tot if np.ndim(x) else float(tot[0])

    def derivative(self, r: int, x):
        """r-th derivative of the operator at x, term by term."""
        if r > min(self.scheme.degrees):
            raise DomainError(
                f"derivative order {r} exceeds smallest degree "
                f"{min(self.scheme.degrees)}")
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        tot = np.zeros(len(xs))
        for c, n_i in zip(self.scheme.coefficients, self.scheme.degrees):
            diffs = forward_diff_table(self._samples[n_i], r)
            tot += c * falling_factorial(n_i, r) * (basis_matrix(n_i - r, xs) @ diffs)
        return tot if np.ndim(x) else float(tot[0])

    def weighted_error(self, x):
        """w(x) |f(x) - operator(x)|; x must sit outside the singularity guard."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(np.abs(xs - self.cfg.w.xi) < SINGULARITY_GUARD):
            raise SingularSample("error requested inside the singularity guard")
        fv = np.asarray(self._f(xs), dtype=float)
        out = weight_eval(self.cfg.w, xs) * np.abs(fv - self.evaluate(xs))
        return out if np.ndim(x) else float(out[0])


def approximate(cfg: OperatorConfig, f, x):
    """One-shot operator evaluation (builds the cache; loops should use
    PreparedOperator directly)."""
    return PreparedOperator(cfg, f).evaluate(x)


def approximate_derivative(cfg: OperatorConfig, f, r: int, x):
    """One-shot r-th derivative of the operator."""
    return PreparedOperator(cfg, f).derivative(r, x)


def weighted_error(cfg: OperatorConfig, f, x):
    """One-shot weighted pointwise error."""
    return PreparedOperator(cfg, f).weighted_error(x)
