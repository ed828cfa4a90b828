"""Scalar machinery shared by every module: the singular weight |x-xi|^alpha,
the step weight phi(x) = sqrt(x(1-x)), the normalization delta_n, guarded
function handles, and evaluation grids.

All operations are pure; value objects are frozen dataclasses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, SingularSample

# Evaluating a handle closer than this to its singular point is an error;
# the weight is ~0 there, so excluded points never matter for weighted sups.
SINGULARITY_GUARD = 1e-12

# Grids drop points this close to the singularity by default.
DEFAULT_EXCLUSION_RADIUS = 1e-9


@dataclass(frozen=True)
class WeightParams:
    """Interior singularity location xi in (0,1) and weight exponent alpha > 0."""

    xi: float
    alpha: float

    def __post_init__(self):
        if not (0.0 < self.xi < 1.0):
            raise DomainError(f"xi must lie in (0,1), got {self.xi}")
        if not self.alpha > 0.0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")


@dataclass(frozen=True)
class SmoothnessParams:
    """Step-weight exponent lambda in [0,1] and difference order r >= 1."""

    lam: float
    r: int

    def __post_init__(self):
        if not (0.0 <= self.lam <= 1.0):
            raise DomainError(f"lambda must lie in [0,1], got {self.lam}")
        if not (isinstance(self.r, int) and self.r >= 1):
            raise DomainError(f"r must be an integer >= 1, got {self.r}")


@dataclass(frozen=True)
class FunctionHandle:
    """A function on [0,1], possibly undefined at one interior point.

    Calling the handle (scalar or ndarray argument) raises SingularSample if
    any evaluation point lies within SINGULARITY_GUARD of ``singular_at``.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    singular_at: Optional[float] = None
    name: str = "f"

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        if self.singular_at is not None:
            if np.any(np.abs(arr - self.singular_at) < SINGULARITY_GUARD):
                raise SingularSample(
                    f"{self.name} evaluated within {SINGULARITY_GUARD:g} of its "
                    f"singular point {self.singular_at}"
                )
        out = self.evaluator(arr)
        return out if np.ndim(x) else float(out)


@dataclass(frozen=True)
class Grid:
    """Strictly increasing evaluation points in [0,1] with a singularity gap."""

    points: np.ndarray
    exclusion_radius: float = DEFAULT_EXCLUSION_RADIUS
    singular_at: Optional[float] = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or len(pts) == 0:
            raise DomainError("grid needs a one-dimensional, non-empty point set")
        if np.any(np.diff(pts) <= 0):
            raise DomainError("grid points must be strictly increasing")
        if pts[0] < 0.0 or pts[-1] > 1.0:
            raise DomainError("grid points must lie in [0,1]")
        if self.exclusion_radius < 0:
            raise DomainError("exclusion_radius must be >= 0")
        if self.singular_at is not None:
            pts = pts[np.abs(pts - self.singular_at) > self.exclusion_radius]
        object.__setattr__(self, "points", pts)


def weight_eval(w: WeightParams, x) -> float:
    """The singular weight |x - xi|^alpha; exactly 0 at x = xi."""
    return np.abs(np.asarray(x, dtype=float) - w.xi) ** w.alpha if np.ndim(x) \
        else abs(x - w.xi) ** w.alpha


def phi(x):
    """Step weight sqrt(x(1-x)); domain error outside [0,1]."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError("phi is defined on [0,1]")
    out = np.sqrt(arr * (1.0 - arr))
    return out if np.ndim(x) else float(out)


def delta_n(n: int, x):
    """Normalization phi(x) + n^{-1/2} (positive on all of [0,1])."""
    if n < 1:
        raise DomainError("n must be >= 1")
    out = phi(x) + n ** -0.5
    return out


_POLY_RE = re.compile(r"^poly_(\d+)$")


def preset_function(name: str, w: WeightParams, beta: float = 0.5) -> FunctionHandle:
    """Test-corpus functions.

    smooth      sin(pi x), no singularity
    poly_k      x^k, no singularity
    cusp        |x - xi|^beta, marked singular at xi
    jump_cusp   sign(x - xi) |x - xi|^beta, marked singular at xi

    Singular presets require alpha + beta > 0 so the weighted function
    extends continuously by 0 at xi.
    """
    m = _POLY_RE.match(name)
    if name == "smooth":
        return FunctionHandle(lambda x: np.sin(np.pi * x), None, name)
    if m:
        k = int(m.group(1))
        return FunctionHandle(lambda x, k=k: x ** k, None, name)
    if name in ("cusp", "jump_cusp"):
        if not w.alpha + beta > 0:
            raise DomainError(
                f"singular preset needs alpha + beta > 0, got {w.alpha} + {beta}"
            )
        xi = w.xi
        if name == "cusp":
            ev = lambda x: np.abs(x - xi) ** beta
        else:
            ev = lambda x: np.sign(x - xi) * np.abs(x - xi) ** beta
        return FunctionHandle(ev, xi, name)
    raise DomainError(f"unknown preset {name!r}")


def uniform_grid(m: int, w: Optional[WeightParams] = None,
                 exclusion_radius: float = DEFAULT_EXCLUSION_RADIUS) -> Grid:
    """m equispaced points on [0,1], minus the singularity gap."""
    return Grid(np.linspace(0.0, 1.0, m), exclusion_radius,
                None if w is None else w.xi)


def chebyshev_grid(m: int, w: Optional[WeightParams] = None,
                   exclusion_radius: float = DEFAULT_EXCLUSION_RADIUS) -> Grid:
    """m Chebyshev (first-kind root) points on (0,1), dense near the endpoints.

    Roots rather than extrema: the grid never contains 0 or 1 exactly, so
    quantities carrying phi^{-lambda} stay finite on it.
    """
    j = np.arange(1, m + 1)
    pts = np.sort((1.0 + np.cos((2 * j - 1) * np.pi / (2 * m))) / 2.0)
    return Grid(pts, exclusion_radius, None if w is None else w.xi)
