"""scikit-learn-style facade over the operator.

fit() consumes a callable (or FunctionHandle) rather than an (X, y) design
matrix: the operator must sample the target function at its own prescribed
abscissas (k/n_i and the patch nodes), so fitting from scattered samples
would be a different algorithm. predict() evaluates the fitted approximant
on an array of points in [0, 1].
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .core import FunctionHandle, WeightParams
from .errors import DomainError
from .operator import OperatorConfig, PreparedOperator


def _as_points(X) -> np.ndarray:
    pts = np.asarray(X, dtype=float)
    if pts.ndim == 2 and pts.shape[1] == 1:
        pts = pts[:, 0]
    if pts.ndim != 1:
        raise DomainError("expected a 1-d array of points (or an (m,1) column)")
    if np.any(pts < 0.0) or np.any(pts > 1.0):
        raise DomainError("evaluation points must lie in [0,1]")
    return pts


class SingularBernsteinApproximator(BaseEstimator):
    """Approximates a function with one interior singularity at ``xi``.

    Parameters
    ----------
    base_n : base degree of the combination (degrees are multiples of it).
    q : number of combination terms (q = 1 is the plain operator).
    r : patch degree and blend smoothness order.
    xi : singularity location in (0, 1).
    alpha : weight exponent, w(x) = |x - xi|^alpha.
    lam : step-weight exponent in [0, 1] (kept for reporting; the operator
        itself does not depend on it).
    """

    def __init__(self, base_n=256, q=1, r=2, xi=0.5, alpha=1.0, lam=0.0):
        self.base_n = base_n
        self.q = q
        self.r = r
        self.xi = xi
        self.alpha = alpha
        self.lam = lam

    def _config(self) -> OperatorConfig:
        return OperatorConfig(self.base_n, self.q, self.r,
                              WeightParams(self.xi, self.alpha), self.lam)

    def fit(self, f, y=None):
        """Prepare the operator for one target function (callable on [0,1])."""
        if not callable(f):
            raise DomainError("fit expects a callable or FunctionHandle")
        self.operator_ = PreparedOperator(self._config(), f)
        return self

    def predict(self, X):
        """Evaluate the fitted approximant at points X in [0,1]."""
        if not hasattr(self, "operator_"):
            raise NotFittedError("call fit(f) before predict")
        return np.asarray(self.operator_.evaluate(_as_points(X)), dtype=float)

    def weighted_error(self, X):
        """w(x) |f(x) - approximant(x)| at points X (outside the guard)."""
        if not hasattr(self, "operator_"):
            raise NotFittedError("call fit(f) before weighted_error")
        return np.asarray(self.operator_.weighted_error(_as_points(X)), dtype=float)
