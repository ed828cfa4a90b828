"""The local modification that makes the operator blind to the singularity:
a C^{2r} smoothstep psi solved exactly from a rational linear system, a
degree-r Lagrange patch H built from samples left of xi, and the blended
function F(x) that equals f away from xi and H across it.

Geometry (all quantities quantized to the k/n grid by integer floor):

    knots   x'_1 < x'_2 < x'_3 < x'_4   at offsets -2, -1, +1, +2 sqrt(n)/n
    nodes   x_1 > x_2 > ... > x_{r+1}   at offsets ((r-1)/2 + i) sqrt(n)/n
                                        below xi (for r = 1 the nodes are
                                        exactly the two left knots)

The blend is

    F(x) = f(x) (1 - u1 + u1 u2) + u1 (1 - u2) H(x),
    u1 = psi((x - x'_1)/(x'_2 - x'_1)),  u2 = psi((x - x'_3)/(x'_4 - x'_3)),

so F == f on [0, x'_1] u [x'_4, 1] (same evaluation path, bitwise), F == H on
[x'_2, x'_3], and f is never evaluated inside [x'_2, x'_3].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

from .core import FunctionHandle, WeightParams
from .errors import DomainError, DomainTooSmall


def _falling(p: int, m: int) -> int:
    """p (p-1) ... (p-m+1); equals 1 for m = 0."""
    out = 1
    for t in range(m):
        out *= p - t
    return out


def smoother_system(r: int) -> Tuple[List[List[Fraction]], List[Fraction]]:
    """The (2r+1)x(2r+1) rational system for the smoothstep coefficients.

    Unknowns a_1..a_{2r+1} multiply x^{2r+1}..x^{4r+1}. Row 0 imposes
    psi(1) = 1; row m (m = 1..2r) imposes psi^{(m)}(1) = 0.
    """
    m = 2 * r + 1
    A = [[Fraction(_falling(2 * r + 1 + j, row)) for j in range(m)]
         for row in range(m)]
    b = [Fraction(1)] + [Fraction(0)] * (m - 1)
    return A, b


def solve_exact(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> List[Fraction]:
    """Gaussian elimination over the rationals (small dense systems)."""
    m = len(b)
    M = [list(row) + [b[i]] for i, row in enumerate(A)]
    for c in range(m):
        piv = next((i for i in range(c, m) if M[i][c] != 0), None)
        if piv is None:
            raise DomainError("singular system")
        M[c], M[piv] = M[piv], M[c]
        pv = M[c][c]
        M[c] = [v / pv for v in M[c]]
        for i in range(m):
            if i != c and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * bb for a, bb in zip(M[i], M[c])]
    return [M[i][m] for i in range(m)]


def determinant_exact(A: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant by fraction-free-ish elimination with pivot tracking."""
    m = len(A)
    M = [list(row) for row in A]
    det = Fraction(1)
    for c in range(m):
        piv = next((i for i in range(c, m) if M[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        inv = M[c][c]
        for i in range(c + 1, m):
            if M[i][c] != 0:
                f = M[i][c] / inv
                M[i] = [a - f * bb for a, bb in zip(M[i], M[c])]
    return det


@dataclass(frozen=True)
class SmootherPoly:
    """Coefficients a_1..a_{2r+1} of x^{2r+1}..x^{4r+1}, exact rationals,
    plus the binomial weights of the equivalent nonnegative tail form used
    for evaluation."""

    r: int
    coeffs: Tuple[Fraction, ...]
    _tail_weights: np.ndarray = field(repr=False, default=None)

    def derivative_at_one(self, i: int) -> Fraction:
        """psi^{(i)}(1), exact."""
        return sum(a * _falling(2 * self.r + 1 + j, i)
                   for j, a in enumerate(self.coeffs))


_SMOOTHER_CACHE: dict = {}


def solve_smoother(r: int) -> SmootherPoly:
    """Solve the rational system once per r; exact coefficients."""
    if not (isinstance(r, int) and r >= 1):
        raise DomainError("r must be an integer >= 1")
    if r not in _SMOOTHER_CACHE:
        A, b = smoother_system(r)
        coeffs = tuple(solve_exact(A, b))
        m = 4 * r + 1
        weights = np.array([float(math.comb(m, j))
                            for j in range(2 * r + 1, m + 1)])
        _SMOOTHER_CACHE[r] = SmootherPoly(r, coeffs, weights)
    return _SMOOTHER_CACHE[r]


def smoother_eval(p: SmootherPoly, t):
    """psi(t): 0 for t <= 0, 1 for t >= 1, the polynomial in between.

    Evaluated as the binomial tail sum_{j=2r+1}^{4r+1} C(4r+1,j) t^j
    (1-t)^{4r+1-j}, which is identical to the monomial form but has only
    nonnegative terms: Horner on the raw coefficients (which reach ~1e13
    at r = 8) loses ~coeff*eps to cancellation and breaks the [0,1] range
    and monotonicity at the 1e-12 level.
    """
    ts = np.asarray(t, dtype=float)
    m = 4 * p.r + 1
    inside = (ts > 0.0) & (ts < 1.0)
    ti = np.where(inside, ts, 0.5)
    acc = np.zeros_like(ti)
    for w, j in zip(p._tail_weights, range(2 * p.r + 1, m + 1)):
        acc += w * ti ** j * (1.0 - ti) ** (m - j)
    out = np.where(ts <= 0.0, 0.0, np.where(ts >= 1.0, 1.0,
                                            np.where(inside, acc, 0.0)))
    return out if np.ndim(t) else float(out)


def interp_nodes(n: int, w: WeightParams, r: int) -> np.ndarray:
    """Patch nodes x_i = floor(n xi - ((r-1)/2 + i) sqrt(n)) / n, i = 1..r+1.

    Strictly decreasing, all below xi, spaced ~ 1/sqrt(n) (quantized to the
    k/n grid). For r = 1 they coincide with the two left knots.
    """
    if r < 1:
        raise DomainError("r must be >= 1")
    root = math.sqrt(n)
    nodes = []
    for i in range(1, r + 2):
        idx = math.floor(n * w.xi - ((r - 1) / 2 + i) * root)
        if idx <= 0:
            raise DomainTooSmall(
                f"n={n} too small for nodes at xi={w.xi}, r={r}: "
                f"need n*xi > ((r-1)/2 + r + 1) sqrt(n)")
        nodes.append(idx / n)
    arr = np.array(nodes)
    if np.any(np.diff(arr) >= 0):
        raise DomainTooSmall(f"nodes not strictly decreasing at n={n}")
    return arr


def knots(n: int, w: WeightParams) -> Tuple[float, float, float, float]:
    """Blend knots floor(n xi -+ {2,1} sqrt(n)) / n, strictly increasing in (0,1)."""
    root = math.sqrt(n)
    idx = [math.floor(n * w.xi - 2 * root), math.floor(n * w.xi - root),
           math.floor(n * w.xi + root), math.floor(n * w.xi + 2 * root)]
    ks = tuple(i / n for i in idx)
    if not (0.0 < ks[0] and ks[3] < 1.0 and ks[0] < ks[1] < ks[2] < ks[3]):
        raise DomainTooSmall(
            f"n={n} too small for knots at xi={w.xi}: got {ks}")
    return ks


@dataclass(frozen=True)
class SingularModifier:
    """Frozen geometry + cached node samples defining x -> F(x) for one f."""

    n: int
    w: WeightParams
    r: int
    nodes: np.ndarray
    node_values: np.ndarray
    knots: Tuple[float, float, float, float]
    smoother: SmootherPoly

    @classmethod
    def build(cls, n: int, w: WeightParams, r: int, f) -> "SingularModifier":
        nds = interp_nodes(n, w, r)
        ks = knots(n, w)
        vals = np.asarray(f(nds), dtype=float)
        return cls(n, w, r, nds, vals, ks, solve_smoother(r))


def lagrange_eval(m: SingularModifier, x):
    """The patch H(x) = sum_i f(x_i) l_i(x) over the r+1 cached nodes."""
    xs = np.asarray(x, dtype=float)
    out = np.zeros_like(xs)
    nds, fv = m.nodes, m.node_values
    for i in range(len(nds)):
        li = np.ones_like(xs)
        for j in range(len(nds)):
            if j != i:
                li = li * (xs - nds[j]) / (nds[i] - nds[j])
        out = out + fv[i] * li
    return out if np.ndim(x) else float(out)


def modified_eval(m: SingularModifier, f, x):
    """F(x): f outside [x'_1, x'_4], H on [x'_2, x'_3], smooth blends between.

    f is only evaluated where its blend factor is nonzero, so the band
    [x'_2, x'_3] around the singularity never touches f.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    x1, x2, x3, x4 = m.knots
    out = np.empty_like(xs)
    outer = (xs <= x1) | (xs >= x4)
    if np.any(outer):
        out[outer] = f(xs[outer])
    mid = ~outer
    if np.any(mid):
        xm = xs[mid]
        u1 = smoother_eval(m.smoother, (xm - x1) / (x2 - x1))
        u2 = smoother_eval(m.smoother, (xm - x3) / (x4 - x3))
        wf = 1.0 - u1 + u1 * u2
        wh = u1 * (1.0 - u2)
        fx = np.zeros_like(xm)
        nz = wf != 0.0
        if np.any(nz):
            fx[nz] = f(xm[nz])
        out[mid] = wf * fx + wh * lagrange_eval(m, xm)
    return out if np.ndim(x) else float(out[0])


def modified_handle(m: SingularModifier, f) -> FunctionHandle:
    """F as an unguarded handle (defined everywhere, including at xi)."""
    return FunctionHandle(lambda xs: modified_eval(m, f, xs), None, "F_n")
