"""Linear combinations sum_i C_i B_{n_i} with degrees n_i = m_i * base_n.

The coefficients solve sum_i C_i (1/n_i)^k = [k == 0] for k = 0..q-1, which
raises the approximation order by cancelling the low-order 1/n terms of the
operator's moment expansion. They are evaluated by the closed-form Lagrange
product C_i = prod_{j != i} n_i / (n_i - n_j) (the cardinal value at 0 for
nodes 1/n_i), exactly in rational arithmetic; the equivalent Vandermonde
solve is kept in the tests as an independent oracle since it is
ill-conditioned for larger q.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from .bernstein import basis_matrix, sample_uniform
from .errors import DomainError


@dataclass(frozen=True)
class CombinationScheme:
    """Base degree, multipliers m_0=1 < m_1 < ..., and solved coefficients."""

    base_n: int
    multipliers: Tuple[int, ...]
    coefficients: Tuple[float, ...]
    exact_coefficients: Tuple[Fraction, ...] = field(repr=False, default=())

    @property
    def q(self) -> int:
        return len(self.multipliers)

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(m * self.base_n for m in self.multipliers)


def solve_coefficients(base_n: int, q: int,
                       multipliers: Optional[Sequence[int]] = None) -> CombinationScheme:
    """Build the q-term scheme; coefficients depend only on the multipliers."""
    if not (isinstance(base_n, int) and base_n >= 1):
        raise DomainError("base_n must be an integer >= 1")
    if not (isinstance(q, int) and q >= 1):
        raise DomainError("q must be an integer >= 1")
    ms = tuple(multipliers) if multipliers is not None else tuple(range(1, q + 1))
    if len(ms) != q:
        raise DomainError(f"expected {q} multipliers, got {len(ms)}")
    if ms[0] != 1:
        raise DomainError("first multiplier must be 1 so that n_0 = base_n")
    if any(b <= a for a, b in zip(ms, ms[1:])):
        raise DomainError("multipliers must be strictly increasing")
    if len(set(ms)) != q:
        raise DomainError("duplicate multipliers make the system singular")
    exact = []
    for i in range(q):
        c = Fraction(1)
        for j in range(q):
            if j != i:
                c *= Fraction(ms[i], ms[i] - ms[j])
        exact.append(c)
    return CombinationScheme(base_n, ms, tuple(float(c) for c in exact), tuple(exact))


def combo_apply(s: CombinationScheme, f, x) -> float:
    """sum_i C_i B_{n_i}(f, x); x scalar or vector."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    tot = np.zeros(len(xs))
    for c, n_i in zip(s.coefficients, s.degrees):
        tot += c * (basis_matrix(n_i, xs) @ sample_uniform(f, n_i))
    return tot if np.ndim(x) else float(tot[0])


def moment_residual(s: CombinationScheme, k: int, x: float) -> float:
    """sum_i C_i B_{n_i}((. - x)^k, x), by brute-force summation.

    Zero (to rounding) for 1 <= k <= q-1; the k = q value documents where
    cancellation stops being guaranteed.
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    tot = 0.0
    for c, n_i in zip(s.coefficients, s.degrees):
        js = np.arange(n_i + 1)
        row = basis_matrix(n_i, np.array([x]))[0]
        tot += c * float(row @ (js / n_i - x) ** k)
    return tot
