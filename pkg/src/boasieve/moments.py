"""Exact integer moment constants for the binary Hamming space.

The sum of ``n`` independent uniform ±1 variables has k-th moment

    T_k = 2^{-n} * sum_{d=0}^{n} C(n,d) * (n-2d)^k,

always an integer, zero for odd ``k``, with ``T_0 = 1`` and ``T_2 = n``.
Scaled by the array cardinality ``M``, these integers are the right-hand
sides of the denominator-cleared moment system satisfied by every distance
distribution ``(w_0, ..., w_n)`` of an ``(n, M, tau)`` binary orthogonal
array:

    sum_i w_i * (n-2i)^k = M * T_k      for k = 0, ..., tau.

Keeping the system over plain integers removes all rational arithmetic from
the enumeration kernels.  The Krawtchouk polynomials of the binary scheme
(defined by the three-term recurrence ``(n-k) Q_{k+1} = n t Q_k - k Q_{k-1}``
with ``Q_0 = 1``, ``Q_1 = t``) are provided over exact rationals purely as a
cross-validation surface: ``T_k`` equals ``n^k`` times the degree-zero
coefficient of ``t^k`` expanded in the Krawtchouk basis, and the test suite
verifies both facts independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "binomial",
    "moment_constant",
    "krawtchouk_eval",
    "MomentTable",
    "KrawtchoukEvaluator",
]


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient C(n, k) for 0 <= k <= n <= 64."""
    if not 0 <= k <= n <= 64:
        raise ValueError(f"binomial({n}, {k}) outside supported range 0 <= k <= n <= 64")
    return math.comb(n, k)


def moment_constant(n: int, k: int) -> int:
    """The integer T_k = 2^{-n} * sum_d C(n,d) (n-2d)^k for 0 <= k <= n <= 16.

    T_k is the k-th moment of a sum of n independent ±1 variables, so the
    division by 2^n is always exact.
    """
    if not 0 <= k <= n <= 16:
        raise ValueError(f"moment_constant({n}, {k}) outside supported range 0 <= k <= n <= 16")
    total = sum(math.comb(n, d) * (n - 2 * d) ** k for d in range(n + 1))
    quotient, remainder = divmod(total, 1 << n)
    assert remainder == 0, "moment sum must be divisible by 2^n"
    return quotient


@dataclass(frozen=True)
class MomentTable:
    """Immutable table of the cleared moment constants T_0..T_n for one length."""

    n: int
    T: tuple[int, ...]

    @classmethod
    def for_length(cls, n: int) -> "MomentTable":
        return cls(n=n, T=tuple(moment_constant(n, k) for k in range(n + 1)))

    def __post_init__(self) -> None:
        if len(self.T) != self.n + 1:
            raise ValueError("table must hold exactly T_0..T_n")


@dataclass(frozen=True)
class KrawtchoukEvaluator:
    """Exact-rational evaluation of the binary Krawtchouk polynomials Q_k.

    Evaluation points are t = 1 - 2d/n for integer distances d, which is
    where the polynomials act on distance distributions.
    """

    n: int

    def values_at(self, d: int, up_to: int) -> tuple[Fraction, ...]:
        """Q_0(t), ..., Q_{up_to}(t) at t = 1 - 2d/n via the recurrence."""
        n = self.n
        if n < 1:
            raise ValueError("length must be positive")
        if not 0 <= d <= n:
            raise ValueError(f"distance {d} outside 0..{n}")
        if not 0 <= up_to <= n:
            raise ValueError(f"degree {up_to} outside 0..{n}")
        t = Fraction(n - 2 * d, n)
        values = [Fraction(1)]
        if up_to >= 1:
            values.append(t)
        for k in range(1, up_to):
            values.append((n * t * values[k] - k * values[k - 1]) / (n - k))
        return tuple(values)


def krawtchouk_eval(n: int, k: int, d: int) -> Fraction:
    """Value of Q_k at the grid point t = 1 - 2d/n, as an exact rational."""
    return KrawtchoukEvaluator(n).values_at(d, k)[k]
