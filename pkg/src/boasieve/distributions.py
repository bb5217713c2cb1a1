"""Feasible distance distributions of binary orthogonal arrays.

Every distance distribution ``w = (w_0, ..., w_n)`` of an ``(n, M, tau)``
binary orthogonal array with respect to a point of the ambient space is a
nonnegative integer solution of the cleared moment system

    sum_i w_i = M,      sum_i w_i * (n-2i)^k = M * T_k   (k = 1..tau),

where the odd-k right-hand sides vanish.  This module enumerates exactly
that solution set and maintains it as three related collections: the
distributions with respect to internal points (kind ``P``, ``w_0 >= 1``),
external points (kind ``Q``, ``w_0 = 0``) and their union (kind ``W``).

Enumeration is a depth-first search over the coordinates, assigning the
two ends inward (``w_n, w_0, w_{n-1}, w_1, ...``) so the large-coefficient
positions are pinned first by the high-degree equations.  At each node the
surviving value range for the next coordinate is computed by intersecting,
per moment equation, the interval the remaining partial sum can still
reach (remaining total times the extreme coefficients over the unassigned
indices).  Once only ``tau + 1`` coordinates remain the residual system is
square with distinct Vandermonde nodes, so those coordinates are solved in
closed form through a precomputed integer adjugate instead of being
branched on.  A brute-force oracle with no moment pruning at all
cross-checks the kernel on small instances.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator

from .moments import moment_constant

__all__ = [
    "Distribution",
    "ParameterTriple",
    "DistributionSet",
    "KINDS",
    "mirror",
    "classify",
    "enumerate_initial",
    "brute_force_enumerate",
]

# A distance distribution is a plain tuple of n+1 nonnegative counts.
Distribution = tuple[int, ...]

KINDS = ("P", "Q", "W")

MAX_LENGTH = 16
MAX_CARDINALITY = 1 << 14

# Refuse brute force beyond the composition count of the largest supported
# instance (n = 6, M = 100).
_BRUTE_FORCE_LIMIT = math.comb(106, 6)


@dataclass(frozen=True, order=True)
class ParameterTriple:
    """Array parameters (length, cardinality, strength) with index M / 2^tau."""

    n: int
    M: int
    tau: int

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_LENGTH:
            raise ValueError(f"length {self.n} outside 1..{MAX_LENGTH}")
        if not 1 <= self.tau <= self.n:
            raise ValueError(f"strength {self.tau} outside 1..{self.n}")
        if self.M < 1:
            raise ValueError("cardinality must be positive")
        if self.M % (1 << self.tau):
            raise ValueError(f"2^{self.tau} does not divide M={self.M}")

    @property
    def index(self) -> int:
        return self.M >> self.tau

    def left(self) -> "ParameterTriple":
        """Parameters after deleting one column: (n-1, M, tau)."""
        return ParameterTriple(self.n - 1, self.M, self.tau)

    def derived(self) -> "ParameterTriple":
        """Parameters of either half after splitting on a column: (n-1, M/2, tau-1)."""
        return ParameterTriple(self.n - 1, self.M // 2, self.tau - 1)

    def label(self) -> str:
        return f"({self.n},{self.M},{self.tau})"


def mirror(w: Distribution) -> Distribution:
    """The reversed distribution (w_n, ..., w_0), i.e. after complementing all bits."""
    return w[::-1]


def classify(w: Distribution) -> str:
    """Kind of the reference point: ``P`` if it occurs as a row (w_0 >= 1), else ``Q``."""
    return "P" if w[0] >= 1 else "Q"


@dataclass(frozen=True)
class DistributionSet:
    """An immutable, canonically sorted set of distributions for one triple."""

    triple: ParameterTriple
    kind: str
    members: tuple[Distribution, ...]
    _index: frozenset = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        n, M = self.triple.n, self.triple.M
        previous: Distribution | None = None
        for w in self.members:
            if previous is not None and not w > previous:
                raise ValueError("members must be strictly increasing (sorted, deduplicated)")
            previous = w
            if len(w) != n + 1:
                raise ValueError(f"distribution {w} has wrong length for n={n}")
            if any(c < 0 for c in w) or sum(w) != M:
                raise ValueError(f"distribution {w} is not a composition of M={M}")
            if self.kind == "P" and w[0] < 1:
                raise ValueError("P-set member must have w_0 >= 1")
            if self.kind == "Q" and w[0] != 0:
                raise ValueError("Q-set member must have w_0 = 0")
        object.__setattr__(self, "_index", frozenset(self.members))

    @classmethod
    def build(
        cls, triple: ParameterTriple, kind: str, members: Iterable[Distribution]
    ) -> "DistributionSet":
        canonical = tuple(sorted({tuple(w) for w in members}))
        return cls(triple=triple, kind=kind, members=canonical)

    def __contains__(self, w: object) -> bool:
        return w in self._index

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Distribution]:
        return iter(self.members)

    def to_json_dict(self) -> dict:
        return {
            "n": self.triple.n,
            "M": self.triple.M,
            "tau": self.triple.tau,
            "kind": self.kind,
            "distributions": [list(w) for w in self.members],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str | dict) -> "DistributionSet":
        data = json.loads(text) if isinstance(text, str) else text
        triple = ParameterTriple(n=data["n"], M=data["M"], tau=data["tau"])
        members = tuple(tuple(int(c) for c in w) for w in data["distributions"])
        return cls(triple=triple, kind=data["kind"], members=members)


def _moment_targets(n: int, M: int, tau: int) -> tuple[int, ...]:
    return tuple(M * moment_constant(n, k) for k in range(1, tau + 1))


def _exact_inverse(matrix: list[list[int]]) -> tuple[int, list[list[int]]]:
    """Determinant and integer adjugate of a nonsingular integer matrix."""
    from fractions import Fraction

    size = len(matrix)
    aug = [
        [Fraction(matrix[r][c]) for c in range(size)]
        + [Fraction(1 if r == c else 0) for c in range(size)]
        for r in range(size)
    ]
    det = Fraction(1)
    for col in range(size):
        pivot_row = next(r for r in range(col, size) if aug[r][col] != 0)
        if pivot_row != col:
            aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
            det = -det
        det *= aug[col][col]
        inv_pivot = 1 / aug[col][col]
        aug[col] = [v * inv_pivot for v in aug[col]]
        for r in range(size):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    det_int = int(det)
    adjugate = [[int(det * aug[r][size + c]) for c in range(size)] for r in range(size)]
    return det_int, adjugate


@lru_cache(maxsize=256)
def _all_solutions(n: int, M: int, tau: int) -> tuple[Distribution, ...]:
    """All nonnegative integer solutions of the cleared moment system, sorted."""
    K = tau
    coeff = [[(n - 2 * i) ** k for i in range(n + 1)] for k in range(1, K + 1)]
    targets = _moment_targets(n, M, tau)

    # Assignment order: both ends inward, leaving a middle block of tau+1
    # indices for the closed-form tail solve.
    order: list[int] = []
    lo_i, hi_i = 0, n
    while hi_i - lo_i + 1 > tau + 1:
        order.append(hi_i)
        hi_i -= 1
        if hi_i - lo_i + 1 > tau + 1:
            order.append(lo_i)
            lo_i += 1
    tail_indices = list(range(lo_i, hi_i + 1))
    branch_count = len(order)

    coeff_at = [tuple(coeff[kk][j] for kk in range(K)) for j in order]

    # Extreme coefficient values over the still-unassigned indices at each
    # branching depth, per equation.
    smin = [[0] * K for _ in range(branch_count)]
    smax = [[0] * K for _ in range(branch_count)]
    for p in range(branch_count):
        remaining = order[p + 1 :] + tail_indices
        for kk in range(K):
            values = [coeff[kk][i] for i in remaining]
            smin[p][kk] = min(values)
            smax[p][kk] = max(values)

    # The residual system on the tail block (sum equation plus the tau
    # moment equations) is square with matrix [(n-2i)^k], a power
    # Vandermonde on distinct nodes, hence nonsingular.
    det, adjugate = _exact_inverse(
        [[(n - 2 * i) ** k for i in tail_indices] for k in range(tau + 1)]
    )
    tail_size = tau + 1

    out: list[Distribution] = []
    w = [0] * (n + 1)

    def solve_tail(total: int, residual: list[int]) -> list[int] | None:
        values: list[int] = []
        for i in range(tail_size):
            row = adjugate[i]
            acc = row[0] * total
            for k in range(1, tail_size):
                acc += row[k] * residual[k - 1]
            q, rem = divmod(acc, det)
            if rem or q < 0:
                return None
            values.append(q)
        return values

    def emit_tail(total: int, residual: list[int]) -> None:
        values = solve_tail(total, residual)
        if values is None:
            return
        full = list(w)
        for idx, v in zip(tail_indices, values):
            full[idx] = v
        out.append(tuple(full))

    def descend(p: int, total: int, residual: list[int]) -> None:
        if total == 0:
            if not any(residual):
                out.append(tuple(w))
            return
        if p == branch_count:
            emit_tail(total, residual)
            return
        lo, hi = 0, total
        cj = coeff_at[p]
        mins = smin[p]
        maxs = smax[p]
        for kk in range(K):
            c = cj[kk]
            mn = mins[kk]
            mx = maxs[kk]
            rk = residual[kk]
            # (total - v) * mn <= rk - v*c  <=>  v * (c - mn) <= rk - total*mn
            a = c - mn
            b = rk - total * mn
            if a > 0:
                hi_k = b // a
                if hi_k < hi:
                    hi = hi_k
            elif a == 0:
                if b < 0:
                    return
            else:
                lo_k = -(b // -a)
                if lo_k > lo:
                    lo = lo_k
            # rk - v*c <= (total - v) * mx  <=>  v * (c - mx) >= rk - total*mx
            a = c - mx
            b = rk - total * mx
            if a > 0:
                lo_k = -(-b // a)
                if lo_k > lo:
                    lo = lo_k
            elif a == 0:
                if b > 0:
                    return
            else:
                hi_k = b // a
                if hi_k < hi:
                    hi = hi_k
            if lo > hi:
                return
        j = order[p]
        for v in range(lo, hi + 1):
            w[j] = v
            descend(p + 1, total - v, [residual[kk] - v * cj[kk] for kk in range(K)])
        w[j] = 0

    descend(0, M, list(targets))
    out.sort()
    return tuple(out)


def enumerate_initial(triple: ParameterTriple, kind: str = "W") -> DistributionSet:
    """All admissible solutions of the moment system for one triple.

    ``kind`` filters by the reference point: ``P`` keeps w_0 >= 1, ``Q``
    keeps w_0 = 0, ``W`` keeps everything.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    if triple.M > MAX_CARDINALITY:
        raise ValueError(f"cardinality {triple.M} exceeds supported bound {MAX_CARDINALITY}")
    members = _all_solutions(triple.n, triple.M, triple.tau)
    if kind == "P":
        members = tuple(w for w in members if w[0] >= 1)
    elif kind == "Q":
        members = tuple(w for w in members if w[0] == 0)
    return DistributionSet(triple=triple, kind=kind, members=members)


def _half_assignments(
    count: int, budget: int, coeff_cols: list[tuple[int, ...]]
) -> Iterator[tuple[tuple[int, ...], int, tuple[int, ...]]]:
    """Every assignment of `count` coordinates with total at most `budget`.

    Yields (values, total, moment vector).  Purely structural: no pruning
    beyond the remaining-sum budget that defines a composition.
    """
    K = len(coeff_cols[0]) if coeff_cols else 0
    values: list[int] = [0] * count

    def walk(pos: int, used: int, moments: tuple[int, ...]) -> Iterator:
        if pos == count:
            yield tuple(values), used, moments
            return
        col = coeff_cols[pos]
        for v in range(budget - used + 1):
            values[pos] = v
            yield from walk(pos + 1, used + v, tuple(moments[k] + v * col[k] for k in range(K)))
        values[pos] = 0

    yield from walk(0, 0, (0,) * K)


def brute_force_enumerate(triple: ParameterTriple) -> DistributionSet:
    """Independent oracle for :func:`enumerate_initial` on small instances.

    Exhaustively covers every composition of M into n+1 parts by joining two
    half enumerations on the exact (sum, moments) key; each half is generated
    with no moment-based pruning, so no logic is shared with the DFS kernel.
    """
    n, M, tau = triple.n, triple.M, triple.tau
    if math.comb(M + n, n) > _BRUTE_FORCE_LIMIT:
        raise ValueError(
            f"instance {triple.label()} beyond brute-force guideline (n <= 6, M <= 100)"
        )
    coeff = [tuple((n - 2 * i) ** k for k in range(1, tau + 1)) for i in range(n + 1)]
    targets = _moment_targets(n, M, tau)

    split = (n + 2) // 2  # leading block 0..split-1 is the larger half
    lead_cols = coeff[:split]
    trail_cols = coeff[split:]

    trail_index: dict[tuple, list[tuple[int, ...]]] = {}
    for values, used, moments in _half_assignments(n + 1 - split, M, trail_cols):
        trail_index.setdefault((used, moments), []).append(values)

    solutions: list[Distribution] = []
    K = tau
    for values, used, moments in _half_assignments(split, M, lead_cols):
        key = (M - used, tuple(targets[k] - moments[k] for k in range(K)))
        for trail in trail_index.get(key, ()):
            solutions.append(values + trail)
    solutions.sort()
    return DistributionSet(triple=triple, kind="W", members=tuple(solutions))
