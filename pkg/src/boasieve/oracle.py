"""Explicit small orthogonal arrays used as ground truth.

Replicated full factorials (every length-n vector taken lambda times) are
orthogonal arrays of full strength, and the family is closed under the
derivations the sieves reason about: deleting columns, splitting on a
column, and juxtaposing copies.  Extracting real distance distributions
and real column splits from these arrays exercises every pruning rule
against data that is known to be realizable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .distributions import Distribution

__all__ = [
    "BinaryArray",
    "make_replicated_factorial",
    "verify_strength",
    "failing_column_sets",
    "empirical_distribution",
    "split_by_first_column",
    "parse_array_text",
    "format_array_text",
]

# Construction guard: lambda * 2^n rows must stay desk sized.
_MAX_ROWS = 1 << 20


@dataclass(frozen=True)
class BinaryArray:
    """Rows of an M x n matrix over {0,1}; duplicate rows are allowed."""

    n: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("array must have at least one column")
        for row in self.rows:
            if len(row) != self.n or any(b not in (0, 1) for b in row):
                raise ValueError(f"row {row} is not a length-{self.n} bit vector")

    @property
    def M(self) -> int:
        return len(self.rows)


def make_replicated_factorial(n: int, lam: int) -> BinaryArray:
    """lambda copies of every length-n vector; an array of strength n."""
    if not 1 <= n <= 12:
        raise ValueError("factorial length outside 1..12")
    if lam < 1 or lam * (1 << n) > _MAX_ROWS:
        raise ValueError(f"replication {lam} exceeds the row budget")
    block = [tuple(bits) for bits in itertools.product((0, 1), repeat=n)]
    return BinaryArray(n=n, rows=tuple(block * lam))


def failing_column_sets(array: BinaryArray, tau: int) -> list[tuple[int, ...]]:
    """Column index tuples whose projection is not perfectly balanced."""
    if not 0 <= tau <= array.n:
        raise ValueError(f"strength {tau} outside 0..{array.n}")
    if tau == 0:
        return []
    lam, remainder = divmod(array.M, 1 << tau)
    if remainder:
        return list(itertools.combinations(range(array.n), tau))
    failures = []
    full = 1 << tau
    for cols in itertools.combinations(range(array.n), tau):
        counts: dict[tuple[int, ...], int] = {}
        for row in array.rows:
            key = tuple(row[c] for c in cols)
            counts[key] = counts.get(key, 0) + 1
        if len(counts) != full or any(c != lam for c in counts.values()):
            failures.append(cols)
    return failures


def verify_strength(array: BinaryArray, tau: int) -> bool:
    """Whether every M x tau column-submatrix holds each tuple exactly M/2^tau times."""
    if tau == 0:
        return True
    if array.M % (1 << tau):
        return False
    return not failing_column_sets(array, tau)


def empirical_distribution(array: BinaryArray, point: tuple[int, ...]) -> Distribution:
    """Histogram of Hamming distances from the point to all rows."""
    if len(point) != array.n:
        raise ValueError(f"point length {len(point)} does not match n={array.n}")
    counts = [0] * (array.n + 1)
    for row in array.rows:
        counts[sum(a != b for a, b in zip(row, point))] += 1
    return tuple(counts)


def split_by_first_column(array: BinaryArray) -> tuple[BinaryArray, BinaryArray]:
    """(rows starting 0, rows starting 1), leading bit dropped.

    For an input of strength tau >= 1 both halves have strength tau - 1 and
    half the rows.
    """
    if array.n < 2:
        raise ValueError("need at least two columns to split")
    zeros = tuple(row[1:] for row in array.rows if row[0] == 0)
    ones = tuple(row[1:] for row in array.rows if row[0] == 1)
    return (
        BinaryArray(n=array.n - 1, rows=zeros),
        BinaryArray(n=array.n - 1, rows=ones),
    )


def parse_array_text(text: str) -> BinaryArray:
    """Read the plain-text format: first line ``n M``, then M rows of bits."""
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValueError("empty array file")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError(f"header must be 'n M', got {lines[0]!r}")
    try:
        n, M = int(header[0]), int(header[1])
    except ValueError as exc:
        raise ValueError(f"header must be two integers, got {lines[0]!r}") from exc
    body = lines[1:]
    if len(body) != M:
        raise ValueError(f"expected {M} rows, found {len(body)}")
    rows = []
    for line in body:
        if len(line) != n or set(line) - {"0", "1"}:
            raise ValueError(f"row {line!r} is not {n} characters of 0/1")
        rows.append(tuple(int(c) for c in line))
    return BinaryArray(n=n, rows=tuple(rows))


def format_array_text(array: BinaryArray) -> str:
    lines = [f"{array.n} {array.M}"]
    lines.extend("".join(str(b) for b in row) for row in array.rows)
    return "\n".join(lines) + "\n"
