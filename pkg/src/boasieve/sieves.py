"""Pruning rules linking the distributions of an array and its derived arrays.

Fix an ``(n, M, tau)`` array ``C``, a reference point, and the array ``C'``
obtained by deleting the first column.  Writing ``x_i`` / ``y_i`` for the
number of ones / zeros in the first column among the rows at distance ``i``
from the point, the distributions ``w`` of ``C`` and ``w'`` of ``C'`` force
the unique forward chain

    y_0 = w_0,   x_{i+1} = w'_i - y_i,   y_{i+1} = w_{i+1} - x_{i+1},

with every value nonnegative and the terminal check ``x_n = w_n``.  A pair
``(w, w')`` without such a chain solution cannot coexist.  When a solution
exists it carries three further obligations:

* ``x`` and ``y`` are themselves distance distributions of the halved
  arrays (parameters ``(n-1, M/2, tau-1)``), as are their mirrors;
* flipping the deleted column's bits yields another ``(n, M, tau)`` array
  whose distribution, assembled from the chain as
  ``(x_1, x_2 + y_0, ..., x_n + y_{n-2}, y_{n-1})``, must again be feasible
  (the "hat" distribution), as must its mirror;
* counting the ones of every distance block in two ways across all ``n``
  possible column deletions: if the surviving chain solutions for ``w`` are
  ``x^(1)..x^(s)``, there must exist nonnegative multiplicities ``k_j`` with
  ``sum k_j = n`` and ``sum_j k_j x_i^(j) = i * w_i`` for every ``i``.

Each obligation is exposed here as a check the orchestrator applies until
no further removal is possible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Container, Iterable, NamedTuple, Sequence

from .distributions import Distribution, DistributionSet, mirror

__all__ = [
    "PairWitness",
    "MultiplicityInstance",
    "solve_column_deletion",
    "hat_transform",
    "check_pair",
    "multiplicity_feasible",
    "multiplicity_support",
]

_EMPTY: frozenset = frozenset()


class PairWitness(NamedTuple):
    """The unique column-deletion linkage between a pair of distributions.

    ``x[i]`` counts rows with a one in the deleted column at distance ``i``
    from the reference point in the shortened array; ``y`` the rows with a
    zero.  Both are distributions of the halved arrays.
    """

    w: Distribution
    wprime: Distribution
    x: tuple[int, ...]
    y: tuple[int, ...]


def solve_column_deletion(w: Distribution, wprime: Distribution) -> PairWitness | None:
    """Solve the linkage system for (w, w'); None when no solution exists.

    The forward chain is deterministic, so the system has at most one
    solution; it fails as soon as a value would go negative or the terminal
    equality breaks.
    """
    n = len(w) - 1
    if len(wprime) != n or n < 1:
        raise ValueError(f"length mismatch: |w|={len(w)}, |w'|={len(wprime)}")
    x = [0] * n
    y = [0] * n
    y[0] = w[0]
    for i in range(n - 1):
        xi = wprime[i] - y[i]
        if xi < 0:
            return None
        x[i] = xi
        yi = w[i + 1] - xi
        if yi < 0:
            return None
        y[i + 1] = yi
    xn = wprime[n - 1] - y[n - 1]
    if xn < 0 or xn != w[n]:
        return None
    x[n - 1] = xn
    return PairWitness(w=tuple(w), wprime=tuple(wprime), x=tuple(x), y=tuple(y))


def hat_transform(witness: PairWitness) -> Distribution:
    """Distribution of the array with the deleted column's bits flipped.

    Rows that carried a one move one step closer to the reference point,
    rows that carried a zero move one step away.
    """
    x, y = witness.x, witness.y
    n = len(x)
    return (x[0],) + tuple(x[i] + y[i - 1] for i in range(1, n)) + (y[n - 1],)


def check_pair(
    witness: PairWitness,
    half_set: Container[Distribution] | None,
    target_set: Container[Distribution],
    filtered: Container[Distribution] = _EMPTY,
) -> bool:
    """Whether a linked pair survives all membership obligations.

    ``half_set`` holds the current distributions of the halved arrays; pass
    None when no halved row is being tracked (then those tests are
    vacuous).  ``target_set`` holds the current distributions for the
    original parameters; ``filtered`` is an additional collection of
    already-condemned distributions the hat transform must avoid.
    """
    x, y = witness.x, witness.y
    if len(witness.w) != len(x) + 1 or len(witness.wprime) != len(x) or len(y) != len(x):
        raise ValueError("witness components have inconsistent lengths")
    if isinstance(half_set, DistributionSet) and half_set.triple.n != len(x) - 1:
        raise ValueError(f"half set has length {half_set.triple.n}, witness needs {len(x) - 1}")
    if isinstance(target_set, DistributionSet) and target_set.triple.n != len(x):
        raise ValueError(f"target set has length {target_set.triple.n}, witness needs {len(x)}")
    if half_set is not None:
        if x not in half_set or mirror(x) not in half_set:
            return False
        if y not in half_set or mirror(y) not in half_set:
            return False
    hat = hat_transform(witness)
    hat_mirror = mirror(hat)
    if hat not in target_set or hat_mirror not in target_set:
        return False
    if hat in filtered or hat_mirror in filtered:
        return False
    return True


@dataclass(frozen=True)
class MultiplicityInstance:
    """The surviving chain solutions for one distribution, deduplicated.

    ``solutions[j]`` is an ``(x, y)`` pair; ``contributors[j]`` lists every
    shortened-array distribution that produced it.  Ruling out solution
    ``j`` rules out all of its contributing pairs.
    """

    w: Distribution
    solutions: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    contributors: tuple[tuple[Distribution, ...], ...]

    @classmethod
    def from_witnesses(cls, w: Distribution, witnesses: Iterable[PairWitness]) -> "MultiplicityInstance":
        seen: dict[tuple, int] = {}
        solutions: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
        groups: list[list[Distribution]] = []
        for wit in witnesses:
            if wit.w != w:
                raise ValueError("witness does not belong to this distribution")
            key = (wit.x, wit.y)
            if key in seen:
                groups[seen[key]].append(wit.wprime)
            else:
                seen[key] = len(solutions)
                solutions.append(key)
                groups.append([wit.wprime])
        return cls(
            w=w,
            solutions=tuple(solutions),
            contributors=tuple(tuple(g) for g in groups),
        )


class _MultiplicitySolver:
    """Depth-first solver for the block-count system over one solution list.

    Searches for ``k_j >= 0`` with ``sum k_j = budget`` and, per equation
    ``i``, ``sum_j k_j * columns[j][i] = targets[i]``.  Columns are visited
    in decreasing order (all-zero columns therefore last), residuals are
    updated in place, and branches are cut by per-equation reachability
    bounds.  Residuals never go negative, so their running total doubles as
    an emptiness test.
    """

    def __init__(self, columns: Sequence[tuple[int, ...]], targets: Sequence[int], budget: int) -> None:
        self.s = len(columns)
        self.m = len(targets)
        self.targets = list(targets)
        self.budget = budget
        self.order = sorted(range(self.s), key=lambda j: columns[j], reverse=True)
        self.cols = [columns[j] for j in self.order]
        self.col_sums = [sum(c) for c in self.cols]
        # Suffix maxima per equation (last slot: per column total).
        suffix = [[0] * (self.m + 1) for _ in range(self.s + 1)]
        for pos in range(self.s - 1, -1, -1):
            row = suffix[pos]
            nxt = suffix[pos + 1]
            col = self.cols[pos]
            for i in range(self.m):
                row[i] = col[i] if col[i] > nxt[i] else nxt[i]
            row[self.m] = self.col_sums[pos] if self.col_sums[pos] > nxt[self.m] else nxt[self.m]
        self.suffix_max = suffix

    def solve(self, forced: int | None = None) -> list[int] | None:
        """One solution in original column indexing, or None.

        With ``forced`` set the solution must have ``k_forced >= 1``.
        """
        res = list(self.targets)
        budget = self.budget
        if forced is not None:
            col_f = None
            for pos, j in enumerate(self.order):
                if j == forced:
                    col_f = self.cols[pos]
                    break
            assert col_f is not None
            for i in range(self.m):
                res[i] -= col_f[i]
                if res[i] < 0:
                    return None
            budget -= 1
            if budget < 0:
                return None
        counts = [0] * self.s
        if not self._first(0, budget, res, sum(res), counts):
            return None
        solution = [0] * self.s
        for pos, j in enumerate(self.order):
            solution[j] = counts[pos]
        if forced is not None:
            solution[forced] += 1
        return solution

    def _bounds_ok(self, pos: int, remaining: int, res: list[int], res_total: int) -> bool:
        limits = self.suffix_max[pos]
        if res_total > remaining * limits[self.m]:
            return False
        for i in range(self.m):
            if res[i] > remaining * limits[i]:
                return False
        return True

    def _column_cap(self, pos: int, remaining: int, res: list[int]) -> int:
        hi = remaining
        for i, ci in enumerate(self.cols[pos]):
            if ci:
                q = res[i] // ci
                if q < hi:
                    hi = q
        return hi

    def _first(self, pos: int, remaining: int, res: list[int], res_total: int, counts: list[int]) -> bool:
        if res_total == 0:
            if remaining == 0:
                return True
            for p in range(pos, self.s):
                if self.col_sums[p] == 0:
                    counts[p] = remaining
                    return True
            return False
        if pos == self.s or remaining == 0:
            return False
        if not self._bounds_ok(pos, remaining, res, res_total):
            return False
        col = self.cols[pos]
        csum = self.col_sums[pos]
        m = self.m
        hi = self._column_cap(pos, remaining, res)
        for i in range(m):
            res[i] -= hi * col[i]
        rt = res_total - hi * csum
        k = hi
        while True:
            counts[pos] = k
            if self._first(pos + 1, remaining - k, res, rt, counts):
                return True
            if k == 0:
                break
            k -= 1
            for i in range(m):
                res[i] += col[i]
            rt += csum
        counts[pos] = 0
        return False

    def support(self, node_limit: int = 512) -> tuple[set[int], bool]:
        """(indices on some solution, whether the enumeration was exhaustive).

        Walks the full solution tree up to ``node_limit`` nodes, unioning
        the supports of every solution met.  When the walk completes the
        returned set is exactly the support; otherwise it is a certified
        subset and the caller must probe the rest.
        """
        marked: set[int] = set()
        active: list[int] = []
        res = list(self.targets)
        state = {"nodes": 0, "complete": True}

        def walk(pos: int, remaining: int, res_total: int) -> None:
            if state["nodes"] >= node_limit:
                state["complete"] = False
                return
            state["nodes"] += 1
            if res_total == 0:
                if remaining == 0:
                    marked.update(active)
                else:
                    tail = [p for p in range(pos, self.s) if self.col_sums[p] == 0]
                    if tail:
                        # Any one zero column can absorb the leftover budget.
                        marked.update(active)
                        marked.update(tail)
                return
            if pos == self.s or remaining == 0:
                return
            if not self._bounds_ok(pos, remaining, res, res_total):
                return
            col = self.cols[pos]
            csum = self.col_sums[pos]
            m = self.m
            hi = self._column_cap(pos, remaining, res)
            for i in range(m):
                res[i] -= hi * col[i]
            rt = res_total - hi * csum
            k = hi
            while True:
                if k >= 1:
                    active.append(pos)
                    walk(pos + 1, remaining - k, rt)
                    active.pop()
                else:
                    walk(pos + 1, remaining, rt)
                if k == 0:
                    break
                k -= 1
                for i in range(m):
                    res[i] += col[i]
                rt += csum

        walk(0, self.budget, sum(res))
        return {self.order[p] for p in marked}, state["complete"]


def _instance_solver(instance: MultiplicityInstance, n: int) -> _MultiplicitySolver:
    w = instance.w
    if len(w) != n + 1:
        raise ValueError(f"distribution length {len(w)} does not match n={n}")
    if not instance.solutions:
        raise ValueError("instance has no solutions")
    columns = [x for x, _ in instance.solutions]
    targets = [i * w[i] for i in range(1, n + 1)]
    return _MultiplicitySolver(columns, targets, n)


def _full_support(solver: _MultiplicitySolver) -> set[int]:
    supported, complete = solver.support()
    if complete:
        return supported
    for j in range(solver.s):
        if j in supported:
            continue
        solution = solver.solve(forced=j)
        if solution is not None:
            supported.update(jj for jj, k in enumerate(solution) if k >= 1)
    return supported


def _evaluate_multiplicity(instance: MultiplicityInstance, n: int) -> set[int] | None:
    """Support of the block-count system, or None when it is infeasible."""
    solver = _instance_solver(instance, n)
    if solver.solve() is None:
        return None
    return _full_support(solver)


def multiplicity_feasible(instance: MultiplicityInstance, n: int) -> bool:
    """Whether the n column cuts can realize the surviving solutions at all."""
    return _instance_solver(instance, n).solve() is not None


def multiplicity_support(instance: MultiplicityInstance, n: int) -> set[int]:
    """Indices j whose solution can appear with multiplicity >= 1.

    Solutions outside the support can never be realized by any column cut,
    so their contributing pairs are ruled out.  Requires a feasible
    instance.
    """
    solver = _instance_solver(instance, n)
    if solver.solve() is None:
        raise ValueError("multiplicity system is infeasible; support is undefined")
    return _full_support(solver)
