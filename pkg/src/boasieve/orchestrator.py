"""Workbook construction and the fixed-point sieve over related parameter triples.

For a target ``(n, M, tau)`` the workbook holds one row per strength level:
row ``r`` contains the triples ``(m, M/2^r, tau-r)`` for ``m`` from
``tau-r`` up to ``n-r``.  A cell's sieve couples it to its left neighbour
``(m-1, M', tau')`` through the column-deletion linkage and to the cell
below ``(m-1, M'/2, tau'-1)`` through the half-array membership tests, so
information flows rightwards and upwards only; the leftmost cells are
constrained by nothing beyond the moment system and mirror closure.

The driver repeats sweeps until a full sweep removes nothing.  By default
every membership query inside one sweep reads the sets as of sweep start
and removals commit between sweeps, which makes the outcome independent of
cell order and safe to parallelize.  An eager mode commits removals
immediately (including an in-progress filtered collection for the hat
checks) and must reach the identical fixed point: removals are monotone
and each rule is a necessary condition, so the final sets are
schedule-independent.  Every removal is logged with the rule that fired;
removing a distribution always drags its mirror along.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Container, Iterable, Sequence

from .distributions import (
    MAX_LENGTH,
    Distribution,
    DistributionSet,
    ParameterTriple,
    classify,
    enumerate_initial,
    mirror,
)
from .sieves import (
    MultiplicityInstance,
    PairWitness,
    _evaluate_multiplicity,
    check_pair,
    solve_column_deletion,
)

__all__ = [
    "RULE_MIRROR",
    "RULE_NO_LINK",
    "RULE_ZERO_HALF",
    "RULE_ONE_HALF",
    "RULE_FLIP",
    "RULE_DEAD_PAIRS",
    "RULE_COUNTS",
    "RULE_SUPPORT",
    "NONEXISTENT",
    "UNDECIDED",
    "Removal",
    "Verdict",
    "PassStats",
    "CellReport",
    "RunReport",
    "Workbook",
    "build_workbook",
    "run_fixed_point",
    "verdict",
    "coexistence_propagate",
]

# Rule identifiers cited by removal-log entries.
RULE_MIRROR = "Cor2"  # mirror of a removed distribution
RULE_NO_LINK = "a0"  # no shortened-array partner admits a chain solution
RULE_ZERO_HALF = "a2"  # zeros-side distribution left the half sets (pair level)
RULE_ONE_HALF = "a4"  # ones-side distribution left the half sets (pair level)
RULE_FLIP = "a6"  # flipped-column distribution left the target set (pair level)
RULE_DEAD_PAIRS = "a7"  # every linked pair has been ruled out
RULE_COUNTS = "a8"  # block-count multiplicity system infeasible
RULE_SUPPORT = "a9"  # solution never realizable by any column cut (pair level)

NONEXISTENT = "NONEXISTENT"
UNDECIDED = "UNDECIDED"

_EMPTY: frozenset = frozenset()


@dataclass(frozen=True)
class Removal:
    triple: ParameterTriple
    kind: str
    w: Distribution
    rule: str


@dataclass(frozen=True)
class Verdict:
    status: str
    survivors: int

    def describe(self) -> str:
        if self.status == NONEXISTENT:
            return NONEXISTENT
        return f"{UNDECIDED} ({self.survivors} survivors)"


@dataclass(frozen=True)
class PassStats:
    index: int
    removed: int
    seconds: float


@dataclass(frozen=True)
class CellReport:
    triple: ParameterTriple
    row: int
    col: int
    initial: dict[str, int]
    final: dict[str, int]
    emptied_pass: dict[str, int]


@dataclass
class _Cell:
    triple: ParameterTriple
    row: int
    col: int
    members: set[Distribution]
    counts: dict[str, int]
    initial: dict[str, int]
    left: ParameterTriple | None = None
    half: ParameterTriple | None = None
    right: ParameterTriple | None = None
    above: ParameterTriple | None = None
    pairs: dict[Distribution, list[Distribution]] | None = None
    pair_blocked: dict[Distribution, int] = field(default_factory=dict)
    memo: dict[Distribution, tuple] = field(default_factory=dict)
    emptied_pass: dict[str, int] = field(default_factory=dict)

    def kind_count(self, kind: str) -> int:
        if kind == "W":
            return self.counts["P"] + self.counts["Q"]
        return self.counts[kind]


class Workbook:
    """Grid of parameter triples with their live distribution sets.

    Built by :func:`build_workbook`; mutated in place by
    :func:`run_fixed_point`.  The pair cache and the removal log are
    exposed for inspection; everything else is reached through the query
    methods.
    """

    def __init__(self, target: ParameterTriple, min_strength: int, rows: list[list[ParameterTriple]], cells: dict[ParameterTriple, _Cell]) -> None:
        self.target = target
        self.min_strength = min_strength
        self.rows = rows
        self._cells = cells
        self.removal_log: list[Removal] = []
        self.passes_run = 0

    def triples(self) -> list[ParameterTriple]:
        return [t for row in self.rows for t in row]

    def __contains__(self, triple: ParameterTriple) -> bool:
        return triple in self._cells

    def members(self, triple: ParameterTriple) -> frozenset:
        return frozenset(self._cells[triple].members)

    def counts(self, triple: ParameterTriple) -> dict[str, int]:
        cell = self._cells[triple]
        return {kind: cell.kind_count(kind) for kind in ("P", "Q", "W")}

    def initial_counts(self, triple: ParameterTriple) -> dict[str, int]:
        return dict(self._cells[triple].initial)

    def distribution_set(self, triple: ParameterTriple, kind: str = "W") -> DistributionSet:
        cell = self._cells[triple]
        members = sorted(cell.members)
        if kind == "P":
            members = [w for w in members if w[0] >= 1]
        elif kind == "Q":
            members = [w for w in members if w[0] == 0]
        return DistributionSet(triple=triple, kind=kind, members=tuple(members))

    def distribution_sets(self, triple: ParameterTriple) -> dict[str, DistributionSet]:
        return {kind: self.distribution_set(triple, kind) for kind in ("P", "Q", "W")}

    def surviving_witnesses(self, triple: ParameterTriple, w: Distribution) -> tuple[PairWitness, ...]:
        """Current pair-cache content for one distribution, as witnesses."""
        cell = self._cells[triple]
        if cell.pairs is None or w not in cell.pairs:
            return ()
        out = []
        for wprime in cell.pairs[w]:
            wit = solve_column_deletion(w, wprime)
            assert wit is not None, "cached pairs always chain-solve"
            out.append(wit)
        return tuple(out)

    def sweep_order(self) -> list[ParameterTriple]:
        """Bottom row first, each row left to right."""
        return [t for row in reversed(self.rows) for t in row]


def build_workbook(
    target: ParameterTriple,
    min_strength: int = 2,
    set_provider: Callable[[ParameterTriple], DistributionSet | None] | None = None,
) -> Workbook:
    """Construct and populate the workbook for one target triple.

    Rows are built down to ``min_strength``.  ``set_provider`` may supply a
    previously computed initial W set for a triple (a cache hook); any
    triple it returns None for is enumerated directly.
    """
    if min_strength < 1:
        raise ValueError("min_strength must be at least 1")
    if target.tau < min_strength:
        raise ValueError(f"target strength {target.tau} is below min_strength {min_strength}")

    rows: list[list[ParameterTriple]] = []
    for r in range(target.tau - min_strength + 1):
        strength = target.tau - r
        cardinality = target.M >> r
        row = [ParameterTriple(m, cardinality, strength) for m in range(strength, target.n - r + 1)]
        rows.append(row)

    cells: dict[ParameterTriple, _Cell] = {}
    for r, row in enumerate(rows):
        for c, triple in enumerate(row):
            provided = set_provider(triple) if set_provider is not None else None
            if provided is not None:
                if provided.triple != triple or provided.kind != "W":
                    raise ValueError(f"provider returned a set for {provided.triple} ({provided.kind}), wanted W of {triple}")
                members = provided.members
            else:
                members = enumerate_initial(triple, "W").members
            p_count = sum(1 for w in members if w[0] >= 1)
            counts = {"P": p_count, "Q": len(members) - p_count}
            cell = _Cell(
                triple=triple,
                row=r,
                col=c,
                members=set(members),
                counts=dict(counts),
                initial={"P": counts["P"], "Q": counts["Q"], "W": len(members)},
            )
            for kind in ("P", "Q", "W"):
                if cell.initial[kind] == 0:
                    cell.emptied_pass[kind] = 0
            cells[triple] = cell

    for r, row in enumerate(rows):
        for c, triple in enumerate(row):
            cell = cells[triple]
            if c > 0:
                cell.left = row[c - 1]
                cells[cell.left].right = triple
            if r + 1 < len(rows) and c > 0:
                below = ParameterTriple(triple.n - 1, triple.M // 2, triple.tau - 1)
                cell.half = below
                cells[below].above = triple

    return Workbook(target=target, min_strength=min_strength, rows=rows, cells=cells)


def _build_pairs(cell: _Cell, left_members: Container[Distribution]) -> None:
    left_sorted = sorted(left_members)
    pairs: dict[Distribution, list[Distribution]] = {}
    for w in sorted(cell.members):
        linked = []
        for wprime in left_sorted:
            if solve_column_deletion(w, wprime) is not None:
                linked.append(wprime)
        pairs[w] = linked
    cell.pairs = pairs


def _sieve_cell(
    cell: _Cell,
    self_view: Container[Distribution],
    left_view: Container[Distribution],
    half_view: Container[Distribution] | None,
    track_filtered: bool,
) -> dict[Distribution, str]:
    """One sweep over a cell; returns distributions to remove with their rules.

    Permanently prunes pairs that fail a membership check or lose their
    multiplicity support (both can only keep failing as the sets shrink).
    With ``track_filtered`` the distributions condemned so far in this very
    sweep double as the filtered collection the hat checks must avoid
    (eager schedules); without it that collection is empty, since under
    snapshot semantics earlier removals are already absent from the views.
    """
    if cell.pairs is None:
        _build_pairs(cell, left_view)
        assert cell.pairs is not None
    pending: dict[Distribution, str] = {}
    filtered_view: Container[Distribution] = pending if track_filtered else _EMPTY
    n = cell.triple.n
    for w in sorted(cell.members):
        pairs = cell.pairs.get(w, [])
        if not pairs:
            pending[w] = RULE_DEAD_PAIRS if cell.pair_blocked.get(w) else RULE_NO_LINK
            continue
        keep: list[Distribution] = []
        witnesses: list[PairWitness] = []
        for wprime in pairs:
            wit = solve_column_deletion(w, wprime)
            assert wit is not None, "cached pairs always chain-solve"
            if check_pair(wit, half_view, self_view, filtered_view):
                keep.append(wprime)
                witnesses.append(wit)
        if len(keep) != len(pairs):
            cell.pair_blocked[w] = cell.pair_blocked.get(w, 0) + len(pairs) - len(keep)
            cell.pairs[w] = keep
        if not keep:
            pending[w] = RULE_DEAD_PAIRS
            continue
        signature = tuple(keep)
        if cell.memo.get(w) == signature:
            continue
        instance = MultiplicityInstance.from_witnesses(w, witnesses)
        support = _evaluate_multiplicity(instance, n)
        if support is None:
            pending[w] = RULE_COUNTS
            continue
        if len(support) < len(instance.solutions):
            dead = set()
            for j, group in enumerate(instance.contributors):
                if j not in support:
                    dead.update(group)
            keep = [wp for wp in keep if wp not in dead]
            cell.pair_blocked[w] = cell.pair_blocked.get(w, 0) + len(dead)
            cell.pairs[w] = keep
            signature = tuple(keep)
        cell.memo[w] = signature
    return pending


def _apply_removals(
    wb: Workbook,
    cell: _Cell,
    pending: dict[Distribution, str],
    pass_no: int,
) -> tuple[set[ParameterTriple], int]:
    """Commit removals (with mirror closure) and return affected cells."""
    full = dict(pending)
    for w in list(pending):
        m = mirror(w)
        if m not in full and m in cell.members:
            full[m] = RULE_MIRROR
    removed: list[Distribution] = []
    for w in sorted(full):
        if w not in cell.members:
            continue
        cell.members.discard(w)
        kind = classify(w)
        cell.counts[kind] -= 1
        wb.removal_log.append(Removal(triple=cell.triple, kind=kind, w=w, rule=full[w]))
        removed.append(w)
        if cell.pairs is not None:
            cell.pairs.pop(w, None)
        cell.pair_blocked.pop(w, None)
        cell.memo.pop(w, None)
    if not removed:
        return set(), 0
    for kind in ("P", "Q", "W"):
        if kind not in cell.emptied_pass and cell.kind_count(kind) == 0:
            cell.emptied_pass[kind] = pass_no
    if cell.right is not None:
        neighbour = wb._cells[cell.right]
        if neighbour.pairs is not None:
            dead = set(removed)
            for w2, linked in neighbour.pairs.items():
                if dead.intersection(linked):
                    neighbour.pairs[w2] = [wp for wp in linked if wp not in dead]
    affected = {cell.triple}
    if cell.right is not None:
        affected.add(cell.right)
    if cell.above is not None:
        affected.add(cell.above)
    return affected, len(removed)


def run_fixed_point(
    workbook: Workbook,
    *,
    threads: int = 1,
    order_seed: int | None = None,
    eager: bool = False,
) -> RunReport:
    """Sweep the workbook until no rule can remove anything, then report.

    ``order_seed`` shuffles the per-sweep cell order; ``eager`` commits
    removals immediately instead of between sweeps.  Neither changes the
    final sets.  ``threads`` parallelizes cell sieving within a sweep
    (snapshot mode only).
    """
    if threads < 1:
        raise ValueError("threads must be at least 1")
    if eager and threads > 1:
        raise ValueError("eager sweeps are sequential; use threads=1")
    rng = random.Random(order_seed) if order_seed is not None else None

    passes: list[PassStats] = []
    due = {t for t, c in workbook._cells.items() if c.left is not None and c.members}
    pass_no = workbook.passes_run
    while due:
        pass_no += 1
        started = time.perf_counter()
        schedule = [t for t in workbook.sweep_order() if t in due]
        if rng is not None:
            rng.shuffle(schedule)
        removed_this_pass = 0
        next_due: set[ParameterTriple] = set()

        if eager:
            for t in schedule:
                cell = workbook._cells[t]
                if not cell.members:
                    continue
                half_view = workbook._cells[cell.half].members if cell.half is not None else None
                left_view = workbook._cells[cell.left].members
                result = _sieve_cell(cell, cell.members, left_view, half_view, True)
                affected, removed = _apply_removals(workbook, cell, result, pass_no)
                removed_this_pass += removed
                next_due |= affected
        else:
            snapshot = {t: frozenset(c.members) for t, c in workbook._cells.items()}

            def sieve_one(t: ParameterTriple) -> tuple[ParameterTriple, dict[Distribution, str]]:
                cell = workbook._cells[t]
                half_view = snapshot[cell.half] if cell.half is not None else None
                return t, _sieve_cell(cell, snapshot[t], snapshot[cell.left], half_view, False)

            if threads > 1:
                with ThreadPoolExecutor(max_workers=threads) as pool:
                    results = list(pool.map(sieve_one, schedule))
            else:
                results = [sieve_one(t) for t in schedule]
            for t, result in results:
                affected, removed = _apply_removals(workbook, workbook._cells[t], result, pass_no)
                removed_this_pass += removed
                next_due |= affected

        passes.append(PassStats(index=pass_no, removed=removed_this_pass, seconds=time.perf_counter() - started))
        due = {
            t
            for t in next_due
            if workbook._cells[t].left is not None and workbook._cells[t].members
        }
    workbook.passes_run = pass_no

    return _build_report(workbook, passes, threads=threads, order_seed=order_seed, eager=eager)


def verdict(workbook: Workbook, triple: ParameterTriple) -> Verdict:
    """Verdict for one cell at the current state of the workbook.

    An empty W set certifies nonexistence; survivors only mean the sieves
    could not decide.
    """
    if triple not in workbook:
        raise ValueError(f"triple {triple.label()} is not part of this workbook")
    survivors = len(workbook._cells[triple].members)
    return Verdict(status=NONEXISTENT if survivors == 0 else UNDECIDED, survivors=survivors)


def coexistence_propagate(
    results: Iterable[tuple[ParameterTriple, str]],
) -> list[tuple[ParameterTriple, str]]:
    """Close a verdict list under the nonexistence implications.

    Arrays of even strength ``2k`` exist exactly when their companions of
    parameters ``(n+1, 2N, 2k+1)`` exist, so nonexistence transfers both
    ways across that correspondence.  Deleting a column of an
    ``(n+1, M, tau)`` array yields an ``(n, M, tau)`` array, so
    nonexistence also climbs to longer arrays at the same cardinality and
    strength.  The closure is taken within the supported length range.
    """
    known: dict[ParameterTriple, str] = {}
    for triple, status in results:
        known.setdefault(triple, status)
    queue = [t for t, status in known.items() if status == NONEXISTENT]
    while queue:
        current = queue.pop()
        for implied in _implied_nonexistent(current):
            if known.get(implied) != NONEXISTENT:
                known[implied] = NONEXISTENT
                queue.append(implied)
    return sorted(known.items())


def _implied_nonexistent(t: ParameterTriple) -> list[ParameterTriple]:
    candidates: list[tuple[int, int, int]] = []
    if t.tau % 2 == 0:
        candidates.append((t.n + 1, 2 * t.M, t.tau + 1))
    elif t.M % 2 == 0:
        candidates.append((t.n - 1, t.M // 2, t.tau - 1))
    candidates.append((t.n + 1, t.M, t.tau))
    implied = []
    for n, M, tau in candidates:
        if 1 <= tau <= n <= MAX_LENGTH and M >= 1 and M % (1 << tau) == 0:
            implied.append(ParameterTriple(n, M, tau))
    return implied


@dataclass
class RunReport:
    """Counts, verdict, rule attribution and timing for one fixed-point run."""

    target: ParameterTriple
    min_strength: int
    verdict: Verdict
    cells: tuple[CellReport, ...]
    rule_histogram: dict[str, int]
    passes: tuple[PassStats, ...]
    warnings: tuple[str, ...]
    threads: int = 1
    order_seed: int | None = None
    eager: bool = False

    def cell(self, triple: ParameterTriple) -> CellReport:
        for report in self.cells:
            if report.triple == triple:
                return report
        raise ValueError(f"no cell {triple.label()} in this report")

    def to_json_dict(self) -> dict:
        return {
            "target": {"n": self.target.n, "M": self.target.M, "tau": self.target.tau},
            "min_strength": self.min_strength,
            "schedule": {
                "threads": self.threads,
                "order_seed": self.order_seed,
                "eager": self.eager,
            },
            "verdict": {"status": self.verdict.status, "survivors": self.verdict.survivors},
            "cells": [
                {
                    "n": c.triple.n,
                    "M": c.triple.M,
                    "tau": c.triple.tau,
                    "row": c.row,
                    "col": c.col,
                    "initial": dict(c.initial),
                    "final": dict(c.final),
                    "emptied_pass": dict(c.emptied_pass),
                }
                for c in self.cells
            ],
            "rules": dict(sorted(self.rule_histogram.items())),
            "passes": [
                {"pass": p.index, "removed": p.removed, "seconds": round(p.seconds, 6)}
                for p in self.passes
            ],
            "warnings": list(self.warnings),
        }

    def to_csv(self) -> str:
        """Count table with one line per set kind and one column per cell.

        Cells read ``initial->final``; the three kinds of each workbook row
        are grouped together and aligned by column index, so columns line
        up across strength levels exactly as the coupled cells do.
        """
        import csv
        import io

        by_row: dict[int, list[CellReport]] = {}
        for report in self.cells:
            by_row.setdefault(report.row, []).append(report)
        width = max(len(reports) for reports in by_row.values())
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["set"] + [str(c) for c in range(width)])
        for row_index in sorted(by_row):
            reports = sorted(by_row[row_index], key=lambda r: r.col)
            sample = reports[0].triple
            for kind in ("P", "Q", "W"):
                label = f"{kind}(n,{sample.M},{sample.tau})"
                line = [label]
                for report in reports:
                    line.append(f"{report.initial[kind]}->{report.final[kind]}")
                writer.writerow(line)
        return buffer.getvalue()


def _build_report(
    workbook: Workbook,
    passes: Sequence[PassStats],
    *,
    threads: int,
    order_seed: int | None,
    eager: bool,
) -> RunReport:
    cell_reports = []
    warnings: list[str] = []
    for triple in workbook.triples():
        cell = workbook._cells[triple]
        final = {kind: cell.kind_count(kind) for kind in ("P", "Q", "W")}
        cell_reports.append(
            CellReport(
                triple=triple,
                row=cell.row,
                col=cell.col,
                initial=dict(cell.initial),
                final=final,
                emptied_pass=dict(cell.emptied_pass),
            )
        )
        if final["W"] == 0 and cell.initial["W"] > 0:
            emptied = cell.emptied_pass
            if emptied.get("P") != emptied.get("Q"):
                warnings.append(
                    f"cell {triple.label()}: P and Q emptied at different passes "
                    f"({emptied.get('P')} vs {emptied.get('Q')})"
                )
    histogram: dict[str, int] = {}
    for removal in workbook.removal_log:
        histogram[removal.rule] = histogram.get(removal.rule, 0) + 1
    return RunReport(
        target=workbook.target,
        min_strength=workbook.min_strength,
        verdict=verdict(workbook, workbook.target),
        cells=tuple(cell_reports),
        rule_histogram=histogram,
        passes=tuple(passes),
        warnings=tuple(warnings),
        threads=threads,
        order_seed=order_seed,
        eager=eager,
    )
