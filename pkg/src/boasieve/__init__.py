"""Exact sieve for feasible distance distributions of binary orthogonal arrays.

Enumerates all integer distance distributions compatible with the moment
system of an (n, M, tau) binary orthogonal array, then prunes them with
interlocking necessary conditions relating an array to its column-deleted,
column-split and bit-flipped derivatives, iterated to a fixed point over a
workbook of parameter triples.  An empty surviving set is a certificate of
nonexistence; otherwise the reduced sets remain as necessary conditions.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .distributions import (
    Distribution,
    DistributionSet,
    ParameterTriple,
    brute_force_enumerate,
    classify,
    enumerate_initial,
    mirror,
)
from .moments import KrawtchoukEvaluator, MomentTable, binomial, krawtchouk_eval, moment_constant
from .oracle import (
    BinaryArray,
    empirical_distribution,
    make_replicated_factorial,
    split_by_first_column,
    verify_strength,
)
from .orchestrator import (
    NONEXISTENT,
    UNDECIDED,
    RunReport,
    Verdict,
    Workbook,
    build_workbook,
    coexistence_propagate,
    run_fixed_point,
    verdict,
)
from .sieves import (
    MultiplicityInstance,
    PairWitness,
    check_pair,
    hat_transform,
    multiplicity_feasible,
    multiplicity_support,
    solve_column_deletion,
)

__all__ = [
    "__version__",
    "Distribution",
    "ParameterTriple",
    "DistributionSet",
    "mirror",
    "classify",
    "enumerate_initial",
    "brute_force_enumerate",
    "binomial",
    "moment_constant",
    "krawtchouk_eval",
    "MomentTable",
    "KrawtchoukEvaluator",
    "BinaryArray",
    "make_replicated_factorial",
    "verify_strength",
    "empirical_distribution",
    "split_by_first_column",
    "PairWitness",
    "MultiplicityInstance",
    "solve_column_deletion",
    "hat_transform",
    "check_pair",
    "multiplicity_feasible",
    "multiplicity_support",
    "Workbook",
    "RunReport",
    "Verdict",
    "build_workbook",
    "run_fixed_point",
    "verdict",
    "coexistence_propagate",
    "NONEXISTENT",
    "UNDECIDED",
]
