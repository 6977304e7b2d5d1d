"""Exact counting of long-cycle factorizations in the symmetric group.

The package computes, with exact integer arithmetic, the number of ways to
write the long cycle (1, 2, ..., n) as an ordered product of two or three
permutations with prescribed cycle types (or with prescribed orbit-coarsening
set partitions), via:

* closed-form counting formulas (``longcycle.formulas``),
* brute-force enumeration oracles (``longcycle.enumeration``),
* a bijection between partitioned factorizations and decorated tree
  structures (``longcycle.cactus``, ``longcycle.bijection``),
* multivariate generating-series extraction (``longcycle.formulas``),
* symmetric-function change of basis (``longcycle.symfunc``).

Every closed form is cross-checked against an independent enumeration at
small scale by the test suite; the command-line interface (``longcycle``)
exposes the same checks.
"""

from __future__ import annotations

from .bijection import (
    LabelMultisets,
    OrderedSubset,
    PartialPermutation,
    expand_trivial_nu,
    recover_intermediate,
    reduce_trivial_nu,
    theta,
    theta_stages,
)
from .cactus import (
    BicoloredThornTree,
    ThornCactusTree,
    TreeNode,
    enumerate_bicolored_thorn_trees,
    enumerate_thorn_cactus_trees,
)
from .perm_core import (
    IntegerPartition,
    InternalInconsistencyError,
    PartitionedCactus,
    Permutation,
    SetPartition,
    aut,
    blocks_stable,
    coarsening_count,
    compose,
    cycle_type,
    cycles,
    enumerate_partitions,
    enumerate_set_partitions_of_type,
    genus,
    identity,
    long_cycle,
    make_partition,
    parse_partition,
    parse_permutation,
    parse_set_partition,
)

__version__ = "0.1.0"

__all__ = [
    "BicoloredThornTree",
    "IntegerPartition",
    "InternalInconsistencyError",
    "LabelMultisets",
    "OrderedSubset",
    "PartialPermutation",
    "PartitionedCactus",
    "Permutation",
    "SetPartition",
    "ThornCactusTree",
    "TreeNode",
    "enumerate_bicolored_thorn_trees",
    "enumerate_thorn_cactus_trees",
    "expand_trivial_nu",
    "recover_intermediate",
    "reduce_trivial_nu",
    "theta",
    "theta_stages",
    "aut",
    "blocks_stable",
    "coarsening_count",
    "compose",
    "cycle_type",
    "cycles",
    "enumerate_partitions",
    "enumerate_set_partitions_of_type",
    "genus",
    "identity",
    "long_cycle",
    "make_partition",
    "parse_partition",
    "parse_permutation",
    "parse_set_partition",
    "__version__",
]
