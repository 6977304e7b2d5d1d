"""Brute-force counting oracles for long-cycle factorizations.

Everything here is deliberately naive: permutations of a prescribed cycle
type are enumerated directly, products are formed explicitly, and set
partitions are tested for block stability one block at a time.  These counts
are the ground truth against which every closed formula in
:mod:`longcycle.formulas` is certified.

Guards: each oracle takes an explicit ``guard`` keyword (default chosen so a
call finishes in seconds); exceeding it raises :class:`GuardExceeded` rather
than running unbounded.  Callers may override the guard consciously.
"""

from __future__ import annotations

import itertools
from collections import Counter
from functools import lru_cache
from typing import Iterator

from .perm_core import (
    IntegerPartition,
    PartitionedCactus,
    Permutation,
    SetPartition,
    blocks_stable,
    compose,
    cycle_type,
    cycles,
    enumerate_partitions,
    enumerate_set_partitions_of_type,
    long_cycle,
    make_partition,
)

__all__ = [
    "GuardExceeded",
    "conjugacy_class",
    "k3_brute",
    "k2_brute",
    "k3_table",
    "c3_via_types",
    "c3_direct",
    "c2_brute",
    "enumerate_partitioned_cacti",
]


class GuardExceeded(RuntimeError):
    """An oracle was asked to run beyond its cost guard."""


def _check(lam: IntegerPartition, *rest: IntegerPartition) -> int:
    lam = make_partition(lam)
    n = sum(lam)
    for other in rest:
        if sum(make_partition(other)) != n:
            raise ValueError(f"mismatched weights: {lam!r} vs {other!r}")
    if n < 1:
        raise ValueError("need n >= 1")
    return n


def _guard(n: int, guard: int) -> None:
    if n > guard:
        raise GuardExceeded(f"n={n} exceeds guard {guard}")


def conjugacy_class(n: int, lam: IntegerPartition) -> Iterator[Permutation]:
    """All permutations of {1..n} with cycle type lam, each exactly once.

    Cycles are anchored at the smallest unused element, which kills the
    symmetry between equal-length cycles.

    >>> sorted(p.images for p in conjugacy_class(3, (2, 1)))
    [(1, 3, 2), (2, 1, 3), (3, 2, 1)]
    """
    lam = make_partition(lam)
    if sum(lam) != n:
        raise ValueError(f"{lam!r} does not partition {n}")

    def rec(unused: tuple[int, ...], sizes: tuple[int, ...], images: dict[int, int]) -> Iterator[Permutation]:
        if not unused:
            yield Permutation(tuple(images[i] for i in range(1, n + 1)))
            return
        anchor, pool = unused[0], unused[1:]
        for size in sorted(set(sizes), reverse=True):
            idx = sizes.index(size)
            smaller = sizes[:idx] + sizes[idx + 1 :]
            for body in itertools.permutations(pool, size - 1):
                cyc = (anchor,) + body
                for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                    images[a] = b
                left = tuple(x for x in pool if x not in body)
                yield from rec(left, smaller, images)
        return

    return rec(tuple(range(1, n + 1)), lam, {})


def k3_brute(
    lam: IntegerPartition,
    mu: IntegerPartition,
    nu: IntegerPartition,
    *,
    guard: int = 7,
) -> int:
    """Number of pairs (a1, a2) with a1 of type lam, a2 of type mu, and
    a2^-1 a1^-1 (long cycle) of type nu.

    >>> k3_brute((1, 1), (1, 1), (2,))
    1
    """
    n = _check(lam, mu, nu)
    _guard(n, guard)
    nu = make_partition(nu)
    gamma = long_cycle(n)
    count = 0
    for a1 in conjugacy_class(n, lam):
        beta = compose(a1.inverse(), gamma)
        for a2 in conjugacy_class(n, mu):
            if cycle_type(compose(a2.inverse(), beta)) == nu:
                count += 1
    return count


def k2_brute(lam: IntegerPartition, mu: IntegerPartition, *, guard: int = 9) -> int:
    """Number of a of type lam with a^-1 (long cycle) of type mu.

    >>> k2_brute((2, 1), (2, 1))
    3
    """
    n = _check(lam, mu)
    _guard(n, guard)
    mu = make_partition(mu)
    gamma = long_cycle(n)
    return sum(
        1 for a in conjugacy_class(n, lam) if cycle_type(compose(a.inverse(), gamma)) == mu
    )


@lru_cache(maxsize=None)
def k3_table(n: int, guard: int = 6) -> dict[tuple[IntegerPartition, IntegerPartition, IntegerPartition], int]:
    """Full table of three-factor counts at size n from one sweep of Sn x Sn."""
    _guard(n, guard)
    gamma = long_cycle(n)
    perms = [Permutation(p) for p in itertools.permutations(range(1, n + 1))]
    table: Counter = Counter()
    for a1 in perms:
        t1 = cycle_type(a1)
        beta = compose(a1.inverse(), gamma)
        for a2 in perms:
            a3 = compose(a2.inverse(), beta)
            table[(t1, cycle_type(a2), cycle_type(a3))] += 1
    return dict(table)


def c3_via_types(
    lam: IntegerPartition,
    mu: IntegerPartition,
    nu: IntegerPartition,
    *,
    guard: int = 7,
) -> int:
    """Partitioned count via refinement: sum of coarsening-count products
    against the three-factor table.

    >>> c3_via_types((2,), (2,), (2,))
    4
    """
    from .perm_core import coarsening_count

    n = _check(lam, mu, nu)
    _guard(n, guard)
    lam, mu, nu = make_partition(lam), make_partition(mu), make_partition(nu)
    if n <= 6:
        table = k3_table(n)
        total = 0
        for (t1, t2, t3), k in table.items():
            r1 = coarsening_count(t1, lam)
            if not r1:
                continue
            r2 = coarsening_count(t2, mu)
            if not r2:
                continue
            r3 = coarsening_count(t3, nu)
            if r3:
                total += r1 * r2 * r3 * k
        return total
    # per-triple accumulation without materializing the n=7 table
    gamma = long_cycle(n)
    total = 0
    for t1 in enumerate_partitions(n):
        r1 = coarsening_count(t1, lam)
        if not r1:
            continue
        for a1 in conjugacy_class(n, t1):
            beta = compose(a1.inverse(), gamma)
            for a2 in _all_perms(n):
                r2 = coarsening_count(cycle_type(a2), mu)
                if not r2:
                    continue
                r3 = coarsening_count(cycle_type(compose(a2.inverse(), beta)), nu)
                if r3:
                    total += r1 * r2 * r3
    return total


@lru_cache(maxsize=4)
def _all_perms(n: int) -> tuple[Permutation, ...]:
    return tuple(Permutation(p) for p in itertools.permutations(range(1, n + 1)))


@lru_cache(maxsize=None)
def _stable_pairs(n: int, lam: IntegerPartition) -> tuple[tuple[tuple[int, ...], int], ...]:
    """(images, multiplicity) for pairs (P, a) where P is a set partition of
    type lam and a permutes each block of P within itself; multiplicity is the
    number of such P for that a."""
    tally: Counter = Counter()
    for P in enumerate_set_partitions_of_type(n, lam):
        blocks = [sorted(b) for b in P]
        for assign in itertools.product(*(itertools.permutations(b) for b in blocks)):
            images = [0] * n
            for blk, img in zip(blocks, assign):
                for x, y in zip(blk, img):
                    images[x - 1] = y
            tally[tuple(images)] += 1
    return tuple(tally.items())


def _groupings(items: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Set partitions of a tuple of labelled items (by position)."""
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for r in range(len(rest) + 1):
        for combo in itertools.combinations(range(len(rest)), r):
            block = (first,) + tuple(rest[i] for i in combo)
            left = tuple(rest[i] for i in range(len(rest)) if i not in combo)
            for tail in _groupings(left):
                yield (block,) + tail


@lru_cache(maxsize=None)
def _grouping_types(sizes: IntegerPartition) -> dict[IntegerPartition, int]:
    """For a permutation with the given cycle sizes: how many set partitions
    of the ground set into blocks that are unions of its cycles exist, per
    resulting block type.  Cycles are distinguishable, so the answer depends
    only on the multiset of sizes; it is found by literally grouping them."""
    out: Counter = Counter()
    for grouping in _groupings(sizes):
        t = tuple(sorted((sum(g) for g in grouping), reverse=True))
        out[t] += 1
    return dict(out)


@lru_cache(maxsize=None)
def _alpha3_tally(n: int, lam: IntegerPartition, mu: IntegerPartition) -> tuple[tuple[tuple[int, ...], int], ...]:
    gamma = long_cycle(n)
    tally: Counter = Counter()
    for img1, c1 in _stable_pairs(n, lam):
        beta = compose(Permutation(img1).inverse(), gamma).images
        for img2, c2 in _stable_pairs(n, mu):
            inv2 = [0] * n
            for i, j in enumerate(img2, start=1):
                inv2[j - 1] = i
            a3 = tuple(inv2[beta[i] - 1] for i in range(n))
            tally[a3] += c1 * c2
    return tuple(tally.items())


def c3_direct(
    lam: IntegerPartition,
    mu: IntegerPartition,
    nu: IntegerPartition,
    *,
    guard: int = 6,
) -> int:
    """Partitioned count by direct construction: enumerate (P1, a1) and
    (P2, a2) stable pairs, derive a3, and count stable third partitions by
    grouping the cycles of a3.  Shares nothing with :func:`c3_via_types`.

    >>> c3_direct((2,), (2,), (2,))
    4
    """
    n = _check(lam, mu, nu)
    _guard(n, guard)
    lam, mu, nu = make_partition(lam), make_partition(mu), make_partition(nu)
    total = 0
    for a3, weight in _alpha3_tally(n, lam, mu):
        total += weight * _grouping_types(cycle_type(Permutation(a3))).get(nu, 0)
    return total


def c2_brute(lam: IntegerPartition, mu: IntegerPartition, *, guard: int = 8) -> int:
    """Two-factor partitioned count: tuples (P1, P2, a) where the blocks of
    P1 are unions of cycles of a and those of P2 are unions of cycles of
    a^-1 (long cycle).

    >>> c2_brute((2, 1), (2, 1))
    3
    >>> c2_brute((2,), (2,))
    2
    """
    n = _check(lam, mu)
    _guard(n, guard)
    lam, mu = make_partition(lam), make_partition(mu)
    total = 0
    for (t1, t2), count in _two_factor_sweep(n).items():
        ga = _grouping_types(t1).get(lam, 0)
        if not ga:
            continue
        gb = _grouping_types(t2).get(mu, 0)
        if gb:
            total += count * ga * gb
    return total


@lru_cache(maxsize=None)
def _two_factor_sweep(n: int) -> dict[tuple[IntegerPartition, IntegerPartition], int]:
    """One sweep of Sn tallying (type of a, type of a^-1 gamma)."""
    gamma = long_cycle(n)
    out: Counter = Counter()
    for p in itertools.permutations(range(1, n + 1)):
        a = Permutation(p)
        b = compose(a.inverse(), gamma)
        out[(cycle_type(a), cycle_type(b))] += 1
    return dict(out)


def enumerate_partitioned_cacti(
    lam: IntegerPartition,
    mu: IntegerPartition,
    nu: IntegerPartition,
    *,
    guard: int = 5,
) -> Iterator[PartitionedCactus]:
    """Every partitioned factorization with the given block types, exactly
    once, in canonical block indexing."""
    n = _check(lam, mu, nu)
    _guard(n, guard)
    lam, mu, nu = make_partition(lam), make_partition(mu), make_partition(nu)
    gamma = long_cycle(n)
    for P1 in enumerate_set_partitions_of_type(n, lam):
        blocks1 = [sorted(b) for b in P1]
        for assign1 in itertools.product(*(itertools.permutations(b) for b in blocks1)):
            images1 = [0] * n
            for blk, img in zip(blocks1, assign1):
                for x, y in zip(blk, img):
                    images1[x - 1] = y
            a1 = Permutation(tuple(images1))
            beta = compose(a1.inverse(), gamma)
            for P2 in enumerate_set_partitions_of_type(n, mu):
                blocks2 = [sorted(b) for b in P2]
                for assign2 in itertools.product(*(itertools.permutations(b) for b in blocks2)):
                    images2 = [0] * n
                    for blk, img in zip(blocks2, assign2):
                        for x, y in zip(blk, img):
                            images2[x - 1] = y
                    a2 = Permutation(tuple(images2))
                    a3 = compose(a2.inverse(), beta)
                    for P3 in enumerate_set_partitions_of_type(n, nu):
                        if not blocks_stable(P3, a3):
                            continue
                        root = next(b for b in P1 if 1 in b)
                        pi1 = tuple(b for b in P1 if b is not root) + (root,)
                        yield PartitionedCactus(pi1, P2, P3, a1, a2).canonical()
