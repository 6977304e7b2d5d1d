"""Permutations, integer partitions, and set partitions on the ground set {1..n}.

This module is the algebraic substrate for the rest of the package: exact
permutation arithmetic with a fixed composition convention, cycle types,
orbit partitions, block-stability tests, partition enumeration, the
refinement-order coarsening count, and the genus of a tuple of cycle types.

Conventions used throughout the package:

* permutations act on {1..n} and are stored as image sequences
  (``images[i-1]`` is the image of ``i``);
* ``compose(p, q)`` is the map ``i -> p(q(i))`` — q acts first;
* integer partitions are weakly decreasing tuples of positive integers;
* set partitions are tuples of disjoint frozensets covering {1..n}; the
  tuple order *is* the block indexing (1-based in prose, 0-based in code).
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

IntegerPartition = tuple[int, ...]
SetPartition = tuple[frozenset[int], ...]

__all__ = [
    "InternalInconsistencyError",
    "Permutation",
    "PartitionedCactus",
    "IntegerPartition",
    "SetPartition",
    "compose",
    "identity",
    "long_cycle",
    "cycle_type",
    "cycles",
    "blocks_stable",
    "aut",
    "make_partition",
    "enumerate_partitions",
    "enumerate_set_partitions_of_type",
    "count_set_partitions_of_type",
    "coarsening_count",
    "genus",
    "set_partition_type",
    "parse_partition",
    "format_partition",
    "parse_permutation",
    "format_cycles",
    "format_one_line",
    "parse_set_partition",
    "format_set_partition",
]


class InternalInconsistencyError(RuntimeError):
    """A consistency check that must hold for every valid input has failed.

    Raised when two internal computations that are provably equal disagree
    (for example, a closed-form count that must be an integer evaluating to a
    non-integer).  Seeing this exception means a bug in this package, never a
    bad input: bad inputs raise :class:`ValueError` instead.
    """


@dataclass(frozen=True, slots=True)
class Permutation:
    """A bijection of {1..n}, stored as the tuple of images of 1..n.

    >>> p = Permutation((2, 1, 3))
    >>> p(1), p(2), p(3)
    (2, 1, 3)
    >>> p.inverse() == p
    True
    """

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise ValueError(f"not a bijection of {{1..{n}}}: {self.images!r}")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Permutation(tuple(inv))

    def cycle_type(self) -> IntegerPartition:
        return set_partition_type(self.cycles())

    def cycles(self) -> SetPartition:
        """Orbit partition, blocks ordered by minimum element.

        >>> Permutation((3, 2, 4, 1, 5, 6)).cycles()
        (frozenset({1, 3, 4}), frozenset({2}), frozenset({5}), frozenset({6}))
        """
        seen: set[int] = set()
        blocks: list[frozenset[int]] = []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            orbit = [start]
            j = self.images[start - 1]
            while j != start:
                orbit.append(j)
                j = self.images[j - 1]
            seen.update(orbit)
            blocks.append(frozenset(orbit))
        return tuple(blocks)

    def __repr__(self) -> str:  # compact, stable for fixtures
        return f"Permutation({self.images!r})"


def compose(p: Permutation, q: Permutation) -> Permutation:
    """The product p∘q acting as i -> p(q(i)) (q first).

    >>> compose(Permutation((2, 1)), Permutation((2, 1)))
    Permutation((1, 2))
    """
    if p.n != q.n:
        raise ValueError(f"size mismatch: {p.n} vs {q.n}")
    pi = p.images
    return Permutation(tuple(pi[j - 1] for j in q.images))


def identity(n: int) -> Permutation:
    if n < 0:
        raise ValueError("negative ground set size")
    return Permutation(tuple(range(1, n + 1)))


def long_cycle(n: int) -> Permutation:
    """The cycle (1, 2, ..., n): i -> i+1, n -> 1.

    >>> long_cycle(5)(5)
    1
    """
    if n < 1:
        raise ValueError("long cycle needs n >= 1")
    return Permutation(tuple(range(2, n + 1)) + (1,))


def cycle_type(p: Permutation) -> IntegerPartition:
    """Multiset of cycle lengths, sorted decreasingly.

    >>> cycle_type(parse_permutation("(1 2 3 6)(4)(5)"))
    (4, 1, 1)
    """
    return p.cycle_type()


def cycles(p: Permutation) -> SetPartition:
    return p.cycles()


def blocks_stable(pi: SetPartition, p: Permutation) -> bool:
    """True iff every block of pi is a union of orbits of p.

    >>> pi = parse_set_partition("1,3,4,5|2,6")
    >>> blocks_stable(pi, parse_permutation("(1 5 3)(2)(4)(6)"))
    True
    >>> blocks_stable((frozenset({1, 2}), frozenset({3})), parse_permutation("(1 2 3)"))
    False
    """
    images = p.images
    for block in pi:
        for i in block:
            if images[i - 1] not in block:
                return False
    return True


# ---------------------------------------------------------------------------
# integer partitions


def make_partition(parts: Iterable[int]) -> IntegerPartition:
    """Normalize to a weakly decreasing tuple; reject non-positive parts."""
    t = tuple(sorted(parts, reverse=True))
    if any((not isinstance(x, int)) or x < 1 for x in t):
        raise ValueError(f"parts must be positive integers: {t!r}")
    return t


def aut(lam: IntegerPartition) -> int:
    """Product of factorials of part multiplicities.

    >>> aut((2, 1, 1, 1))
    6
    """
    total = 1
    for _, grp in itertools.groupby(lam):
        total *= math.factorial(sum(1 for _ in grp))
    return total


def enumerate_partitions(n: int) -> Iterator[IntegerPartition]:
    """All partitions of n, lexicographically descending.

    >>> list(enumerate_partitions(4))[:3]
    [(4,), (3, 1), (2, 2)]
    >>> sum(1 for _ in enumerate_partitions(8))
    22
    """
    if n < 0:
        raise ValueError("negative weight")

    def rec(remaining: int, cap: int) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield ()
            return
        for k in range(min(remaining, cap), 0, -1):
            for rest in rec(remaining - k, k):
                yield (k,) + rest

    return rec(n, n)


def set_partition_type(pi: SetPartition) -> IntegerPartition:
    return tuple(sorted((len(b) for b in pi), reverse=True))


def enumerate_set_partitions_of_type(n: int, t: IntegerPartition) -> Iterator[SetPartition]:
    """All set partitions of {1..n} with block sizes t, exactly once each.

    Blocks are emitted sorted by minimum element.

    >>> [format_set_partition(pi) for pi in enumerate_set_partitions_of_type(3, (2, 1))]
    ['1,2|3', '1,3|2', '1|2,3']
    """
    t = make_partition(t)
    if sum(t) != n:
        raise ValueError(f"type {t!r} does not partition {n}")

    def rec(remaining: tuple[int, ...], sizes: tuple[int, ...]) -> Iterator[tuple[frozenset[int], ...]]:
        if not remaining:
            yield ()
            return
        first, rest = remaining[0], remaining[1:]
        for size in sorted(set(sizes), reverse=True):
            idx = sizes.index(size)
            smaller = sizes[:idx] + sizes[idx + 1 :]
            for companions in itertools.combinations(rest, size - 1):
                block = frozenset((first,) + companions)
                left = tuple(x for x in rest if x not in block)
                for tail in rec(left, smaller):
                    yield (block,) + tail

    return rec(tuple(range(1, n + 1)), t)


def count_set_partitions_of_type(n: int, t: IntegerPartition) -> int:
    """n! / (prod of part factorials * aut(t))."""
    t = make_partition(t)
    if sum(t) != n:
        raise ValueError(f"type {t!r} does not partition {n}")
    denom = aut(t)
    for part in t:
        denom *= math.factorial(part)
    assert math.factorial(n) % denom == 0
    return math.factorial(n) // denom


# ---------------------------------------------------------------------------
# refinement order


def _submultisets_with_sum(values: tuple[int, ...], target: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """Sub-multisets of ``values`` with the given sum.

    Yields (chosen parts sorted descending, number of position-level ways),
    where the ways factor counts choices among equal-valued positions.
    """
    counts = sorted(
        ((v, sum(1 for x in values if x == v)) for v in set(values)), reverse=True
    )

    def rec(i: int, remaining: int) -> Iterator[tuple[tuple[int, ...], int]]:
        if remaining == 0 and i == len(counts):
            yield ((), 1)
            return
        if i == len(counts):
            return
        v, c = counts[i]
        for k in range(0, min(c, remaining // v if v else 0) + 1):
            if k * v > remaining:
                break
            for chosen, ways in rec(i + 1, remaining - k * v):
                yield ((v,) * k + chosen, ways * math.comb(c, k))

    return rec(0, target)


@lru_cache(maxsize=None)
def _coarsen_count(parts: tuple[int, ...], targets: tuple[int, ...]) -> int:
    if not parts:
        return 1 if not targets else 0
    if not targets:
        return 0
    anchor, rest = parts[0], parts[1:]
    total = 0
    for tv in sorted(set(targets), reverse=True):
        if tv < anchor:
            continue
        lst = list(targets)
        lst.remove(tv)
        remaining_targets = tuple(lst)
        for chosen, ways in _submultisets_with_sum(rest, tv - anchor):
            chosen_list = list(chosen)
            left = []
            for x in rest:
                if x in chosen_list:
                    chosen_list.remove(x)
                else:
                    left.append(x)
            total += ways * _coarsen_count(tuple(left), remaining_targets)
    return total


def coarsening_count(lam: IntegerPartition, mu: IntegerPartition) -> int:
    """Number of ways to merge the parts of lam (as labelled positions) into
    groups whose sums realize mu; 0 when mu is not coarser than lam.

    >>> coarsening_count((2, 2, 1, 1), (3, 2, 1))
    4
    >>> coarsening_count((1, 1, 1), (3,))
    1
    >>> coarsening_count((3, 1), (2, 2))
    0
    """
    lam = make_partition(lam)
    mu = make_partition(mu)
    if sum(lam) != sum(mu):
        raise ValueError(f"weight mismatch: {lam!r} vs {mu!r}")
    return _coarsen_count(lam, mu)


def genus(types: Sequence[IntegerPartition], n: int) -> int | None:
    """Genus g from sum of lengths = (r-1)n + 1 - 2g; None when not a
    non-negative integer (the corresponding coefficient is then 0).

    >>> genus([(2, 1, 1, 1), (2, 2, 1), (2, 1, 1, 1)], 5)
    0
    >>> genus([(4, 1, 1), (3, 1, 1, 1), (3, 1, 1, 1)], 6)
    1
    """
    r = len(types)
    if r < 1 or n < 1:
        raise ValueError("need at least one type and n >= 1")
    total = sum(len(t) for t in types)
    val = (r - 1) * n + 1 - total
    if val < 0 or val % 2:
        return None
    return val // 2


# ---------------------------------------------------------------------------
# parsing / formatting


def parse_partition(s: str) -> IntegerPartition:
    """Parse "4,2,1,1" (descending comma-separated parts).

    >>> parse_partition("4,2,1,1")
    (4, 2, 1, 1)
    """
    s = s.strip()
    if not s:
        return ()
    try:
        parts = [int(x) for x in s.split(",")]
    except ValueError as exc:
        raise ValueError(f"bad partition syntax: {s!r}") from exc
    return make_partition(parts)


def format_partition(lam: IntegerPartition) -> str:
    return ",".join(str(x) for x in lam)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_permutation(s: str, n: int | None = None) -> Permutation:
    """Parse cycle notation "(1 2 3 6)(4)(5)" or one-line "[3,4,5,1,2]".

    For cycle notation, n defaults to the largest element mentioned; fixed
    points beyond it must either appear as singleton cycles or be covered by
    an explicit n.

    >>> parse_permutation("[2,1,3]").images
    (2, 1, 3)
    >>> parse_permutation("(1 2)", n=3).images
    (2, 1, 3)
    """
    s = s.strip()
    if s.startswith("["):
        if not s.endswith("]"):
            raise ValueError(f"bad one-line syntax: {s!r}")
        body = s[1:-1].strip()
        images = tuple(int(x) for x in body.split(",")) if body else ()
        if n is not None and len(images) != n:
            raise ValueError(f"one-line length {len(images)} != n={n}")
        return Permutation(images)
    if not s or s[0] != "(":
        raise ValueError(f"bad permutation syntax: {s!r}")
    chunks = _CYCLE_RE.findall(s)
    if _CYCLE_RE.sub("", s).strip():
        raise ValueError(f"bad cycle syntax: {s!r}")
    cycles_ = []
    for chunk in chunks:
        elems = [int(x) for x in re.split(r"[\s,]+", chunk.strip()) if x]
        if elems:
            cycles_.append(elems)
    mentioned = [x for cyc in cycles_ for x in cyc]
    if len(set(mentioned)) != len(mentioned):
        raise ValueError(f"repeated element in cycles: {s!r}")
    size = n if n is not None else (max(mentioned) if mentioned else 0)
    if mentioned and max(mentioned) > size:
        raise ValueError(f"element {max(mentioned)} exceeds n={size}")
    images = list(range(1, size + 1))
    for cyc in cycles_:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            images[a - 1] = b
    return Permutation(tuple(images))


def format_cycles(p: Permutation) -> str:
    """Cycle notation with cycles sorted by minimum, each starting at it.

    >>> format_cycles(parse_permutation("[2,3,1,4]"))
    '(1 2 3)(4)'
    """
    out = []
    for block in p.cycles():
        start = min(block)
        cyc = [start]
        j = p(start)
        while j != start:
            cyc.append(j)
            j = p(j)
        out.append("(" + " ".join(str(x) for x in cyc) + ")")
    return "".join(out)


def format_one_line(p: Permutation) -> str:
    return "[" + ",".join(str(x) for x in p.images) + "]"


def parse_set_partition(s: str, n: int | None = None) -> SetPartition:
    """Parse blocks "4,5|1,2,3,6" in the given order (order = indexing).

    >>> [sorted(b) for b in parse_set_partition("4,5|1,2,3,6")]
    [[4, 5], [1, 2, 3, 6]]
    """
    blocks = []
    for chunk in s.strip().split("|"):
        try:
            elems = frozenset(int(x) for x in chunk.split(",") if x.strip())
        except ValueError as exc:
            raise ValueError(f"bad block syntax: {chunk!r}") from exc
        if not elems:
            raise ValueError(f"empty block in {s!r}")
        blocks.append(elems)
    pi = tuple(blocks)
    total = sum(len(b) for b in pi)
    cover = set().union(*pi) if pi else set()
    size = n if n is not None else total
    if len(cover) != total or cover != set(range(1, size + 1)):
        raise ValueError(f"blocks do not partition {{1..{size}}}: {s!r}")
    return pi


def format_set_partition(pi: SetPartition) -> str:
    return "|".join(",".join(str(x) for x in sorted(b)) for b in pi)


# ---------------------------------------------------------------------------
# partitioned cacti


@dataclass(frozen=True)
class PartitionedCactus:
    """A tuple (pi1, pi2, pi3, alpha1, alpha2) where each block of pi_i is a
    union of cycles of alpha_i (alpha3 derived so alpha1∘alpha2∘alpha3 is the
    long cycle), and element 1 lies in the last block of pi1.
    """

    pi1: SetPartition
    pi2: SetPartition
    pi3: SetPartition
    alpha1: Permutation
    alpha2: Permutation

    def __post_init__(self) -> None:
        n = self.alpha1.n
        if self.alpha2.n != n:
            raise ValueError("alpha1/alpha2 size mismatch")
        ground = set(range(1, n + 1))
        for name, pi in (("pi1", self.pi1), ("pi2", self.pi2), ("pi3", self.pi3)):
            elems = [x for b in pi for x in b]
            if len(elems) != n or set(elems) != ground:
                raise ValueError(f"{name} does not partition {{1..{n}}}")
        if 1 not in self.pi1[-1]:
            raise ValueError("element 1 must lie in the last block of pi1")
        a3 = self.alpha3
        for name, pi, a in (
            ("pi1", self.pi1, self.alpha1),
            ("pi2", self.pi2, self.alpha2),
            ("pi3", self.pi3, a3),
        ):
            if not blocks_stable(pi, a):
                raise ValueError(f"blocks of {name} are not unions of cycles")

    @property
    def n(self) -> int:
        return self.alpha1.n

    @property
    def alpha3(self) -> Permutation:
        return compose(self.alpha2.inverse(), compose(self.alpha1.inverse(), long_cycle(self.n)))

    def types(self) -> tuple[IntegerPartition, IntegerPartition, IntegerPartition]:
        return (
            set_partition_type(self.pi1),
            set_partition_type(self.pi2),
            set_partition_type(self.pi3),
        )

    def canonical(self) -> "PartitionedCactus":
        """Deterministic block indexing: pi1 non-root blocks by maximum then
        the block containing 1 last; pi2, pi3 by maximum."""
        root = self.pi1[-1] if 1 in self.pi1[-1] else next(b for b in self.pi1 if 1 in b)
        rest = sorted((b for b in self.pi1 if b is not root), key=max)
        pi1 = tuple(rest) + (root,)
        pi2 = tuple(sorted(self.pi2, key=max))
        pi3 = tuple(sorted(self.pi3, key=max))
        return PartitionedCactus(pi1, pi2, pi3, self.alpha1, self.alpha2)
