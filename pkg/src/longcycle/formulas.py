"""Closed-form counts for long-cycle factorizations and their tree models.

Everything here is exact integer arithmetic.  Each closed form mirrors an
independent brute-force oracle elsewhere in the package (``enumeration`` for
factorization counts, ``cactus`` for tree counts); the test suite compares
the two routes at small scale.

The module also hosts the multivariate generating-series fixed point whose
coefficients count thorn cactus trees, truncated to a chosen total weight:
six ordinary variables mark vertex counts per color and triangle counts per
root color, and three infinite alphabets mark vertex degrees per color.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .cactus import count_thorn_cactus_trees
from .perm_core import (
    IntegerPartition,
    InternalInconsistencyError,
    aut,
    genus,
    make_partition,
)

__all__ = [
    "CLOSED_FORM",
    "ORACLE",
    "MCoeff",
    "SeriesState",
    "binomial",
    "trinomial",
    "multinomial",
    "falling_factorial",
    "m_coeff",
    "c3_closed",
    "c3_via_trees",
    "c2_closed",
    "k3_genus0",
    "thorn_cactus_count",
    "thorn_cactus_count_info",
    "bicolored_tree_count",
    "prop3_identity",
    "series_fixed_point",
    "series_fixed_point_bicolored",
    "series_tree_count",
    "series_bicolored_count",
]


# how a thorn_cactus_count value was obtained
CLOSED_FORM = "closed-form"
ORACLE = "oracle"


def binomial(a: int, b: int) -> int:
    """Binomial coefficient with the convention C(a, b) = 0 unless 0 <= b <= a.

    >>> binomial(4, 2), binomial(4, 5), binomial(-1, 0), binomial(3, -1)
    (6, 0, 0, 0)
    """
    return math.comb(a, b) if 0 <= b <= a else 0


def trinomial(a: int, k1: int, k2: int) -> int:
    """a! / (k1! k2! (a-k1-k2)!) — zero when any of the three parts or a is
    negative.

    >>> trinomial(4, 1, 1), trinomial(3, 0, 0), trinomial(2, 1, 2)
    (12, 1, 0)
    """
    return binomial(a, k1) * binomial(a - k1, k2)


def multinomial(n: int, parts: Sequence[int]) -> int:
    """n! / (k1! ... kj! (n - sum)!) with an implicit final part absorbing the
    remainder; zero when any listed part or the remainder is negative.

    >>> multinomial(4, (2, 1)), multinomial(2, (1, 1, 1)), multinomial(3, (-1,))
    (12, 0, 0)
    """
    if n < 0 or any(k < 0 for k in parts):
        return 0
    left = n
    out = 1
    for k in parts:
        out *= binomial(left, k)
        left -= k
        if out == 0:
            return 0
    return out


def falling_factorial(m: int, r: int) -> int:
    """m (m-1) ... (m-r+1), the number of ordered r-subsets of an m-set;
    zero when r < 0, m < 0 or r > m.

    >>> falling_factorial(5, 2), falling_factorial(3, 0), falling_factorial(2, 3)
    (20, 1, 0)
    """
    return math.perm(m, r) if 0 <= r <= m else 0


def _common_weight(*partitions: IntegerPartition) -> int:
    n = sum(partitions[0])
    if any(sum(p) != n for p in partitions[1:]):
        raise ValueError(f"partitions must have equal weight: {partitions!r}")
    if n < 1:
        raise ValueError("weight must be at least 1")
    return n


def m_coeff(n: int, l1: int, l2: int, l3: int) -> int:
    """The central binomial sum of the three-factor counting formula, at
    weight n and part counts l1, l2, l3.

    >>> m_coeff(1, 1, 1, 1), m_coeff(2, 1, 1, 1), m_coeff(5, 4, 3, 4)
    (1, 1, 12)
    """
    if n < 1 or not all(1 <= l <= n for l in (l1, l2, l3)):
        raise ValueError(f"need 1 <= l1, l2, l3 <= n, got {(n, l1, l2, l3)}")
    total = sum(
        binomial(n - l2, l1 - 1 - g) * binomial(n - l3, g) * binomial(n - 1 - g, n - l2)
        for g in range(n)
    )
    return binomial(n - 1, l3 - 1) * total


@dataclass(frozen=True, slots=True)
class MCoeff:
    """An evaluated central binomial sum together with its arguments."""

    n: int
    l1: int
    l2: int
    l3: int
    value: int

    @staticmethod
    def evaluate(n: int, l1: int, l2: int, l3: int) -> "MCoeff":
        return MCoeff(n, l1, l2, l3, m_coeff(n, l1, l2, l3))


def c3_closed(
    lam: IntegerPartition, mu: IntegerPartition, nu: IntegerPartition
) -> int:
    """Number of partitioned three-factor decompositions of the long cycle
    with block types (lam, mu, nu), by the closed formula.

    >>> c3_closed((1,), (1,), (1,))
    1
    >>> c3_closed((2,), (2,), (2,))
    4
    >>> c3_closed((2, 1, 1, 1), (2, 2, 1), (2, 1, 1, 1))
    25
    """
    lam, mu, nu = make_partition(lam), make_partition(mu), make_partition(nu)
    n = _common_weight(lam, mu, nu)
    l1, l2, l3 = len(lam), len(mu), len(nu)
    num = math.factorial(n) ** 2 * m_coeff(n, l1, l2, l3)
    den = (
        aut(lam)
        * aut(mu)
        * aut(nu)
        * binomial(n - 1, l1 - 1)
        * binomial(n - 1, l2 - 1)
        * binomial(n - 1, l3 - 1)
    )
    value, rem = divmod(num, den)
    if rem:
        raise InternalInconsistencyError(
            f"three-factor closed form is not an integer at {(lam, mu, nu)}"
        )
    return value


def c2_closed(lam: IntegerPartition, mu: IntegerPartition) -> int:
    """Number of partitioned two-factor decompositions of the long cycle with
    block types (lam, mu), by the closed formula; 0 when the part counts
    exceed the planar bound len(lam) + len(mu) <= n + 1.

    >>> c2_closed((1,), (1,)), c2_closed((2,), (2,)), c2_closed((2, 1), (2, 1))
    (1, 2, 3)
    >>> c2_closed((1, 1), (1, 1))
    0
    """
    lam, mu = make_partition(lam), make_partition(mu)
    n = _common_weight(lam, mu)
    l1, l2 = len(lam), len(mu)
    if l1 + l2 > n + 1:
        return 0
    num = n * math.factorial(n - l1) * math.factorial(n - l2)
    den = math.factorial(n + 1 - l1 - l2) * aut(lam) * aut(mu)
    value, rem = divmod(num, den)
    if rem:
        raise InternalInconsistencyError(
            f"two-factor closed form is not an integer at {(lam, mu)}"
        )
    return value


def k3_genus0(
    lam: IntegerPartition, mu: IntegerPartition, nu: IntegerPartition
) -> int | Fraction:
    """The classical genus-zero expression for the three-factor connection
    coefficient.  Only genus-zero cycle-type triples are accepted; any other
    triple raises ValueError.

    The exact value is returned even if it is not an integer, so callers can
    audit the expression against enumeration instead of trusting it blindly.

    >>> k3_genus0((2, 1, 1, 1), (2, 2, 1), (2, 1, 1, 1))
    25
    >>> k3_genus0((1, 1), (1, 1), (2,))
    1
    """
    lam, mu, nu = make_partition(lam), make_partition(mu), make_partition(nu)
    n = _common_weight(lam, mu, nu)
    if genus((lam, mu, nu), n) != 0:
        raise ValueError(f"triple {(lam, mu, nu)} does not have genus zero")
    l1, l2, l3 = len(lam), len(mu), len(nu)
    value = Fraction(
        n * n
        * math.factorial(l1 - 1)
        * math.factorial(l2 - 1)
        * math.factorial(l3 - 1),
        aut(lam) * aut(mu) * aut(nu),
    )
    return int(value) if value.denominator == 1 else value


def thorn_cactus_count_info(
    lam: IntegerPartition,
    mu: IntegerPartition,
    nu: IntegerPartition,
    g: int,
    w: int,
    b: int,
) -> tuple[int, str]:
    """Number of thorn cactus trees with the given degree distributions and
    triangle counts, plus how the number was obtained.

    The second component is ``CLOSED_FORM`` normally, and ``ORACLE`` when the
    closed form degenerates to 0/0 (its denominator ``n - len(lam) -
    len(mu) + g + 1`` vanishes) and the count falls back to the exhaustive
    search-space counter.

    >>> thorn_cactus_count_info((2,), (2,), (2,), 0, 0, 0)
    (2, 'closed-form')
    >>> thorn_cactus_count_info((1,), (1,), (1,), 0, 1, 0)
    (1, 'oracle')
    """
    lam, mu, nu = make_partition(lam), make_partition(mu), make_partition(nu)
    n = _common_weight(lam, mu, nu)
    if min(g, w, b) < 0:
        raise ValueError(f"triangle counts must be non-negative: {(g, w, b)}")
    l1, l2, l3 = len(lam), len(mu), len(nu)
    den = n - l1 - l2 + g + 1
    if den == 0:
        return count_thorn_cactus_trees(lam, mu, nu, g, w, b), ORACLE
    num = (
        n
        * math.factorial(l1 - 1)
        * math.factorial(l2 - 1)
        * math.factorial(l3 - 1)
        * (g * (w - l3) + l2 * l3)
        * trinomial(n - l1, w, l2 - g - w)
        * trinomial(n - l2, b, l3 - w - b)
        * trinomial(n - l3, g, l1 - 1 - g - b)
    )
    value, rem = divmod(num, aut(lam) * aut(mu) * aut(nu) * den)
    if rem:
        raise InternalInconsistencyError(
            f"tree-count closed form is not an integer at {(lam, mu, nu, g, w, b)}"
        )
    if value < 0:
        raise InternalInconsistencyError(
            f"tree-count closed form is negative at {(lam, mu, nu, g, w, b)}"
        )
    return value, CLOSED_FORM


def thorn_cactus_count(
    lam: IntegerPartition,
    mu: IntegerPartition,
    nu: IntegerPartition,
    g: int,
    w: int,
    b: int,
) -> int:
    """Number of thorn cactus trees with the given degree distributions and
    triangle counts (``thorn_cactus_count_info`` without the method tag).

    >>> thorn_cactus_count((4, 2), (4, 2), (4, 1, 1), 0, 1, 1)
    1728
    """
    return thorn_cactus_count_info(lam, mu, nu, g, w, b)[0]


def c3_via_trees(
    lam: IntegerPartition, mu: IntegerPartition, nu: IntegerPartition
) -> int:
    """Partitioned three-factor count assembled from tree counts: sum over
    triangle counts of (number of trees) x (two symmetric-group orders) x
    (number of ordered subsets).  Must agree with ``c3_closed`` — the two
    routes share no code.

    >>> c3_via_trees((2, 1, 1, 1), (2, 2, 1), (2, 1, 1, 1))
    25
    """
    lam, mu, nu = make_partition(lam), make_partition(mu), make_partition(nu)
    n = _common_weight(lam, mu, nu)
    l1, l2, l3 = len(lam), len(mu), len(nu)
    total = 0
    for g, w, b in product(range(l1), range(l2 + 1), range(l3 + 1)):
        trees = thorn_cactus_count(lam, mu, nu, g, w, b)
        if trees == 0:
            continue
        size1 = n + 1 - l1 - l3 + b
        size2 = n - l2 - l3 + w
        if size1 < 0 or size2 < 0:
            raise InternalInconsistencyError(
                f"non-empty tree family with negative factor size at "
                f"{(lam, mu, nu, g, w, b)}"
            )
        total += (
            trees
            * math.factorial(size1)
            * math.factorial(size2)
            * falling_factorial(n + 1 - l1 - l2 + g, l3 - w - b)
        )
    return total


def bicolored_tree_count(lam: IntegerPartition, mu: IntegerPartition) -> int:
    """Number of bicolored thorn trees with white/black degree distributions
    lam/mu; 0 when len(lam) + len(mu) > n + 1.

    >>> bicolored_tree_count((1,), (1,)), bicolored_tree_count((2,), (2,))
    (1, 2)
    >>> bicolored_tree_count((2, 1), (2, 1))
    3
    """
    lam, mu = make_partition(lam), make_partition(mu)
    n = _common_weight(lam, mu)
    l1, l2 = len(lam), len(mu)
    if l1 + l2 > n + 1:
        return 0
    num = n * math.factorial(n - l1) * math.factorial(n - l2)
    den = aut(lam) * aut(mu) * math.factorial(n + 1 - l1 - l2) ** 2
    value, rem = divmod(num, den)
    if rem:
        raise InternalInconsistencyError(
            f"bicolored tree count is not an integer at {(lam, mu)}"
        )
    return value


def prop3_identity(n: int, l1: int, l2: int, l3: int) -> bool:
    """Check the summed binomial identity behind the tree decomposition: the
    weighted multinomial sum over triangle counts (g, w, b) equals n^2 times
    the central binomial sum.  True means the two sides agree.

    >>> all(prop3_identity(4, l1, l2, l3)
    ...     for l1 in (1, 2, 3, 4) for l2 in (1, 2, 3, 4) for l3 in (1, 2, 3, 4))
    True
    """
    if n < 1 or not all(1 <= l <= n for l in (l1, l2, l3)):
        raise ValueError(f"need 1 <= l1, l2, l3 <= n, got {(n, l1, l2, l3)}")
    lhs = 0
    for g, w, b in product(range(l1), range(l2 + 1), range(l3 + 1)):
        lhs += (l2 * l3 + g * (w - l3)) * multinomial(
            n, (w, g, b, l1 - 1 - g - b, l2 - g - w, l3 - w - b)
        )
    rhs = n * n * m_coeff(n, l1, l2, l3)
    return lhs == rhs


# ---------------------------------------------------------------------------
# generating-series fixed point
#
# A polynomial is a dict mapping a flat monomial key to an integer
# coefficient.  A key of truncation order N is a tuple of 6 + 3N exponents:
#   key[0:6]       the six ordinary variables (x1, x2, x3 mark white/black/
#                  grey vertices; x4, x5, x6 mark triangles rooted at grey/
#                  white/black vertices)
#   key[6:6+N]     the white degree alphabet (entry i marks degree i+1)
#   key[6+N:6+2N]  the black degree alphabet
#   key[6+2N:]     the grey degree alphabet
# Monomials whose weighted degree sum (i+1) * exponent in any one alphabet
# exceeds the truncation order are dropped everywhere.
#
# The three vertex equations map onto each other under the color rotation
# white -> black -> grey -> white (variables x1 -> x2 -> x3 -> x1, triangle
# markers x5 -> x6 -> x4 -> x5, alphabets likewise), so only the white series
# is iterated; the black and grey tables are key rotations of it.
# ---------------------------------------------------------------------------

SeriesKey = tuple[int, ...]
SeriesTable = Mapping[SeriesKey, int]


@dataclass(frozen=True, slots=True)
class SeriesState:
    """A converged, truncated solution of the vertex-series fixed point.

    ``white``/``black``/``grey`` are the coefficient tables of the three
    mutually recursive rooted-subtree series, and ``full`` is the whole-tree
    series whose coefficients count thorn cactus trees (for the bicolored
    variant the grey table is empty and ``full`` counts bicolored thorn
    trees).  All coefficients of weight up to ``order`` are exact.
    """

    order: int
    white: SeriesTable
    black: SeriesTable
    grey: SeriesTable
    full: SeriesTable


def _alphabet_weights(key: SeriesKey, order: int) -> tuple[int, int, int]:
    tw = uw = vw = 0
    for i in range(order):
        d = i + 1
        tw += d * key[6 + i]
        uw += d * key[6 + order + i]
        vw += d * key[6 + 2 * order + i]
    return tw, uw, vw


def _poly_one(order: int) -> dict[SeriesKey, int]:
    return {(0,) * (6 + 3 * order): 1}


def _poly_add(*polys: SeriesTable) -> dict[SeriesKey, int]:
    out: dict[SeriesKey, int] = {}
    for p in polys:
        for key, coeff in p.items():
            out[key] = out.get(key, 0) + coeff
    return out


def _bucketed(
    p: SeriesTable, order: int
) -> dict[tuple[int, int, int], list[tuple[SeriesKey, int]]]:
    """Group terms by their per-alphabet weight triple, so a product can
    reject incompatible groups wholesale instead of term pair by term pair."""
    buckets: dict[tuple[int, int, int], list[tuple[SeriesKey, int]]] = {}
    for key, coeff in p.items():
        buckets.setdefault(_alphabet_weights(key, order), []).append((key, coeff))
    return buckets


def _poly_mul(a: SeriesTable, b: SeriesTable, order: int) -> dict[SeriesKey, int]:
    if not a or not b:
        return {}
    out: dict[SeriesKey, int] = {}
    get = out.get
    b_buckets = list(_bucketed(b, order).items())
    for (ta, ua, va), items_a in _bucketed(a, order).items():
        for (tb, ub, vb), items_b in b_buckets:
            if ta + tb > order or ua + ub > order or va + vb > order:
                continue
            for ka, ca in items_a:
                for kb, cb in items_b:
                    key = tuple(map(operator.add, ka, kb))
                    out[key] = get(key, 0) + ca * cb
    return out


def _poly_shift(p: SeriesTable, delta: SeriesKey, order: int) -> dict[SeriesKey, int]:
    dt, du, dv = _alphabet_weights(delta, order)
    out: dict[SeriesKey, int] = {}
    for key, coeff in p.items():
        tw, uw, vw = _alphabet_weights(key, order)
        if tw + dt > order or uw + du > order or vw + dv > order:
            continue
        out[tuple(map(operator.add, key, delta))] = coeff
    return out


def _variable_delta(order: int, xindex: int) -> SeriesKey:
    delta = [0] * (6 + 3 * order)
    delta[xindex] = 1
    return tuple(delta)


def _rotate(p: SeriesTable, order: int) -> dict[SeriesKey, int]:
    """Apply the color rotation white -> black -> grey -> white to every
    monomial: x1 -> x2 -> x3 -> x1, x4 -> x5 -> x6 -> x4, and each degree
    alphabet to the next color's alphabet."""
    out: dict[SeriesKey, int] = {}
    for key, coeff in p.items():
        x = key[:6]
        t = key[6 : 6 + order]
        u = key[6 + order : 6 + 2 * order]
        v = key[6 + 2 * order :]
        out[(x[2], x[0], x[1], x[5], x[3], x[4]) + v + t + u] = coeff
    return out


def _swap_colors(p: SeriesTable, order: int) -> dict[SeriesKey, int]:
    """Exchange white and black (x1 <-> x2 and their alphabets) — the
    symmetry of the bicolored system."""
    out: dict[SeriesKey, int] = {}
    for key, coeff in p.items():
        x = key[:6]
        t = key[6 : 6 + order]
        u = key[6 + order : 6 + 2 * order]
        v = key[6 + 2 * order :]
        out[(x[1], x[0], x[2], x[3], x[4], x[5]) + u + t + v] = coeff
    return out


def _vertex_series(
    slot_factor: SeriesTable, order: int, xindex: int, alphabet: int
) -> dict[SeriesKey, int]:
    """x_{xindex+1} * sum over degree d = i+1 of (degree marker) * factor^i:
    the series of one colored vertex with i slots, each slot carrying
    ``slot_factor``."""
    acc: dict[SeriesKey, int] = {}
    power = _poly_one(order)
    for i in range(order):
        delta = [0] * (6 + 3 * order)
        delta[xindex] = 1
        delta[6 + (alphabet - 1) * order + i] = 1
        acc = _poly_add(acc, _poly_shift(power, tuple(delta), order))
        if i + 1 < order:
            power = _poly_mul(power, slot_factor, order)
    return acc


def series_fixed_point(order: int) -> SeriesState:
    """Solve the three-color vertex series by fixed-point iteration, keeping
    every coefficient of per-alphabet weight up to ``order``.

    Each slot of a white vertex is empty (a thorn), a black subtree, or a
    black-grey triangle marked x5; black and grey vertices are analogous with
    markers x6 and x4.  Iteration stops at the first pass that changes no
    coefficient.

    >>> state = series_fixed_point(2)
    >>> series_tree_count(state, (2,), (2,), (2,), 0, 0, 0)
    2
    """
    if order < 1:
        raise ValueError("truncation order must be at least 1")
    one = _poly_one(order)
    x5 = _variable_delta(order, 4)
    white: dict[SeriesKey, int] = {}
    while True:
        black = _rotate(white, order)
        grey = _rotate(black, order)
        slot_w = _poly_add(
            one, black, _poly_shift(_poly_mul(black, grey, order), x5, order)
        )
        new_w = _vertex_series(slot_w, order, 0, 1)
        if new_w == white:
            break
        white = new_w
    full = _poly_mul(white, slot_w, order)
    return SeriesState(order, white, black, grey, full)


def series_fixed_point_bicolored(order: int) -> SeriesState:
    """Two-color analogue of ``series_fixed_point``: no triangles, slots are
    thorns or subtrees of the other color.  The returned state's ``full``
    table counts bicolored thorn trees and its grey table is empty.

    >>> state = series_fixed_point_bicolored(3)
    >>> series_bicolored_count(state, (2, 1), (2, 1))
    3
    """
    if order < 1:
        raise ValueError("truncation order must be at least 1")
    one = _poly_one(order)
    white: dict[SeriesKey, int] = {}
    while True:
        black = _swap_colors(white, order)
        slot_w = _poly_add(one, black)
        new_w = _vertex_series(slot_w, order, 0, 1)
        if new_w == white:
            break
        white = new_w
    full = _poly_mul(white, slot_w, order)
    return SeriesState(order, white, black, {}, full)


def _multiplicity_vector(lam: IntegerPartition, order: int) -> tuple[int, ...]:
    vec = [0] * order
    for part in lam:
        vec[part - 1] += 1
    return tuple(vec)


def series_tree_count(
    state: SeriesState,
    lam: IntegerPartition,
    mu: IntegerPartition,
    nu: IntegerPartition,
    g: int,
    w: int,
    b: int,
) -> int:
    """Coefficient of the whole-tree series at the monomial encoding
    (lam, mu, nu, g, w, b) — the series route to the thorn cactus tree count.
    The common weight must not exceed the state's truncation order."""
    lam, mu, nu = make_partition(lam), make_partition(mu), make_partition(nu)
    n = _common_weight(lam, mu, nu)
    if n > state.order:
        raise ValueError(f"weight {n} exceeds truncation order {state.order}")
    key = (
        (len(lam), len(mu), len(nu), g, w, b)
        + _multiplicity_vector(lam, state.order)
        + _multiplicity_vector(mu, state.order)
        + _multiplicity_vector(nu, state.order)
    )
    return state.full.get(key, 0)


def series_bicolored_count(
    state: SeriesState, lam: IntegerPartition, mu: IntegerPartition
) -> int:
    """Coefficient of the bicolored whole-tree series at (lam, mu) — the
    series route to the bicolored thorn tree count."""
    lam, mu = make_partition(lam), make_partition(mu)
    n = _common_weight(lam, mu)
    if n > state.order:
        raise ValueError(f"weight {n} exceeds truncation order {state.order}")
    key = (
        (len(lam), len(mu), 0, 0, 0, 0)
        + _multiplicity_vector(lam, state.order)
        + _multiplicity_vector(mu, state.order)
        + (0,) * state.order
    )
    return state.full.get(key, 0)
