"""Degree-n symmetric-function coefficient tables in the monomial and power
bases, the power-to-monomial change of basis, and literal polynomial-expansion
oracles used to certify series identities.

A :class:`CoeffTable` stores the coefficients of a symmetric series of fixed
homogeneous degree in one alphabet (keys are partitions) or in up to three
independent alphabets (keys are tuples of partitions).  Conversion to the
monomial basis is applied alphabet-by-alphabet, which is sound because the
alphabets are disjoint variable sets.

The change of basis expands a power-sum product over coarsenings:
the coefficient of the monomial function indexed by mu inside the power
function indexed by lam equals aut(mu) * coarsening_count(lam, mu).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .perm_core import (
    IntegerPartition,
    aut,
    coarsening_count,
    enumerate_partitions,
    format_partition,
    make_partition,
    parse_partition,
)

__all__ = ["CoeffTable", "power_to_monomial", "expand_monomials", "series_equal"]

TableKey = tuple[IntegerPartition, ...]

_BASES = ("monomial", "power")


def _normalize_key(key: object) -> TableKey:
    """Accept a single partition or a tuple of partitions; return the tuple form."""
    if isinstance(key, tuple) and key and all(isinstance(x, int) for x in key):
        return (make_partition(key),)
    if isinstance(key, tuple) and key and all(isinstance(x, tuple) for x in key):
        return tuple(make_partition(p) for p in key)
    raise ValueError(f"bad coefficient key: {key!r}")


@dataclass(frozen=True)
class CoeffTable:
    """Immutable coefficient table of one homogeneous symmetric series.

    ``coeffs`` maps normalized keys (tuples of ``arity`` partitions, each of
    weight ``degree``) to nonzero integers; absent keys mean coefficient 0.
    """

    degree: int
    basis: str
    arity: int
    coeffs: dict[TableKey, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.basis not in _BASES:
            raise ValueError(f"unknown basis tag {self.basis!r}")
        if not 1 <= self.arity <= 3:
            raise ValueError(f"arity must be 1..3, got {self.arity}")
        for key, value in self.coeffs.items():
            if len(key) != self.arity:
                raise ValueError(f"key {key!r} has arity {len(key)} != {self.arity}")
            for part in key:
                if sum(part) != self.degree:
                    raise ValueError(f"key component {part!r} does not have weight {self.degree}")
            if not isinstance(value, int):
                raise ValueError(f"non-integer coefficient at {key!r}")

    @staticmethod
    def make(degree: int, basis: str, items: Mapping[object, int] | Iterable[tuple[object, int]]) -> "CoeffTable":
        """Build a table from a mapping with loose keys (single partitions or
        tuples of partitions); zero coefficients are dropped."""
        pairs = items.items() if isinstance(items, Mapping) else items
        coeffs: dict[TableKey, int] = {}
        arity = None
        for key, value in pairs:
            nk = _normalize_key(key)
            if arity is None:
                arity = len(nk)
            elif len(nk) != arity:
                raise ValueError("mixed-arity keys")
            if value:
                coeffs[nk] = coeffs.get(nk, 0) + value
        return CoeffTable(degree, basis, arity if arity is not None else 1,
                          {k: v for k, v in coeffs.items() if v})

    def __getitem__(self, key: object) -> int:
        return self.coeffs.get(_normalize_key(key), 0)

    def items(self):
        return self.coeffs.items()

    def to_monomial(self) -> "CoeffTable":
        """Convert to the monomial basis, alphabet-by-alphabet."""
        if self.basis == "monomial":
            return self
        out: dict[TableKey, int] = {}
        for key, value in self.coeffs.items():
            # expansion of the key's power product: one table per alphabet
            per_alpha = [power_to_monomial(lam).coeffs for lam in key]
            for combo in itertools.product(*(t.items() for t in per_alpha)):
                new_key = tuple(k[0] for k, _ in combo)
                factor = value
                for _, c in combo:
                    factor *= c
                out[new_key] = out.get(new_key, 0) + factor
        return CoeffTable(self.degree, "monomial", self.arity,
                          {k: v for k, v in out.items() if v})

    def to_json(self) -> str:
        """Stable JSON form: list of {key, value} entries, sorted by key."""
        entries = [
            {"key": "|".join(format_partition(p) for p in key), "value": value}
            for key, value in sorted(self.coeffs.items())
        ]
        return json.dumps(entries, separators=(",", ":"), sort_keys=True)

    @staticmethod
    def from_json(s: str, degree: int, basis: str) -> "CoeffTable":
        entries = json.loads(s)
        items = []
        for e in entries:
            key = tuple(parse_partition(part) for part in e["key"].split("|"))
            items.append((key, int(e["value"])))
        return CoeffTable.make(degree, basis, items)


def power_to_monomial(lam: IntegerPartition) -> CoeffTable:
    """Monomial-basis expansion of one power symmetric function.

    >>> power_to_monomial((1, 1)).coeffs
    {((2,),): 1, ((1, 1),): 2}
    """
    lam = make_partition(lam)
    n = sum(lam)
    coeffs: dict[TableKey, int] = {}
    for mu in enumerate_partitions(n):
        c = coarsening_count(lam, mu)
        if c:
            coeffs[(mu,)] = aut(mu) * c
    return CoeffTable(n, "monomial", 1, coeffs)


def _multiply_power_sum(poly: dict[tuple[int, ...], int], a: int, k: int) -> dict[tuple[int, ...], int]:
    out: dict[tuple[int, ...], int] = {}
    for vec, c in poly.items():
        for i in range(k):
            new = vec[:i] + (vec[i] + a,) + vec[i + 1 :]
            out[new] = out.get(new, 0) + c
    return out


def expand_monomials(basis: str, lam: IntegerPartition, k: int) -> dict[tuple[int, ...], int]:
    """Literal expansion of one basis element in k variables.

    Returns a mapping from sorted (weakly decreasing, zero-stripped) exponent
    vectors to the coefficient shared by every monomial with that exponent
    pattern.  Serves as the independent oracle for :func:`power_to_monomial`.

    >>> expand_monomials("monomial", (1,), 3)
    {(1,): 1}
    >>> expand_monomials("power", (2,), 2)
    {(2,): 1}
    >>> sorted(expand_monomials("power", (1, 1), 2).items())
    [((1, 1), 2), ((2,), 1)]
    """
    lam = make_partition(lam)
    if basis == "monomial":
        if k < len(lam):
            raise ValueError(f"monomial basis needs k >= {len(lam)} variables, got {k}")
        return {lam: 1}
    if basis != "power":
        raise ValueError(f"unknown basis tag {basis!r}")
    if k < 1:
        raise ValueError("need at least one variable")
    poly: dict[tuple[int, ...], int] = {(0,) * k: 1}
    for a in lam:
        poly = _multiply_power_sum(poly, a, k)
    # collapse to sorted patterns, checking the expansion really is symmetric
    out: dict[tuple[int, ...], int] = {}
    counts: dict[tuple[int, ...], int] = {}
    for vec, c in poly.items():
        pattern = tuple(sorted((e for e in vec if e), reverse=True))
        if pattern in out:
            assert out[pattern] == c, "expansion not symmetric"
        else:
            out[pattern] = c
        counts[pattern] = counts.get(pattern, 0) + 1
    # every pattern must appear once per distinct rearrangement over k slots
    for pattern, cnt in counts.items():
        padded = pattern + (0,) * (k - len(pattern))
        expected = len(set(itertools.permutations(padded)))
        assert cnt == expected, "missing monomials in expansion"
    return out


def series_equal(lhs: CoeffTable, rhs: CoeffTable) -> bool:
    """True iff both tables denote the same series (compared in the monomial
    basis, converting power-basis tables alphabet-by-alphabet)."""
    if lhs.degree != rhs.degree:
        raise ValueError(f"degree mismatch: {lhs.degree} vs {rhs.degree}")
    if lhs.arity != rhs.arity:
        raise ValueError(f"arity mismatch: {lhs.arity} vs {rhs.arity}")
    return lhs.to_monomial().coeffs == rhs.to_monomial().coeffs
