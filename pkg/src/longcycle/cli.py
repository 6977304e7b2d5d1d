"""Command-line front door for the long-cycle factorization toolkit.

Subcommands
-----------
coeff
    Exact coefficient values by brute-force enumeration, by closed
    formula, or both side by side with a match flag.
verify
    Named verification sweeps (``thm1``, ``cor1``, ``prop2``, ``prop3``,
    ``bijection``, ``series``, ``reduce5``) printing per-case tallies;
    the exit status is 0 iff every case passes.
theta
    Forward bijection trace for one partitioned factorization, emitted
    as JSON: tree, both permutations, ordered subset, and parameters.
trees
    Enumerate (one JSON object per line) or count thorn cactus trees or
    bicolored thorn trees with prescribed degree data.
reduce
    Collapse an all-singleton-grey factorization to a bicolored thorn
    tree plus one permutation, emitted as JSON.

Conventions: partitions are comma-separated descending part lists
(``4,2,1,1``); permutations accept cycle form ``(1 2 3 6)(4)(5)`` or
one-line form ``[3,4,5,1,2]``; set partitions separate blocks with
``|`` (``4,5|1,2,3,6``).  Exit status 0 means success / all checks
pass, 1 means a verification mismatch, 2 means unusable input, and 3
means a cost guard stopped the computation (``--force`` lifts guards).
Output is deterministic; ANSI color is used only on a terminal and is
disabled entirely when the ``NO_COLOR`` environment variable is set.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterator, Sequence

from .bijection import expand_trivial_nu, reduce_trivial_nu, theta
from .cactus import (
    count_thorn_cactus_trees,
    count_thorn_cactus_trees_box,
    degrees,
    enumerate_bicolored_thorn_trees,
    enumerate_thorn_cactus_trees,
    tree_equal,
    tree_to_json,
    validate,
    validate_bicolored,
)
from .enumeration import (
    GuardExceeded,
    c2_brute,
    c3_direct,
    c3_via_types,
    enumerate_partitioned_cacti,
    k2_brute,
    k3_brute,
)
from .formulas import (
    CLOSED_FORM,
    bicolored_tree_count,
    binomial,
    c2_closed,
    c3_closed,
    falling_factorial,
    k3_genus0,
    m_coeff,
    prop3_identity,
    series_bicolored_count,
    series_fixed_point,
    series_fixed_point_bicolored,
    series_tree_count,
    thorn_cactus_count_info,
)
from .perm_core import (
    IntegerPartition,
    PartitionedCactus,
    aut,
    enumerate_partitions,
    format_partition,
    parse_partition,
    parse_permutation,
    parse_set_partition,
)

__all__ = [
    "main",
    "run_suite_thm1",
    "run_suite_cor1",
    "run_suite_prop2",
    "run_suite_prop3",
    "run_suite_bijection",
    "run_suite_series",
    "run_suite_reduce5",
    "SuiteReport",
]


# ---------------------------------------------------------------------------
# output helpers


def _color_enabled() -> bool:
    return sys.stdout.isatty() and not os.environ.get("NO_COLOR")


def _paint(text: str, code: str) -> str:
    if _color_enabled():
        return f"\x1b[{code}m{text}\x1b[0m"
    return text


def _green(text: str) -> str:
    return _paint(text, "32")


def _red(text: str) -> str:
    return _paint(text, "31")


def _emit_json(payload: object) -> None:
    print(json.dumps(payload, sort_keys=True, separators=(",", ":")))


def _fmt_triple(lam: IntegerPartition, mu: IntegerPartition, nu: IntegerPartition | None) -> str:
    parts = [f"lam={format_partition(lam)}", f"mu={format_partition(mu)}"]
    if nu is not None:
        parts.append(f"nu={format_partition(nu)}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# coeff


def _coeff_value(kind: str, mode: str, lam, mu, nu, guard_override: int | None):
    """Return (brute, closed) with None for the side not requested."""

    def g(default: int) -> int:
        return guard_override if guard_override is not None else default

    brute = closed = None
    if mode in ("brute", "both"):
        if kind == "k3":
            brute = k3_brute(lam, mu, nu, guard=g(7))
        elif kind == "k2":
            brute = k2_brute(lam, mu, guard=g(9))
        elif kind == "c3":
            brute = c3_direct(lam, mu, nu, guard=g(6))
        else:
            brute = c2_brute(lam, mu, guard=g(8))
    if mode in ("closed", "both"):
        if kind == "k3":
            closed = k3_genus0(lam, mu, nu)
        elif kind == "k2":
            raise ValueError(
                "no closed form is wired for kind k2; use --mode brute"
            )
        elif kind == "c3":
            closed = c3_closed(lam, mu, nu)
        else:
            closed = c2_closed(lam, mu)
    return brute, closed


def cmd_coeff(args: argparse.Namespace) -> int:
    lam = parse_partition(args.lam)
    mu = parse_partition(args.mu)
    nu = parse_partition(args.nu) if args.nu is not None else None
    if args.kind in ("k3", "c3") and nu is None:
        raise ValueError(f"kind {args.kind} needs --nu")
    if args.kind in ("k2", "c2") and nu is not None:
        raise ValueError(f"kind {args.kind} takes no --nu")
    guard_override = sum(lam) if args.force else None
    brute, closed = _coeff_value(args.kind, args.mode, lam, mu, nu, guard_override)

    match = None
    if args.mode == "both":
        match = brute == closed
    if args.json:
        def j(v):
            if v is None or isinstance(v, int):
                return v
            return str(v)  # exact non-integer (Fraction) as a string
        _emit_json(
            {
                "brute": j(brute),
                "closed": j(closed),
                "kind": args.kind,
                "lambda": list(lam),
                "match": match,
                "mode": args.mode,
                "mu": list(mu),
                "nu": list(nu) if nu is not None else None,
            }
        )
    elif args.mode == "brute":
        print(brute)
    elif args.mode == "closed":
        print(closed)
    else:
        flag = _green("MATCH") if match else _red("MISMATCH")
        print(f"{brute} {closed} {flag}")
    return 0 if match in (None, True) else 1


# ---------------------------------------------------------------------------
# verification suites


@dataclass
class SuiteReport:
    """Outcome of one verification sweep: per-case tally lines in canonical
    order, a closing line for success, or the first counterexample."""

    suite: str
    nmax: int
    lines: list[str]
    final: str
    failure: str | None = None

    @property
    def passed(self) -> bool:
        return self.failure is None


def _triples(n: int) -> Iterator[tuple[IntegerPartition, IntegerPartition, IntegerPartition]]:
    parts = list(enumerate_partitions(n))
    return product(parts, repeat=3)


def _pairs(n: int) -> Iterator[tuple[IntegerPartition, IntegerPartition]]:
    parts = list(enumerate_partitions(n))
    return product(parts, repeat=2)


def run_suite_thm1(nmax: int = 4, force: bool = False) -> SuiteReport:
    """Aut-weighted brute three-factor counts against the closed form,
    cross-multiplied so every comparison is exact-integer."""
    lines: list[str] = []
    for n in range(1, nmax + 1):
        ok = total = 0
        fail = None
        guard = nmax if force else None
        for lam, mu, nu in _triples(n):
            if n <= 5:
                brute = c3_direct(lam, mu, nu, guard=guard or 6)
            else:
                brute = c3_via_types(lam, mu, nu, guard=guard or 7)
            l1, l2, l3 = len(lam), len(mu), len(nu)
            lhs = (
                aut(lam) * aut(mu) * aut(nu) * brute
                * binomial(n - 1, l1 - 1)
                * binomial(n - 1, l2 - 1)
                * binomial(n - 1, l3 - 1)
            )
            rhs = math.factorial(n) ** 2 * m_coeff(n, l1, l2, l3)
            total += 1
            if lhs == rhs:
                ok += 1
            elif fail is None:
                fail = f"thm1 n={n} {_fmt_triple(lam, mu, nu)}: {lhs} != {rhs}"
        lines.append(f"n={n}: {ok}/{total} triples pass")
        if fail is not None:
            return SuiteReport("thm1", nmax, lines, "", fail)
    return SuiteReport("thm1", nmax, lines, "all triples pass")


def run_suite_cor1(nmax: int = 6, force: bool = False) -> SuiteReport:
    """Aut-weighted brute two-factor counts against the closed form."""
    lines: list[str] = []
    for n in range(1, nmax + 1):
        ok = total = 0
        fail = None
        for lam, mu in _pairs(n):
            brute = c2_brute(lam, mu, guard=nmax if force else 8)
            l1, l2 = len(lam), len(mu)
            if l1 + l2 > n + 1:
                good = brute == 0
                shown = f"{brute} != 0"
            else:
                lhs = aut(lam) * aut(mu) * brute * math.factorial(n + 1 - l1 - l2)
                rhs = n * math.factorial(n - l1) * math.factorial(n - l2)
                good = lhs == rhs
                shown = f"{lhs} != {rhs}"
            total += 1
            if good:
                ok += 1
            elif fail is None:
                fail = f"cor1 n={n} {_fmt_triple(lam, mu, None)}: {shown}"
        lines.append(f"n={n}: {ok}/{total} pairs pass")
        if fail is not None:
            return SuiteReport("cor1", nmax, lines, "", fail)
    return SuiteReport("cor1", nmax, lines, "all pairs pass")


def run_suite_prop2(nmax: int = 5, force: bool = False) -> SuiteReport:
    """Tree counts from the search-space walk against the closed formula for
    every degree triple and triangle-count tuple; tuples whose closed-form
    denominator vanishes are resolved by the oracle count and tallied."""
    lines: list[str] = []
    for n in range(1, nmax + 1):
        ok = total = degenerate = 0
        fail = None
        for lam, mu, nu in _triples(n):
            box = count_thorn_cactus_trees_box(lam, mu, nu)
            l1 = len(lam)
            for (g, w, b), counted in sorted(box.items()):
                total += 1
                if n - l1 - len(mu) + g + 1 == 0:
                    degenerate += 1  # no closed form; the walk is the value
                    ok += 1
                    continue
                value, how = thorn_cactus_count_info(lam, mu, nu, g, w, b)
                if how == CLOSED_FORM and value == counted:
                    ok += 1
                elif fail is None:
                    fail = (
                        f"prop2 n={n} {_fmt_triple(lam, mu, nu)} g={g} w={w} "
                        f"b={b}: walk {counted} != closed {value}"
                    )
        lines.append(
            f"n={n}: {ok}/{total} tuples pass ({degenerate} degenerate via oracle)"
        )
        if fail is not None:
            return SuiteReport("prop2", nmax, lines, "", fail)
    return SuiteReport("prop2", nmax, lines, "all tuples pass")


def run_suite_prop3(nmax: int = 12, force: bool = False) -> SuiteReport:
    """The two summation forms of the part-count identity, then (for weights
    up to 5) the count-level identity: the partitioned three-factor closed
    form equals the tree-count sum with its payload factors."""
    lines: list[str] = []
    for n in range(1, nmax + 1):
        ok = total = 0
        fail = None
        for l1, l2, l3 in product(range(1, n + 1), repeat=3):
            total += 1
            if prop3_identity(n, l1, l2, l3):
                ok += 1
            elif fail is None:
                fail = f"prop3 n={n} l1={l1} l2={l2} l3={l3}: sums differ"
        lines.append(f"n={n}: {ok}/{total} identities pass")
        if fail is not None:
            return SuiteReport("prop3", nmax, lines, "", fail)
    for n in range(1, min(nmax, 5) + 1):
        ok = total = 0
        fail = None
        for lam, mu, nu in _triples(n):
            l1, l2, l3 = len(lam), len(mu), len(nu)
            rhs = 0
            for (g, w, b), counted in count_thorn_cactus_trees_box(lam, mu, nu).items():
                if counted:
                    rhs += (
                        counted
                        * math.factorial(n + 1 - l1 - l3 + b)
                        * math.factorial(n - l2 - l3 + w)
                        * falling_factorial(n + 1 - l1 - l2 + g, l3 - w - b)
                    )
            lhs = c3_closed(lam, mu, nu)
            total += 1
            if lhs == rhs:
                ok += 1
            elif fail is None:
                fail = f"prop3 n={n} {_fmt_triple(lam, mu, nu)}: {lhs} != {rhs}"
        lines.append(f"n={n}: {ok}/{total} count identities pass")
        if fail is not None:
            return SuiteReport("prop3", nmax, lines, "", fail)
    return SuiteReport("prop3", nmax, lines, "all identities pass")


def run_suite_bijection(nmax: int = 4, force: bool = False) -> SuiteReport:
    """Certificate that the forward map is a bijection onto the decorated
    trees: every image is valid and lands in the enumerated tree family for
    its triangle counts, images are pairwise distinct, and per-tuple image
    counts equal tree count times payload count."""
    lines: list[str] = []
    for n in range(1, nmax + 1):
        ok = total = 0
        fail = None
        for lam, mu, nu in _triples(n):
            total += 1
            problem = _bijection_one_triple(lam, mu, nu, n, nmax, force)
            if problem is None:
                ok += 1
            elif fail is None:
                fail = f"bijection n={n} {_fmt_triple(lam, mu, nu)}: {problem}"
        lines.append(f"n={n}: {ok}/{total} triples pass")
        if fail is not None:
            return SuiteReport("bijection", nmax, lines, "", fail)
    return SuiteReport("bijection", nmax, lines, "injective + counts match")


def _bijection_one_triple(lam, mu, nu, n: int, nmax: int, force: bool) -> str | None:
    l1, l2, l3 = len(lam), len(mu), len(nu)
    pcs = list(
        enumerate_partitioned_cacti(lam, mu, nu, guard=nmax if force else 5)
    )
    box = count_thorn_cactus_trees_box(lam, mu, nu)
    histogram: dict[tuple[int, int, int], int] = {}
    images = set()
    tree_families: dict[tuple[int, int, int], set[str]] = {}
    for pc in pcs:
        tct, s1, s2, chi = theta(pc)
        violations = validate(tct)
        if violations:
            return f"image violates tree shape: {violations[0]}"
        if degrees(tct) != (lam, mu, nu):
            return f"image degrees {degrees(tct)} differ from input types"
        bucket = g, w, b = tct.triangle_counts()
        if (
            s1.n != n + 1 - l1 - l3 + b
            or s2.n != n - l2 - l3 + w
            or chi.m != n + 1 - l1 - l2 + g
            or len(chi.entries) != l3 - w - b
        ):
            return f"payload sizes off at triangle counts {bucket}"
        key = tree_to_json(tct)
        family = tree_families.get(bucket)
        if family is None:
            family = {
                tree_to_json(t)
                for t in enumerate_thorn_cactus_trees(lam, mu, nu, g, w, b)
            }
            tree_families[bucket] = family
        if key not in family:
            return f"image tree not in the enumerated family at {bucket}"
        images.add((key, s1.images, s2.images, chi.entries))
        histogram[bucket] = histogram.get(bucket, 0) + 1
    if len(images) != len(pcs):
        return f"only {len(images)} distinct images for {len(pcs)} inputs"
    outside = set(histogram) - set(box)
    if outside:
        return f"image triangle counts {sorted(outside)[0]} outside the box"
    for (g, w, b), counted in box.items():
        got = histogram.get((g, w, b), 0)
        if counted == 0:
            expected = 0  # empty tree family; factor sizes may be negative
        else:
            expected = (
                counted
                * math.factorial(n + 1 - l1 - l3 + b)
                * math.factorial(n - l2 - l3 + w)
                * falling_factorial(n + 1 - l1 - l2 + g, l3 - w - b)
            )
        if got != expected:
            return (
                f"image count {got} != codomain size {expected} "
                f"at triangle counts {(g, w, b)}"
            )
    return None


def _multiplicities(lam: IntegerPartition, order: int) -> tuple[int, ...]:
    vec = [0] * order
    for part in lam:
        vec[part - 1] += 1
    return tuple(vec)


def run_suite_series(nmax: int = 4, force: bool = False) -> SuiteReport:
    """Coefficient extraction from the generating-series fixed point against
    the search-space tree counts, plus the bicolored specialization, plus a
    coverage check that the series carries no stray monomials."""
    state = series_fixed_point(nmax)
    bstate = series_fixed_point_bicolored(nmax)
    lines: list[str] = []
    visited: set[tuple[int, ...]] = set()
    for n in range(1, nmax + 1):
        ok = total = 0
        fail = None
        for lam, mu, nu in _triples(n):
            box = count_thorn_cactus_trees_box(lam, mu, nu)
            mults = (
                _multiplicities(lam, nmax)
                + _multiplicities(mu, nmax)
                + _multiplicities(nu, nmax)
            )
            for (g, w, b), counted in sorted(box.items()):
                total += 1
                visited.add((len(lam), len(mu), len(nu), g, w, b) + mults)
                coeff = series_tree_count(state, lam, mu, nu, g, w, b)
                if coeff == counted:
                    ok += 1
                elif fail is None:
                    fail = (
                        f"series n={n} {_fmt_triple(lam, mu, nu)} g={g} w={w} "
                        f"b={b}: series {coeff} != count {counted}"
                    )
        lines.append(f"n={n}: {ok}/{total} tree coefficients pass")
        if fail is not None:
            return SuiteReport("series", nmax, lines, "", fail)
    for n in range(1, nmax + 1):
        ok = total = 0
        fail = None
        for lam, mu in _pairs(n):
            total += 1
            visited.add(
                (len(lam), len(mu), 0, 0, 0, 0)
                + _multiplicities(lam, nmax)
                + _multiplicities(mu, nmax)
                + (0,) * nmax
            )
            coeff = series_bicolored_count(bstate, lam, mu)
            expected = bicolored_tree_count(lam, mu)
            if coeff == expected:
                ok += 1
            elif fail is None:
                fail = (
                    f"series n={n} {_fmt_triple(lam, mu, None)}: "
                    f"bicolored series {coeff} != count {expected}"
                )
        lines.append(f"n={n}: {ok}/{total} bicolored coefficients pass")
        if fail is not None:
            return SuiteReport("series", nmax, lines, "", fail)
    def weights(key: tuple[int, ...]) -> tuple[int, int, int]:
        w1, w2, w3 = (
            sum((i + 1) * m for i, m in enumerate(key[6 + a * nmax : 6 + (a + 1) * nmax]))
            for a in range(3)
        )
        return w1, w2, w3

    def tree_balanced(key: tuple[int, ...]) -> bool:
        # a tree monomial carries the same weight in all three alphabets;
        # the fixed point also holds unbalanced partial terms — not trees
        w1, w2, w3 = weights(key)
        return w1 >= 1 and w1 == w2 == w3

    def bicolored_balanced(key: tuple[int, ...]) -> bool:
        w1, w2, w3 = weights(key)
        return w1 >= 1 and w1 == w2 and w3 == 0

    for label, table, balanced in (
        ("tree", state.full, tree_balanced),
        ("bicolored", bstate.full, bicolored_balanced),
    ):
        stray = sorted(
            key
            for key, coeff in table.items()
            if coeff and balanced(key) and key not in visited
        )
        if stray:
            return SuiteReport(
                "series",
                nmax,
                lines,
                "",
                f"series: stray {label} monomial {stray[0]} not matched by any count",
            )
    lines.append("coverage: no stray balanced monomials")
    return SuiteReport("series", nmax, lines, "all coefficients match")


def run_suite_reduce5(nmax: int = 5, force: bool = False) -> SuiteReport:
    """All-singleton grey blocks: forward images collapse onto bicolored
    thorn trees, the collapse round-trips, and totals match the bicolored
    tree count times a factorial."""
    lines: list[str] = []
    for n in range(1, nmax + 1):
        nu = (1,) * n
        ok = total = 0
        fail = None
        for lam, mu in _pairs(n):
            total += 1
            problem = _reduce_one_pair(lam, mu, nu, n, nmax, force)
            if problem is None:
                ok += 1
            elif fail is None:
                fail = f"reduce5 n={n} {_fmt_triple(lam, mu, None)}: {problem}"
        lines.append(f"n={n}: {ok}/{total} pairs pass")
        if fail is not None:
            return SuiteReport("reduce5", nmax, lines, "", fail)
    return SuiteReport("reduce5", nmax, lines, "all reductions pass")


def _reduce_one_pair(lam, mu, nu, n: int, nmax: int, force: bool) -> str | None:
    m = n + 1 - len(lam) - len(mu)
    images = set()
    count = 0
    for pc in enumerate_partitioned_cacti(lam, mu, nu, guard=nmax if force else 5):
        tct, s1, s2, chi = theta(pc)
        if tct.triangle_counts() != (0, len(mu), len(lam) - 1):
            return f"triangle counts {tct.triangle_counts()} off the planar profile"
        bt, sigma = reduce_trivial_nu(tct, s1, s2, chi)
        violations = validate_bicolored(bt)
        if violations:
            return f"collapsed tree invalid: {violations[0]}"
        back = expand_trivial_nu(bt, sigma)
        if not tree_equal(back[0], tct) or back[1:] != (s1, s2, chi):
            return "collapse does not round-trip"
        images.add((tree_to_json(bt), sigma))
        count += 1
    if len(images) != count:
        return f"only {len(images)} distinct collapses for {count} inputs"
    expected = 0 if m < 0 else bicolored_tree_count(lam, mu) * math.factorial(m)
    if count != expected:
        return f"{count} inputs != bicolored count x factorial = {expected}"
    return None


_SUITES: dict[str, tuple[Callable[[int, bool], SuiteReport], int, int]] = {
    # name -> (runner, default nmax, guard ceiling without --force)
    "thm1": (run_suite_thm1, 4, 7),
    "cor1": (run_suite_cor1, 6, 8),
    "prop2": (run_suite_prop2, 5, 6),
    "prop3": (run_suite_prop3, 12, 20),
    "bijection": (run_suite_bijection, 4, 5),
    "series": (run_suite_series, 4, 5),
    "reduce5": (run_suite_reduce5, 5, 5),
}


def cmd_verify(args: argparse.Namespace) -> int:
    runner, default_nmax, ceiling = _SUITES[args.suite]
    nmax = args.nmax if args.nmax is not None else default_nmax
    if nmax < 1:
        raise ValueError(f"--nmax must be at least 1, got {nmax}")
    if nmax > ceiling and not args.force:
        raise GuardExceeded(
            f"suite {args.suite} is guarded at nmax {ceiling}; "
            f"pass --force to run nmax {nmax}"
        )
    report = runner(nmax, args.force)
    if args.json:
        _emit_json(
            {
                "failure": report.failure,
                "lines": report.lines,
                "nmax": report.nmax,
                "pass": report.passed,
                "suite": report.suite,
            }
        )
    else:
        for line in report.lines:
            print(line)
        if report.passed:
            print(_green(report.final))
        else:
            print(_red(f"FAIL: {report.failure}"))
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# theta / reduce input plumbing


def _pc_from_args(args: argparse.Namespace) -> PartitionedCactus:
    if args.pc_json is not None:
        if any(
            getattr(args, name) is not None
            for name in ("pi1", "pi2", "pi3", "alpha1", "alpha2")
        ):
            raise ValueError("give either --pc-json or the five flags, not both")
        obj = json.loads(args.pc_json)
        if not isinstance(obj, dict):
            raise ValueError("--pc-json must hold a JSON object")
        missing = {"pi1", "pi2", "pi3", "alpha1", "alpha2"} - set(obj)
        if missing:
            raise ValueError(f"--pc-json misses keys: {sorted(missing)}")
        raw = obj
    else:
        flags = {
            name: getattr(args, name)
            for name in ("pi1", "pi2", "pi3", "alpha1", "alpha2")
        }
        absent = [name for name, value in flags.items() if value is None]
        if absent:
            raise ValueError(f"missing flags: {', '.join('--' + a for a in absent)}")
        raw = flags

    def blocks(value, label: str, n: int | None):
        if isinstance(value, str):
            return parse_set_partition(value, n)
        if isinstance(value, list):
            return tuple(frozenset(int(x) for x in block) for block in value)
        raise ValueError(f"{label} must be a string or a list of blocks")

    def perm(value, label: str, n: int):
        if isinstance(value, str):
            return parse_permutation(value, n)
        if isinstance(value, list):
            return parse_permutation(json.dumps(value), n)
        raise ValueError(f"{label} must be a string or a one-line list")

    pi1 = blocks(raw["pi1"], "pi1", None)
    n = sum(len(block) for block in pi1)
    return PartitionedCactus(
        pi1,
        blocks(raw["pi2"], "pi2", n),
        blocks(raw["pi3"], "pi3", n),
        perm(raw["alpha1"], "alpha1", n),
        perm(raw["alpha2"], "alpha2", n),
    )


def cmd_theta(args: argparse.Namespace) -> int:
    pc = _pc_from_args(args)
    tct, s1, s2, chi = theta(pc)
    lam, mu, nu = pc.types()
    g, w, b = tct.triangle_counts()
    _emit_json(
        {
            "chi": list(chi.entries),
            "params": {
                "b": b,
                "g": g,
                "lambda": list(lam),
                "mu": list(mu),
                "n": pc.n,
                "nu": list(nu),
                "w": w,
            },
            "sigma1": list(s1.images),
            "sigma2": list(s2.images),
            "tree": json.loads(tree_to_json(tct)),
        }
    )
    return 0


def cmd_reduce(args: argparse.Namespace) -> int:
    pc = _pc_from_args(args)
    bt, sigma = reduce_trivial_nu(*theta(pc))
    _emit_json(
        {
            "sigma": list(sigma.images),
            "tree": json.loads(tree_to_json(bt)),
        }
    )
    return 0


# ---------------------------------------------------------------------------
# trees


def cmd_trees(args: argparse.Namespace) -> int:
    lam = parse_partition(args.lam)
    mu = parse_partition(args.mu)
    n = sum(lam)
    if args.kind == "cactus":
        if args.nu is None or args.g is None or args.w is None or args.b is None:
            raise ValueError("kind cactus needs --nu, --g, --w and --b")
        nu = parse_partition(args.nu)
        if args.count:
            if n > 8 and not args.force:
                raise GuardExceeded(f"counting guarded at weight 8, got {n}")
            print(count_thorn_cactus_trees(lam, mu, nu, args.g, args.w, args.b))
        else:
            if n > 6 and not args.force:
                raise GuardExceeded(f"enumeration guarded at weight 6, got {n}")
            for tree in enumerate_thorn_cactus_trees(
                lam, mu, nu, args.g, args.w, args.b
            ):
                print(tree_to_json(tree))
    else:
        if args.nu is not None or args.g is not None or args.w is not None or args.b is not None:
            raise ValueError("kind bicolored takes only --lambda and --mu")
        if args.count:
            if n > 8 and not args.force:
                raise GuardExceeded(f"counting guarded at weight 8, got {n}")
            print(sum(1 for _ in enumerate_bicolored_thorn_trees(lam, mu)))
        else:
            if n > 6 and not args.force:
                raise GuardExceeded(f"enumeration guarded at weight 6, got {n}")
            for tree in enumerate_bicolored_thorn_trees(lam, mu):
                print(tree_to_json(tree))
    return 0


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="longcycle",
        description="Exact long-cycle factorization counts, verification "
        "sweeps, and bijection traces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_coeff = sub.add_parser("coeff", help="compute one coefficient")
    p_coeff.add_argument("--kind", required=True, choices=("k3", "k2", "c3", "c2"))
    p_coeff.add_argument("--lambda", dest="lam", required=True, metavar="PARTS")
    p_coeff.add_argument("--mu", required=True, metavar="PARTS")
    p_coeff.add_argument("--nu", metavar="PARTS")
    p_coeff.add_argument(
        "--mode", choices=("brute", "closed", "both"), default="brute"
    )
    p_coeff.add_argument("--force", action="store_true", help="lift cost guards")
    p_coeff.add_argument("--json", action="store_true")
    p_coeff.set_defaults(func=cmd_coeff)

    p_verify = sub.add_parser("verify", help="run a verification sweep")
    p_verify.add_argument("--suite", required=True, choices=tuple(_SUITES))
    p_verify.add_argument("--nmax", type=int, default=None)
    p_verify.add_argument("--force", action="store_true", help="lift cost guards")
    p_verify.add_argument("--json", action="store_true")
    p_verify.set_defaults(func=cmd_verify)

    def add_pc_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--pi1", metavar="BLOCKS")
        p.add_argument("--pi2", metavar="BLOCKS")
        p.add_argument("--pi3", metavar="BLOCKS")
        p.add_argument("--alpha1", metavar="PERM")
        p.add_argument("--alpha2", metavar="PERM")
        p.add_argument("--pc-json", dest="pc_json", metavar="JSON")

    p_theta = sub.add_parser(
        "theta", help="forward bijection trace for one factorization"
    )
    add_pc_flags(p_theta)
    p_theta.set_defaults(func=cmd_theta)

    p_trees = sub.add_parser("trees", help="enumerate or count decorated trees")
    p_trees.add_argument(
        "--kind", choices=("cactus", "bicolored"), default="cactus"
    )
    p_trees.add_argument("--lambda", dest="lam", required=True, metavar="PARTS")
    p_trees.add_argument("--mu", required=True, metavar="PARTS")
    p_trees.add_argument("--nu", metavar="PARTS")
    p_trees.add_argument("--g", type=int)
    p_trees.add_argument("--w", type=int)
    p_trees.add_argument("--b", type=int)
    p_trees.add_argument("--count", action="store_true", help="print the count only")
    p_trees.add_argument("--force", action="store_true", help="lift cost guards")
    p_trees.set_defaults(func=cmd_trees)

    p_reduce = sub.add_parser(
        "reduce", help="collapse an all-singleton-grey factorization"
    )
    add_pc_flags(p_reduce)
    p_reduce.set_defaults(func=cmd_reduce)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse has already printed its message
        return int(exc.code or 0)
    try:
        return args.func(args)
    except GuardExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
