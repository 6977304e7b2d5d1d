"""Decorated tree structures: tricolored thorn cactus trees and bicolored
thorn trees, with validity checking, degree sequences, reverse level
traversals, exhaustive generation, and a canonical JSON form.

Slot encoding
-------------
Each vertex owns an ordered tuple of *slots*, one per angular sector in the
planar embedding, read left to right:

* ``"thorn"`` — a pendant half-edge;
* ``("child", node)`` — a plain tree edge to a child vertex;
* ``("tri_child", node)`` — a triangle rooted here: ``node`` is the middle
  vertex of the triangle, and the third (bottom) vertex is the node's
  rightmost slot, which must be a plain child — never a thorn (no thorn may
  sit inside a triangle) and never a tri_child (two triangles may share a
  vertex but not the middle-to-bottom edge).  The closing edge of the
  triangle is implicit in the encoding.

Colors rotate white -> black -> grey -> white along parent/child edges (a
bicolored tree just never uses grey).  Vertex degree counts the incident
edges in the underlying map: ``deg = #slots`` for the root and for middle
vertices, ``deg = #slots + 1`` otherwise.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Literal, Union

from .perm_core import IntegerPartition, InternalInconsistencyError, make_partition

__all__ = [
    "TreeNode",
    "ThornCactusTree",
    "BicoloredThornTree",
    "THORN",
    "NEXT_COLOR",
    "validate",
    "validate_bicolored",
    "degrees",
    "bicolored_degrees",
    "rlt",
    "enumerate_thorn_cactus_trees",
    "enumerate_bicolored_thorn_trees",
    "count_thorn_cactus_trees",
    "count_thorn_cactus_trees_box",
    "tree_to_json",
    "tree_from_json",
    "tree_equal",
    "iter_nodes",
    "parent_info",
]

Color = Literal["white", "black", "grey"]
THORN = "thorn"
NEXT_COLOR: dict[str, str] = {"white": "black", "black": "grey", "grey": "white"}

Slot = Union[str, tuple[str, "TreeNode"]]


@dataclass(frozen=True, eq=False)
class TreeNode:
    """A vertex with its ordered slots.  Identity semantics: two structurally
    equal subtrees in different positions are distinct vertices."""

    color: str
    slots: tuple[Slot, ...] = ()

    def child_nodes(self) -> Iterator["TreeNode"]:
        for slot in self.slots:
            if slot != THORN:
                yield slot[1]

    def thorn_count(self) -> int:
        return sum(1 for s in self.slots if s == THORN)


@dataclass(frozen=True, eq=False)
class ThornCactusTree:
    root: TreeNode

    @property
    def n(self) -> int:
        return sum(_degree_map(self.root)[id(v)] for v in iter_nodes(self.root) if v.color == "white")

    def color_counts(self) -> dict[str, int]:
        out = {"white": 0, "black": 0, "grey": 0}
        for v in iter_nodes(self.root):
            out[v.color] += 1
        return out

    def triangle_counts(self) -> tuple[int, int, int]:
        """(g, w, b): triangles rooted at grey / white / black vertices."""
        g = w = b = 0
        for v in iter_nodes(self.root):
            tris = sum(1 for s in v.slots if s != THORN and s[0] == "tri_child")
            if v.color == "grey":
                g += tris
            elif v.color == "white":
                w += tris
            else:
                b += tris
        return g, w, b

    def thorn_counts(self) -> dict[str, int]:
        out = {"white": 0, "black": 0, "grey": 0}
        for v in iter_nodes(self.root):
            out[v.color] += v.thorn_count()
        return out


@dataclass(frozen=True, eq=False)
class BicoloredThornTree:
    root: TreeNode

    @property
    def n(self) -> int:
        return sum(_degree_map(self.root)[id(v)] for v in iter_nodes(self.root) if v.color == "white")


def iter_nodes(root: TreeNode) -> Iterator[TreeNode]:
    """Pre-order (planar left-to-right, depth-first) vertex stream."""
    yield root
    for slot in root.slots:
        if slot != THORN:
            yield from iter_nodes(slot[1])


def parent_info(root: TreeNode) -> dict[int, tuple[TreeNode, int, str]]:
    """id(node) -> (parent, slot index in parent, slot kind)."""
    out: dict[int, tuple[TreeNode, int, str]] = {}
    for v in iter_nodes(root):
        for i, slot in enumerate(v.slots):
            if slot != THORN:
                out[id(slot[1])] = (v, i, slot[0])
    return out


def _degree_map(root: TreeNode) -> dict[int, int]:
    parents = parent_info(root)
    out: dict[int, int] = {}
    for v in iter_nodes(root):
        info = parents.get(id(v))
        if info is None:  # root
            out[id(v)] = len(v.slots)
        elif info[2] == "tri_child":  # middle vertex
            out[id(v)] = len(v.slots)
        else:
            out[id(v)] = len(v.slots) + 1
    return out


def validate(tree: ThornCactusTree) -> list[str]:
    """All invariant violations, empty iff the tree is a valid thorn cactus
    tree.  Violations are data, not exceptions."""
    out: list[str] = []
    root = tree.root
    if root.color != "white":
        out.append(f"root-not-white: root color is {root.color}")
    for v in iter_nodes(root):
        if v.color not in NEXT_COLOR:
            out.append(f"bad-color: {v.color!r}")
            return out
        for slot in v.slots:
            if slot == THORN:
                continue
            kind, child = slot
            if kind not in ("child", "tri_child"):
                out.append(f"bad-slot-kind: {kind!r}")
            if child.color != NEXT_COLOR[v.color]:
                out.append(
                    f"color-alternation: {v.color} vertex has {child.color} child"
                )
            if kind == "tri_child":
                if (
                    not child.slots
                    or child.slots[-1] == THORN
                    or child.slots[-1][0] != "child"
                ):
                    out.append(
                        "middle-rightmost-not-child: triangle middle's rightmost "
                        "slot must be a plain child (it is the triangle's third "
                        "vertex, and its edge may belong to no other triangle)"
                    )
    if out:
        return out

    deg = _degree_map(root)
    sums = {"white": 0, "black": 0, "grey": 0}
    for v in iter_nodes(root):
        sums[v.color] += deg[id(v)]
    n = sums["white"]
    if not (sums["white"] == sums["black"] == sums["grey"]):
        out.append(f"degree-sum: per-color degree sums differ: {sums}")

    counts = tree.color_counts()
    p1, p2, p3 = counts["white"], counts["black"], counts["grey"]
    g, w, b = tree.triangle_counts()
    thorns = tree.thorn_counts()
    budgets = {
        "white": n + 1 - p1 - p2 + g,
        "black": n - p2 - p3 + w,
        "grey": n + 1 - p1 - p3 + b,
    }
    for color, want in budgets.items():
        if thorns[color] != want:
            out.append(
                f"thorn-budget: {color} thorns = {thorns[color]}, budget requires {want}"
            )
    return out


def degrees(tree: ThornCactusTree) -> tuple[IntegerPartition, IntegerPartition, IntegerPartition]:
    """Decreasing degree sequences (white, black, grey).

    Raises ValueError on an invalid tree.
    """
    violations = validate(tree)
    if violations:
        raise ValueError(f"invalid tree: {violations}")
    deg = _degree_map(tree.root)
    per: dict[str, list[int]] = {"white": [], "black": [], "grey": []}
    for v in iter_nodes(tree.root):
        per[v.color].append(deg[id(v)])
    return (
        tuple(sorted(per["white"], reverse=True)),
        tuple(sorted(per["black"], reverse=True)),
        tuple(sorted(per["grey"], reverse=True)),
    )


def bicolored_degrees(tree: BicoloredThornTree) -> tuple[IntegerPartition, IntegerPartition]:
    violations = validate_bicolored(tree)
    if violations:
        raise ValueError(f"invalid bicolored tree: {violations}")
    deg = _degree_map(tree.root)
    per: dict[str, list[int]] = {"white": [], "black": []}
    for v in iter_nodes(tree.root):
        per[v.color].append(deg[id(v)])
    return (
        tuple(sorted(per["white"], reverse=True)),
        tuple(sorted(per["black"], reverse=True)),
    )


def validate_bicolored(tree: BicoloredThornTree) -> list[str]:
    """Violations for the two-color (triangle-free) tree family."""
    out: list[str] = []
    root = tree.root
    if root.color != "white":
        out.append(f"root-not-white: root color is {root.color}")
    flip = {"white": "black", "black": "white"}
    for v in iter_nodes(root):
        if v.color not in flip:
            out.append(f"bad-color: {v.color!r}")
            return out
        for slot in v.slots:
            if slot == THORN:
                continue
            kind, child = slot
            if kind == "tri_child":
                out.append("triangle-in-bicolored-tree")
            if child.color != flip[v.color]:
                out.append(f"color-alternation: {v.color} vertex has {child.color} child")
    if out:
        return out
    deg = _degree_map(root)
    sums = {"white": 0, "black": 0}
    counts = {"white": 0, "black": 0}
    thorns = {"white": 0, "black": 0}
    for v in iter_nodes(root):
        sums[v.color] += deg[id(v)]
        counts[v.color] += 1
        thorns[v.color] += v.thorn_count()
    n = sums["white"]
    if sums["black"] != n:
        out.append(f"degree-sum: white sum {n} != black sum {sums['black']}")
    budget = n + 1 - counts["white"] - counts["black"]
    for color in ("white", "black"):
        if thorns[color] != budget:
            out.append(f"thorn-budget: {color} thorns = {thorns[color]}, budget requires {budget}")
    return out


# ---------------------------------------------------------------------------
# reverse level traversal


def rlt(tree: ThornCactusTree | BicoloredThornTree, color: str) -> list[tuple[str, TreeNode]]:
    """Reverse level traversal for one color.

    Vertices of ``color`` are grouped by level (number of proper same-color
    ancestors) and processed deepest level first, left to right within a
    level (planar order).  For each vertex its slots are read left to right —
    a thorn yields ``("thorn", owner)``, a child or tri_child yields
    ``("visit", child)`` — followed by the vertex's own ``("visit", vertex)``.
    The root is therefore the last event of the white traversal.
    """
    if color not in ("white", "black", "grey"):
        raise ValueError(f"bad color {color!r}")
    root = tree.root
    parents = parent_info(root)
    order = {id(v): i for i, v in enumerate(iter_nodes(root))}

    def level(v: TreeNode) -> int:
        lvl = 0
        cur = v
        while True:
            info = parents.get(id(cur))
            if info is None:
                return lvl
            cur = info[0]
            if cur.color == color:
                lvl += 1

    vertices = [v for v in iter_nodes(root) if v.color == color]
    vertices.sort(key=lambda v: (-level(v), order[id(v)]))
    events: list[tuple[str, TreeNode]] = []
    for v in vertices:
        for slot in v.slots:
            if slot == THORN:
                events.append(("thorn", v))
            else:
                events.append(("visit", slot[1]))
        events.append(("visit", v))
    return events


# ---------------------------------------------------------------------------
# exhaustive generation


def enumerate_thorn_cactus_trees(
    lam: IntegerPartition,
    mu: IntegerPartition,
    nu: IntegerPartition,
    g: int,
    w: int,
    b: int,
) -> Iterator[ThornCactusTree]:
    """Every thorn cactus tree with white/black/grey degree distributions
    lam/mu/nu and triangle counts (g, w, b) by root color, exactly once, in a
    deterministic order.  Infeasible budgets yield an empty stream."""
    lam, mu, nu = make_partition(lam), make_partition(mu), make_partition(nu)
    n = sum(lam)
    if sum(mu) != n or sum(nu) != n:
        raise ValueError("degree distributions must have equal weight")
    p1, p2, p3 = len(lam), len(mu), len(nu)
    thorns = {
        "white": n + 1 - p1 - p2 + g,
        "black": n - p2 - p3 + w,
        "grey": n + 1 - p1 - p3 + b,
    }
    tris = {"white": w, "black": b, "grey": g}  # keyed by triangle root color
    if min(thorns.values()) < 0 or min(tris.values()) < 0:
        return
    pools = {
        "white": Counter(lam),
        "black": Counter(mu),
        "grey": Counter(nu),
    }
    remaining = {color: sum(pool.values()) for color, pool in pools.items()}

    def build(color: str, nslots: int, is_middle: bool, pending: int) -> Iterator[TreeNode]:
        # ``pending`` counts the unfilled slots in all suspended ancestor
        # frames; when it is zero nothing outside this subtree can consume a
        # leftover budget, which lets dead ends be cut at their deepest point
        # instead of bubbling up to the root filter.  Neither prune below can
        # drop a tree the root filter would have kept.
        nxt = NEXT_COLOR[color]

        def fill(i: int, acc: list[Slot]) -> Iterator[tuple[Slot, ...]]:
            if i == nslots:
                if pending == 0 and (
                    remaining["white"] or remaining["black"] or remaining["grey"]
                    or thorns["white"] or thorns["black"] or thorns["grey"]
                    or tris["white"] or tris["black"] or tris["grey"]
                ):
                    return
                yield tuple(acc)
                return
            needed = nslots - i
            # a middle's last slot must hold a plain child, so thorns can
            # cover at most needed - 1 of the remaining slots here
            thorn_cap = needed - 1 if is_middle else needed
            if remaining[nxt] + min(thorns[color], thorn_cap) < needed:
                return
            last_of_middle = is_middle and i == nslots - 1
            above = pending + needed - 1
            if thorns[color] > 0 and not last_of_middle:
                thorns[color] -= 1
                acc.append(THORN)
                yield from fill(i + 1, acc)
                acc.pop()
                thorns[color] += 1
            for d in sorted((dd for dd, cnt in pools[nxt].items() if cnt > 0), reverse=True):
                pools[nxt][d] -= 1
                remaining[nxt] -= 1
                for sub in build(nxt, d - 1, False, above):
                    acc.append(("child", sub))
                    yield from fill(i + 1, acc)
                    acc.pop()
                if tris[color] > 0 and not last_of_middle:
                    tris[color] -= 1
                    for sub in build(nxt, d, True, above):
                        acc.append(("tri_child", sub))
                        yield from fill(i + 1, acc)
                        acc.pop()
                    tris[color] += 1
                pools[nxt][d] += 1
                remaining[nxt] += 1

        for slots in fill(0, []):
            yield TreeNode(color, slots)

    for root_deg in sorted(set(lam), reverse=True):
        pools["white"][root_deg] -= 1
        remaining["white"] -= 1
        for root in build("white", root_deg, False, 0):
            if (
                all(c == 0 for c in pools["white"].values())
                and all(c == 0 for c in pools["black"].values())
                and all(c == 0 for c in pools["grey"].values())
                and all(v == 0 for v in thorns.values())
                and all(v == 0 for v in tris.values())
            ):
                yield ThornCactusTree(root)
        pools["white"][root_deg] += 1
        remaining["white"] += 1


def enumerate_bicolored_thorn_trees(
    lam: IntegerPartition, mu: IntegerPartition
) -> Iterator[BicoloredThornTree]:
    """Every bicolored thorn tree with white degrees lam and black degrees
    mu, exactly once.  Out-of-range length data yields an empty stream."""
    lam, mu = make_partition(lam), make_partition(mu)
    n = sum(lam)
    if sum(mu) != n:
        raise ValueError("degree distributions must have equal weight")
    budget = n + 1 - len(lam) - len(mu)
    if budget < 0:
        return
    thorns = {"white": budget, "black": budget}
    pools = {"white": Counter(lam), "black": Counter(mu)}
    flip = {"white": "black", "black": "white"}

    def build(color: str, nslots: int) -> Iterator[TreeNode]:
        def fill(i: int, acc: list[Slot]) -> Iterator[tuple[Slot, ...]]:
            if i == nslots:
                yield tuple(acc)
                return
            if thorns[color] > 0:
                thorns[color] -= 1
                acc.append(THORN)
                yield from fill(i + 1, acc)
                acc.pop()
                thorns[color] += 1
            nxt = flip[color]
            for d in sorted((dd for dd, cnt in pools[nxt].items() if cnt > 0), reverse=True):
                pools[nxt][d] -= 1
                for sub in build(nxt, d - 1):
                    acc.append(("child", sub))
                    yield from fill(i + 1, acc)
                    acc.pop()
                pools[nxt][d] += 1

        for slots in fill(0, []):
            yield TreeNode(color, slots)

    for root_deg in sorted(set(lam), reverse=True):
        pools["white"][root_deg] -= 1
        for root in build("white", root_deg):
            if (
                all(c == 0 for c in pools["white"].values())
                and all(c == 0 for c in pools["black"].values())
                and all(v == 0 for v in thorns.values())
            ):
                yield BicoloredThornTree(root)
        pools["white"][root_deg] += 1


# ---------------------------------------------------------------------------
# exact counting without materialization
#
# The enumerator above regenerates every subtree stream once per combination
# of its left siblings, so its cost grows with the number of search states,
# not the number of trees.  The counter below walks the same search space but
# keys each subproblem on the full budget state (remaining thorns, remaining
# triangles, remaining degree pools), so identical sibling subproblems
# collapse.  It must agree with the enumerator everywhere; the test suite
# pins that equality.

_BudgetState = tuple[
    tuple[int, int, int],  # thorn budgets, (white, black, grey)
    tuple[int, int, int],  # triangle budgets by root color, (white, black, grey)
    tuple[tuple[tuple[int, int], ...], ...],  # degree pools as ((deg, cnt), ...)
]

_ZERO_POOLS: tuple[tuple[tuple[int, int], ...], ...] = ((), (), ())


def _pool_key(counter: Counter) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((d, c) for d, c in counter.items() if c > 0))


def _pool_without(
    pool: tuple[tuple[int, int], ...], d: int
) -> tuple[tuple[int, int], ...]:
    return tuple(
        (dd, cc) for dd, cc in ((x, c - (x == d)) for x, c in pool) if cc > 0
    )


def _count_completions(
    memo: dict,
    color: int,
    slots_left: int,
    is_middle: bool,
    state: _BudgetState,
) -> dict[_BudgetState, int]:
    """Ways to fill the remaining slots of one vertex, grouped by the budget
    state left behind — the grouping is what lets the continuation (the
    parent's remaining slots) be computed once per outcome state."""
    if slots_left == 0:
        return {state: 1}
    key = (color, slots_left, is_middle, state)
    hit = memo.get(key)
    if hit is not None:
        return hit
    thorns, tris, pools = state
    out: dict[_BudgetState, int] = {}
    last_of_middle = is_middle and slots_left == 1
    if thorns[color] > 0 and not last_of_middle:
        thorns2 = thorns[:color] + (thorns[color] - 1,) + thorns[color + 1 :]
        for s_after, c in _count_completions(
            memo, color, slots_left - 1, is_middle, (thorns2, tris, pools)
        ).items():
            out[s_after] = out.get(s_after, 0) + c
    nxt = (color + 1) % 3
    for d, _cnt in pools[nxt]:
        pools2 = pools[:nxt] + (_pool_without(pools[nxt], d),) + pools[nxt + 1 :]
        for s_mid, c1 in _count_completions(
            memo, nxt, d - 1, False, (thorns, tris, pools2)
        ).items():
            for s_after, c2 in _count_completions(
                memo, color, slots_left - 1, is_middle, s_mid
            ).items():
                out[s_after] = out.get(s_after, 0) + c1 * c2
        if tris[color] > 0 and not last_of_middle:
            tris2 = tris[:color] + (tris[color] - 1,) + tris[color + 1 :]
            for s_mid, c1 in _count_completions(
                memo, nxt, d, True, (thorns, tris2, pools2)
            ).items():
                for s_after, c2 in _count_completions(
                    memo, color, slots_left - 1, is_middle, s_mid
                ).items():
                    out[s_after] = out.get(s_after, 0) + c1 * c2
    memo[key] = out
    return out


def _count_with_memo(
    lam: IntegerPartition,
    mu: IntegerPartition,
    nu: IntegerPartition,
    g: int,
    w: int,
    b: int,
    memo: dict,
) -> int:
    n = sum(lam)
    p1, p2, p3 = len(lam), len(mu), len(nu)
    thorns = (n + 1 - p1 - p2 + g, n - p2 - p3 + w, n + 1 - p1 - p3 + b)
    tris = (w, b, g)  # triangle budgets keyed by root color (white, black, grey)
    if min(thorns) < 0 or min(tris) < 0:
        return 0
    pools = (_pool_key(Counter(lam)), _pool_key(Counter(mu)), _pool_key(Counter(nu)))
    zero: _BudgetState = ((0, 0, 0), (0, 0, 0), _ZERO_POOLS)
    total = 0
    for root_deg in sorted(set(lam), reverse=True):
        pools_root = (_pool_without(pools[0], root_deg),) + pools[1:]
        outcomes = _count_completions(
            memo, 0, root_deg, False, (thorns, tris, pools_root)
        )
        total += outcomes.get(zero, 0)
    return total


def count_thorn_cactus_trees(
    lam: IntegerPartition,
    mu: IntegerPartition,
    nu: IntegerPartition,
    g: int,
    w: int,
    b: int,
) -> int:
    """Number of trees ``enumerate_thorn_cactus_trees`` would yield for the
    same arguments, computed without building them.

    >>> count_thorn_cactus_trees((2,), (2,), (2,), 0, 0, 0)
    2
    >>> count_thorn_cactus_trees((1,), (1,), (1,), 0, 1, 0)
    1
    """
    lam, mu, nu = make_partition(lam), make_partition(mu), make_partition(nu)
    n = sum(lam)
    if sum(mu) != n or sum(nu) != n:
        raise ValueError("degree distributions must have equal weight")
    return _count_with_memo(lam, mu, nu, g, w, b, {})


def _count_completions_capped(
    memo: dict,
    caps: tuple[tuple[int, int, int], tuple[int, int, int]],
    color: int,
    slots_left: int,
    is_middle: bool,
    state: _BudgetState,
) -> dict[_BudgetState, int]:
    """Variant of ``_count_completions`` whose state records *consumed* thorn
    and triangle counts (bounded by ``caps``) instead of remaining budgets,
    so one walk serves every triangle-budget triple of a box at once."""
    if slots_left == 0:
        return {state: 1}
    key = (color, slots_left, is_middle, state)
    hit = memo.get(key)
    if hit is not None:
        return hit
    used_thorns, used_tris, pools = state
    thorn_caps, tri_caps = caps
    out: dict[_BudgetState, int] = {}
    last_of_middle = is_middle and slots_left == 1
    if used_thorns[color] < thorn_caps[color] and not last_of_middle:
        thorns2 = (
            used_thorns[:color]
            + (used_thorns[color] + 1,)
            + used_thorns[color + 1 :]
        )
        for s_after, c in _count_completions_capped(
            memo, caps, color, slots_left - 1, is_middle, (thorns2, used_tris, pools)
        ).items():
            out[s_after] = out.get(s_after, 0) + c
    nxt = (color + 1) % 3
    for d, _cnt in pools[nxt]:
        pools2 = pools[:nxt] + (_pool_without(pools[nxt], d),) + pools[nxt + 1 :]
        for s_mid, c1 in _count_completions_capped(
            memo, caps, nxt, d - 1, False, (used_thorns, used_tris, pools2)
        ).items():
            for s_after, c2 in _count_completions_capped(
                memo, caps, color, slots_left - 1, is_middle, s_mid
            ).items():
                out[s_after] = out.get(s_after, 0) + c1 * c2
        if used_tris[color] < tri_caps[color] and not last_of_middle:
            tris2 = (
                used_tris[:color] + (used_tris[color] + 1,) + used_tris[color + 1 :]
            )
            for s_mid, c1 in _count_completions_capped(
                memo, caps, nxt, d, True, (used_thorns, tris2, pools2)
            ).items():
                for s_after, c2 in _count_completions_capped(
                    memo, caps, color, slots_left - 1, is_middle, s_mid
                ).items():
                    out[s_after] = out.get(s_after, 0) + c1 * c2
    memo[key] = out
    return out


def count_thorn_cactus_trees_box(
    lam: IntegerPartition, mu: IntegerPartition, nu: IntegerPartition
) -> dict[tuple[int, int, int], int]:
    """Tree count for every triangle-budget triple in the feasibility box
    g < len(lam), w <= len(mu), b <= len(nu), from a single search-space walk
    whose outcomes are bucketed by consumed triangle counts.  Counts outside
    the box are always zero: each triangle has a distinct middle vertex,
    middles of white/black/grey-rooted triangles are black/grey/white, and
    the white root is never a middle.

    >>> count_thorn_cactus_trees_box((1,), (1,), (1,))[(0, 1, 0)]
    1
    >>> sorted(count_thorn_cactus_trees_box((1,), (1,), (1,)))
    [(0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1)]
    """
    lam, mu, nu = make_partition(lam), make_partition(mu), make_partition(nu)
    n = sum(lam)
    if sum(mu) != n or sum(nu) != n:
        raise ValueError("degree distributions must have equal weight")
    p1, p2, p3 = len(lam), len(mu), len(nu)
    out = {
        (g, w, b): 0
        for g in range(p1)
        for w in range(p2 + 1)
        for b in range(p3 + 1)
    }
    # consumed-thorn ceilings at the largest box corner; all are >= 0
    thorn_caps = (n - p2, n - p3, n + 1 - p1)
    tri_caps = (p2, p3, p1 - 1)  # by triangle root color (white, black, grey)
    caps = (thorn_caps, tri_caps)
    pools = (_pool_key(Counter(lam)), _pool_key(Counter(mu)), _pool_key(Counter(nu)))
    memo: dict = {}
    for root_deg in sorted(set(lam), reverse=True):
        pools_root = (_pool_without(pools[0], root_deg),) + pools[1:]
        outcomes = _count_completions_capped(
            memo, caps, 0, root_deg, False, ((0, 0, 0), (0, 0, 0), pools_root)
        )
        for (used_thorns, used_tris, pools_left), ways in outcomes.items():
            if pools_left != _ZERO_POOLS:
                continue
            w_used, b_used, g_used = used_tris
            # a completed tree's thorn counts are forced by its triangle
            # counts; a violation here means the walk itself is broken
            expected = (
                n + 1 - p1 - p2 + g_used,
                n - p2 - p3 + w_used,
                n + 1 - p1 - p3 + b_used,
            )
            if used_thorns != expected:
                raise InternalInconsistencyError(
                    "thorn consumption disagrees with triangle consumption: "
                    f"{used_thorns} vs {expected}"
                )
            out[(g_used, w_used, b_used)] += ways
    return out


# ---------------------------------------------------------------------------
# serialization


def _node_to_obj(node: TreeNode) -> dict:
    slots: list = []
    for slot in node.slots:
        if slot == THORN:
            slots.append("thorn")
        else:
            slots.append({slot[0]: _node_to_obj(slot[1])})
    return {"color": node.color, "slots": slots}


def _node_from_obj(obj: object) -> TreeNode:
    if not isinstance(obj, dict) or set(obj) != {"color", "slots"}:
        raise ValueError(f"bad tree node object: {obj!r}")
    color = obj["color"]
    if color not in ("white", "black", "grey"):
        raise ValueError(f"bad color {color!r}")
    slots: list[Slot] = []
    for s in obj["slots"]:
        if s == "thorn":
            slots.append(THORN)
        elif isinstance(s, dict) and len(s) == 1 and next(iter(s)) in ("child", "tri_child"):
            kind = next(iter(s))
            slots.append((kind, _node_from_obj(s[kind])))
        else:
            raise ValueError(f"bad slot object: {s!r}")
    return TreeNode(color, tuple(slots))


def tree_to_json(tree: ThornCactusTree | BicoloredThornTree) -> str:
    """Canonical JSON: compact separators, sorted keys — bit-exact round-trip."""
    return json.dumps(_node_to_obj(tree.root), separators=(",", ":"), sort_keys=True)


def tree_from_json(s: str, bicolored: bool = False) -> ThornCactusTree | BicoloredThornTree:
    root = _node_from_obj(json.loads(s))
    return BicoloredThornTree(root) if bicolored else ThornCactusTree(root)


def tree_equal(a: ThornCactusTree | BicoloredThornTree, b: ThornCactusTree | BicoloredThornTree) -> bool:
    """Structural equality (vertex objects have identity semantics)."""
    return _node_to_obj(a.root) == _node_to_obj(b.root)
