"""Bijection between partitioned factorizations and decorated thorn trees.

The forward map runs in five materialized stages, each a checkable object:

1. ``build_T``        — last-passage incidence tree over the blocks.
2. ``add_triangles``  — coincidence rules attach one triangle per matching
                        value pair, recorded by re-tagging the middle vertex's
                        slot as ``tri_child``.
3. ``relabel``        — per-color reverse level traversals index the blocks
                        and produce the three relabeling permutations.
4. ``label_multisets``— every vertex receives its pair of labels; the three
                        label multisets are extracted.
5. ``add_thorns``     — a counter walk along each color stream converts label
                        gaps into thorns, yielding a thorn cactus tree.

``chi_and_sigmas`` extracts the residual data (an ordered subset and two
compressed permutations); ``theta`` composes everything.
``recover_intermediate`` plays stage 5 backwards. ``reduce_trivial_nu``
collapses the all-singleton-grey case onto bicolored thorn trees.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cactus import (
    THORN,
    BicoloredThornTree,
    ThornCactusTree,
    TreeNode,
    degrees,
    iter_nodes,
    parent_info,
    rlt,
    validate,
    validate_bicolored,
)
from .perm_core import (
    InternalInconsistencyError,
    PartitionedCactus,
    Permutation,
)

__all__ = [
    "OrderedSubset",
    "PartialPermutation",
    "LabelMultisets",
    "VertexMark",
    "LabeledTree",
    "ThetaStages",
    "build_T",
    "add_triangles",
    "relabel",
    "label_multisets",
    "add_thorns",
    "chi_and_sigmas",
    "theta",
    "theta_stages",
    "recover_intermediate",
    "reduce_trivial_nu",
    "expand_trivial_nu",
    "labeled_tree_equal",
]


# ---------------------------------------------------------------------------
# value containers


@dataclass(frozen=True)
class OrderedSubset:
    """A sequence of distinct integers drawn from ``{1..m}``.

    >>> OrderedSubset((3, 1), 4).entries
    (3, 1)
    >>> OrderedSubset((2, 2), 3)
    Traceback (most recent call last):
        ...
    ValueError: entries must be distinct
    """

    entries: tuple[int, ...]
    m: int

    def __post_init__(self) -> None:
        if self.m < 0:
            raise ValueError("m must be non-negative")
        if len(set(self.entries)) != len(self.entries):
            raise ValueError("entries must be distinct")
        for x in self.entries:
            if not 1 <= x <= self.m:
                raise ValueError(f"entry {x} outside 1..{self.m}")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


@dataclass(frozen=True)
class PartialPermutation:
    """An injective map given as ``(source, target)`` pairs sorted by source.

    >>> pp = PartialPermutation(((3, 1), (1, 4)))
    >>> pp.pairs
    ((1, 4), (3, 1))
    >>> pp.domain, pp.image
    ((1, 3), (4, 1))
    """

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.pairs))
        object.__setattr__(self, "pairs", ordered)
        sources = [a for a, _ in ordered]
        targets = [b for _, b in ordered]
        if len(set(sources)) != len(sources):
            raise ValueError("duplicate source")
        if len(set(targets)) != len(targets):
            raise ValueError("not injective")

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(a for a, _ in self.pairs)

    @property
    def image(self) -> tuple[int, ...]:
        return tuple(b for _, b in self.pairs)

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    def compressed(self) -> Permutation:
        """Order-isomorphic copy on ``{1..k}``: sources ascending, each target
        replaced by its rank among the targets.

        >>> PartialPermutation(((1, 4), (3, 5), (5, 3))).compressed()
        Permutation((2, 3, 1))
        """
        rank = {t: i + 1 for i, t in enumerate(sorted(self.image))}
        return Permutation(tuple(rank[b] for _, b in self.pairs))


@dataclass(frozen=True)
class LabelMultisets:
    """The three sorted label multisets carried by a fully labeled tree."""

    s1: tuple[int, ...]
    s2: tuple[int, ...]
    s3: tuple[int, ...]

    def __post_init__(self) -> None:
        for name in ("s1", "s2", "s3"):
            vals = getattr(self, name)
            object.__setattr__(self, name, tuple(sorted(vals)))


@dataclass(frozen=True)
class VertexMark:
    """Per-vertex annotation accumulated across stages.

    ``block``/``block_index`` come from the incidence stage, ``rlt_index``
    from the relabeling stage, and the label fields from the labeling stage.
    ``string_block`` is what the vertex contributes to its color's indexing
    string: the block itself for white and grey vertices, the block pulled
    back through the third and second permutations for black vertices.
    A vertex carries only the label fields that its color admits; the root
    carries the single ``root_label``.
    """

    color: str
    block: frozenset[int] | None = None
    block_index: int | None = None
    string_block: frozenset[int] | None = None
    rlt_index: int | None = None
    circle: int | None = None
    square: int | None = None
    rhombus: int | None = None
    root_label: int | None = None

    def stream_label(self, color: str) -> int | None:
        """The label consulted by the ``color`` stream when it meets this
        vertex: circle for the white stream, square for black, rhombus for
        grey."""
        key = {"white": "circle", "black": "square", "grey": "rhombus"}[color]
        return getattr(self, key)


@dataclass(eq=False)
class LabeledTree:
    """A slot tree plus per-vertex marks (keyed by vertex identity) and,
    once triangles are attached, the triangle counts by root color."""

    root: TreeNode
    kind: str  # "block" | "index" | "labels"
    marks: dict[int, VertexMark] = field(default_factory=dict)
    triangles: tuple[int, int, int] | None = None

    def mark(self, v: TreeNode) -> VertexMark:
        return self.marks[id(v)]

    def vertices(self, color: str | None = None) -> list[TreeNode]:
        return [
            v
            for v in iter_nodes(self.root)
            if color is None or v.color == color
        ]


def labeled_tree_equal(a: LabeledTree, b: LabeledTree) -> bool:
    """Structural equality: same shapes, same marks in pre-order."""
    va, vb = a.vertices(), b.vertices()
    if len(va) != len(vb):
        return False
    for x, y in zip(va, vb):
        if x.color != y.color or len(x.slots) != len(y.slots):
            return False
        for sx, sy in zip(x.slots, y.slots):
            kx = sx if sx == THORN else sx[0]
            ky = sy if sy == THORN else sy[0]
            if kx != ky:
                return False
        if a.marks.get(id(x)) != b.marks.get(id(y)):
            return False
    return True


# ---------------------------------------------------------------------------
# stage 1: incidence tree


def _block_data(pc: PartitionedCactus):
    """Canonicalized blocks and their characteristic maxima.

    Returns (pc, whites, blacks, greys, m1, m2p, m3) where m1/m3 are the
    block maxima of the white/grey blocks and m2p[j] is the maximum of the
    black block pulled back through the third and second permutations.
    """
    pc = pc.canonical()
    a2i = pc.alpha2.inverse()
    a3i = pc.alpha3.inverse()
    whites = [frozenset(b) for b in pc.pi1]
    blacks = [frozenset(b) for b in pc.pi2]
    greys = [frozenset(b) for b in pc.pi3]
    m1 = [max(b) for b in whites]
    m3 = [max(b) for b in greys]
    m2p = [max(a3i(a2i(x)) for x in b) for b in blacks]
    return pc, whites, blacks, greys, m1, m2p, m3


def build_T(pc: PartitionedCactus) -> LabeledTree:
    """Incidence tree over the blocks (one vertex per block, root = the
    white block containing 1).

    A black block hangs under the white block whose pulled-back element set
    contains its characteristic maximum; a grey block hangs under the black
    block similarly; a non-root white block hangs under the grey block
    containing its maximum.  Siblings are ordered by comparison values that
    the relabeling stage later turns into labels.

    Raises ValueError if the incidences fail to connect every block into a
    single tree.
    """
    pc, whites, blacks, greys, m1, m2p, m3 = _block_data(pc)
    a2, a3 = pc.alpha2, pc.alpha3
    a2i, a3i = a2.inverse(), a3.inverse()
    p1 = len(whites)

    white_of = {a3i(a2i(x)): i for i, b in enumerate(whites) for x in b}
    black_of = {a3i(x): j for j, b in enumerate(blacks) for x in b}
    grey_of = {x: k for k, b in enumerate(greys) for x in b}

    black_children: list[list[int]] = [[] for _ in whites]
    grey_children: list[list[int]] = [[] for _ in blacks]
    white_children: list[list[int]] = [[] for _ in greys]
    for j, v in enumerate(m2p):
        black_children[white_of[v]].append(j)
    for k, v in enumerate(m3):
        grey_children[black_of[v]].append(k)
    for i in range(p1 - 1):  # the root white has no parent
        white_children[grey_of[m1[i]]].append(i)

    for i, kids in enumerate(black_children):
        kids.sort(key=lambda j: a2(a3(m2p[j])))
    for j, kids in enumerate(grey_children):
        kids.sort(key=lambda k: a3i(a2i(a3(m3[k]))))
    for k, kids in enumerate(white_children):
        kids.sort(key=lambda i: a3i(m1[i]))

    marks: dict[int, VertexMark] = {}
    seen = 0

    def make_white(i: int) -> TreeNode:
        nonlocal seen
        seen += 1
        slots = tuple(("child", make_black(j)) for j in black_children[i])
        node = TreeNode("white", slots)
        marks[id(node)] = VertexMark("white", whites[i], i + 1, whites[i])
        return node

    def make_black(j: int) -> TreeNode:
        nonlocal seen
        seen += 1
        slots = tuple(("child", make_grey(k)) for k in grey_children[j])
        node = TreeNode("black", slots)
        pulled = frozenset(a3i(a2i(x)) for x in blacks[j])
        marks[id(node)] = VertexMark("black", blacks[j], j + 1, pulled)
        return node

    def make_grey(k: int) -> TreeNode:
        nonlocal seen
        seen += 1
        slots = tuple(("child", make_white(i)) for i in white_children[k])
        node = TreeNode("grey", slots)
        marks[id(node)] = VertexMark("grey", greys[k], k + 1, greys[k])
        return node

    root = make_white(p1 - 1)
    if seen != len(whites) + len(blacks) + len(greys):
        raise ValueError("incidences do not form a tree over all blocks")
    return LabeledTree(root, "block", marks)


# ---------------------------------------------------------------------------
# stage 2: triangles


def _rebuild(root: TreeNode, retag: dict[int, str]) -> tuple[TreeNode, dict[int, TreeNode]]:
    """Copy a tree, replacing the slot kind of every vertex listed in
    ``retag``; returns the new root and the old-id -> new-node map."""
    mapping: dict[int, TreeNode] = {}

    def copy(v: TreeNode) -> TreeNode:
        slots = []
        for slot in v.slots:
            if slot == THORN:
                slots.append(THORN)
            else:
                kind, child = slot
                slots.append((retag.get(id(child), kind), copy(child)))
        node = TreeNode(v.color, tuple(slots))
        mapping[id(v)] = node
        return node

    return copy(root), mapping


def add_triangles(t: LabeledTree, pc: PartitionedCactus) -> LabeledTree:
    """Attach one triangle per coincidence of comparison values.

    Each coincidence designates a middle vertex (whose slot in its parent is
    re-tagged ``tri_child``) and a bottom vertex, which must already be the
    middle's rightmost child — the non-tree edge closes parent-middle-bottom
    into a triangle rooted at the middle's parent.  Triangle counts are
    recorded by root color as ``(g, w, b)`` = (grey-, white-, black-rooted).
    """
    pc, whites, blacks, greys, m1, m2p, m3 = _block_data(pc)
    a2, a3 = pc.alpha2, pc.alpha3
    p1 = len(whites)

    by_color: dict[str, list[TreeNode]] = {"white": [], "black": [], "grey": []}
    for v in iter_nodes(t.root):
        by_color[v.color].append(v)
    node_of = {
        color: {t.mark(v).block_index: v for v in vs}
        for color, vs in by_color.items()
    }
    parents = parent_info(t.root)

    white_val = {m1[i]: i + 1 for i in range(p1 - 1)}  # non-root whites only
    black_val = {a2(a3(m2p[j])): j + 1 for j in range(len(blacks))}
    grey_val = {a3(m3[k]): k + 1 for k in range(len(greys))}

    retag: dict[int, str] = {}
    counts = {"grey": 0, "white": 0, "black": 0}

    def attach(middle: TreeNode, bottom: TreeNode) -> None:
        info = parents.get(id(middle))
        if info is None or id(middle) in retag:
            raise InternalInconsistencyError("triangle middle unusable")
        if not middle.slots or middle.slots[-1] == THORN or middle.slots[-1][1] is not bottom:
            raise InternalInconsistencyError(
                "triangle bottom is not the middle's rightmost child"
            )
        retag[id(middle)] = "tri_child"
        counts[info[0].color] += 1

    for j in range(len(blacks)):  # middle white, bottom black: grey-rooted
        i = white_val.get(a2(a3(m2p[j])))
        if i is not None:
            attach(node_of["white"][i], node_of["black"][j + 1])
    for k in range(len(greys)):  # middle black, bottom grey: white-rooted
        j = black_val.get(a3(m3[k]))
        if j is not None:
            attach(node_of["black"][j], node_of["grey"][k + 1])
    for i in range(p1 - 1):  # middle grey, bottom white: black-rooted
        k = grey_val.get(m1[i])
        if k is not None:
            attach(node_of["grey"][k], node_of["white"][i + 1])

    new_root, mapping = _rebuild(t.root, retag)
    marks = {id(mapping[old]): mark for old, mark in t.marks.items()}
    return LabeledTree(
        new_root,
        "block",
        marks,
        triangles=(counts["grey"], counts["white"], counts["black"]),
    )


# ---------------------------------------------------------------------------
# stage 3: relabeling permutations


def _visit_order(root: TreeNode, color: str) -> list[TreeNode]:
    """Vertices of ``color`` in the order their own visits occur in the
    color's reverse level traversal."""
    return [
        v
        for kind, v in rlt(ThornCactusTree(root), color)
        if kind == "visit" and v.color == color
    ]


def relabel(upsilon: LabeledTree) -> tuple[LabeledTree, Permutation, Permutation, Permutation]:
    """Index each color's vertices by its reverse level traversal and build
    the three relabeling permutations from the concatenated sorted block
    contents (vertex order = traversal order; within a block, increasing)."""
    n = sum(len(m.block) for m in upsilon.marks.values() if m.color == "white")
    marks = dict(upsilon.marks)
    thetas = []
    for color in ("white", "black", "grey"):
        order = _visit_order(upsilon.root, color)
        if color == "white" and order and order[-1] is not upsilon.root:
            raise InternalInconsistencyError("white traversal must end at the root")
        string: list[int] = []
        for pos, v in enumerate(order):
            mark = marks[id(v)]
            marks[id(v)] = VertexMark(
                color=mark.color,
                block=mark.block,
                block_index=mark.block_index,
                string_block=mark.string_block,
                rlt_index=pos + 1,
            )
            string.extend(sorted(mark.string_block))
        images = [0] * n
        for pos, x in enumerate(string):
            images[x - 1] = pos + 1
        thetas.append(Permutation(tuple(images)))
    t1, t2, t3 = thetas
    return (
        LabeledTree(upsilon.root, "index", marks, triangles=upsilon.triangles),
        t1,
        t2,
        t3,
    )


# ---------------------------------------------------------------------------
# stage 4: vertex labels and the three multisets

ThetasResult = tuple[LabeledTree, Permutation, Permutation, Permutation]


def label_multisets(pc: PartitionedCactus, thetas: ThetasResult) -> tuple[LabelMultisets, LabeledTree]:
    """Assign each vertex its pair of labels and collect the three label
    multisets (the traversal-final black and grey vertices, whose excluded
    labels always equal n, are left out of the second and third multisets)."""
    upsilon_prime, t1, t2, t3 = thetas
    pc = pc.canonical()
    n = pc.n
    a2, a3 = pc.alpha2, pc.alpha3
    a2i, a3i = a2.inverse(), a3.inverse()
    g, w, b = upsilon_prime.triangles or (0, 0, 0)

    counts = {"white": 0, "black": 0, "grey": 0}
    for m in upsilon_prime.marks.values():
        counts[m.color] += 1
    p1, p2, p3 = counts["white"], counts["black"], counts["grey"]

    marks: dict[int, VertexMark] = {}
    s1: list[int] = []
    s2: list[int] = []
    s3: list[int] = []
    for v in iter_nodes(upsilon_prime.root):
        mark = upsilon_prime.mark(v)
        fields = dict(
            color=mark.color,
            block=mark.block,
            block_index=mark.block_index,
            string_block=mark.string_block,
            rlt_index=mark.rlt_index,
        )
        if mark.color == "white":
            if mark.rlt_index == p1:
                marks[id(v)] = VertexMark(root_label=n, **fields)
            else:
                m1 = max(mark.block)
                circle, rhombus = t1(m1), t3(a3i(m1))
                marks[id(v)] = VertexMark(circle=circle, rhombus=rhombus, **fields)
                s1.append(circle)
                s3.append(rhombus)
        elif mark.color == "black":
            m2p = max(a3i(a2i(x)) for x in mark.block)
            circle, square = t1(a2(a3(m2p))), t2(m2p)
            marks[id(v)] = VertexMark(circle=circle, square=square, **fields)
            s1.append(circle)
            if mark.rlt_index == p2:
                if square != n:
                    raise InternalInconsistencyError(
                        "traversal-final black vertex must carry label n"
                    )
            else:
                s2.append(square)
        else:
            m3 = max(mark.block)
            square, rhombus = t2(a3i(a2i(a3(m3)))), t3(m3)
            marks[id(v)] = VertexMark(square=square, rhombus=rhombus, **fields)
            s2.append(square)
            if mark.rlt_index == p3:
                if rhombus != n:
                    raise InternalInconsistencyError(
                        "traversal-final grey vertex must carry label n"
                    )
            else:
                s3.append(rhombus)

    sets = LabelMultisets(tuple(s1), tuple(s2), tuple(s3))
    small = set(range(1, n))
    if len(set(sets.s1)) != p1 + p2 - 1 - g:
        raise InternalInconsistencyError("first label multiset has wrong support size")
    if len(set(sets.s2) & small) != p2 + p3 - 1 - w:
        raise InternalInconsistencyError("second label multiset has wrong support size")
    if len(set(sets.s3) & small) != p1 + p3 - 2 - b:
        raise InternalInconsistencyError("third label multiset has wrong support size")
    if len(sets.s1) - len(set(sets.s1)) != g:
        raise InternalInconsistencyError("first multiset duplicate count must equal g")

    upsilon2 = LabeledTree(upsilon_prime.root, "labels", marks, triangles=(g, w, b))
    return sets, upsilon2


# ---------------------------------------------------------------------------
# stage 5: thorns


def _is_middle(parents: dict[int, tuple[TreeNode, int, str]], v: TreeNode) -> bool:
    info = parents.get(id(v))
    return info is not None and info[2] == "tri_child"


def add_thorns(upsilon2: LabeledTree, s: LabelMultisets) -> ThornCactusTree:
    """Convert label gaps into thorns via one counter walk per color stream.

    Walking a color's traversal, the counter chases the stream's labels: a
    label exceeding ``counter + 1`` deposits the difference as thorns —
    before the visited child's slot (owned by the parent) for child visits,
    at the end of the vertex's own slots for ordinary self visits.  A
    triangle middle's self visit repeats its bottom child's label and
    deposits nothing.  The white root finally tops its slots up to n.  Thorn
    positions are exactly the ones from which the labels can be re-read by
    counting (see ``recover_intermediate``), which pins them uniquely.
    """
    root = upsilon2.root
    n = upsilon2.mark(root).root_label
    if n is None:
        raise InternalInconsistencyError("root label missing")
    parents = parent_info(root)
    inserts: dict[tuple[int, int], int] = {}
    appends: dict[int, int] = {}

    for color in ("white", "black", "grey"):
        counter = 0
        seen: list[int] = []
        events = rlt(ThornCactusTree(root), color)
        for pos, (kind, v) in enumerate(events):
            if kind == THORN:
                raise InternalInconsistencyError("thorn before thorn stage")
            is_self = v.color == color
            if is_self and v is root:
                if counter > n:
                    raise InternalInconsistencyError("white stream overran n")
                appends[id(root)] = appends.get(id(root), 0) + (n - counter)
                counter = n
                continue
            label = upsilon2.mark(v).stream_label(color)
            if label is None:
                raise InternalInconsistencyError("vertex lacks its stream label")
            if is_self and _is_middle(parents, v):
                # the middle repeats the label its bottom child just consumed
                if label != counter or not (pos and events[pos - 1][1] is v.slots[-1][1]):
                    raise InternalInconsistencyError(
                        "triangle middle out of step with its bottom child"
                    )
                seen.append(label)
                continue
            gap = label - counter - 1
            if gap < 0:
                raise InternalInconsistencyError("stream labels must ascend")
            if gap:
                if is_self:
                    appends[id(v)] = appends.get(id(v), 0) + gap
                else:
                    parent, slot_idx, _ = parents[id(v)]
                    key = (id(parent), slot_idx)
                    inserts[key] = inserts.get(key, 0) + gap
            counter = label
            seen.append(label)
        if color == "white":
            expected = s.s1
        else:
            if counter != n:
                raise InternalInconsistencyError(f"{color} stream must end at n")
            seen.pop()  # the traversal-final vertex's own label n is not recorded
            expected = s.s2 if color == "black" else s.s3
        if tuple(sorted(seen)) != expected:
            raise InternalInconsistencyError(f"{color} stream labels disagree with multiset")

    def copy(v: TreeNode) -> TreeNode:
        slots: list = []
        for idx, slot in enumerate(v.slots):
            slots.extend([THORN] * inserts.get((id(v), idx), 0))
            if slot == THORN:
                slots.append(THORN)
            else:
                slots.append((slot[0], copy(slot[1])))
        slots.extend([THORN] * appends.get(id(v), 0))
        return TreeNode(v.color, tuple(slots))

    tct = ThornCactusTree(copy(root))
    problems = validate(tct)
    if problems:
        raise InternalInconsistencyError(f"thorn stage produced invalid tree: {problems}")
    return tct


# ---------------------------------------------------------------------------
# residual data


def _chi_and_sigmas_full(pc: PartitionedCactus, thetas: ThetasResult, s: LabelMultisets):
    upsilon_prime, t1, t2, t3 = thetas
    pc = pc.canonical()
    n = pc.n
    a2, a3 = pc.alpha2, pc.alpha3
    a2i, a3i = a2.inverse(), a3.inverse()
    t1i = t1.inverse()

    grey_marks = sorted(
        (m for m in upsilon_prime.marks.values() if m.color == "grey"),
        key=lambda m: m.rlt_index,
    )
    white_marks = [m for m in upsilon_prime.marks.values() if m.color == "white"]
    black_marks = [m for m in upsilon_prime.marks.values() if m.color == "black"]
    p1 = len(white_marks)

    support1 = set(s.s1)
    grey_values = [t1(a3(max(m.block))) for m in grey_marks]
    chi_tilde = tuple(v for v in grey_values if v not in support1)
    alphabet = sorted(set(range(1, n + 1)) - support1)
    rank = {x: i + 1 for i, x in enumerate(alphabet)}
    chi = OrderedSubset(tuple(rank[v] for v in chi_tilde), len(alphabet))

    m1_vals = {
        t1(max(m.block)) for m in white_marks if m.rlt_index != p1
    }
    black_vals = {
        t1(a2(a3(max(a3i(a2i(x)) for x in m.block)))) for m in black_marks
    }
    grey_val_set = set(grey_values)

    def partial(domain: set[int], fn, support) -> PartialPermutation:
        pairs = tuple((u, fn(u)) for u in sorted(domain))
        pp = PartialPermutation(pairs)
        codomain = set(range(1, n)) - set(support)
        if set(pp.image) != codomain:
            raise InternalInconsistencyError("residual map misses its codomain")
        return pp

    e_dom = set(range(1, n + 1)) - m1_vals - grey_val_set
    f_dom = set(range(1, n + 1)) - black_vals - grey_val_set
    st1 = partial(e_dom, lambda u: t3(a3i(t1i(u))), s.s3)
    st2 = partial(f_dom, lambda u: t2(a3i(a2i(t1i(u)))), s.s2)
    return chi, st1.compressed(), st2.compressed(), st1, st2, OrderedSubset(chi_tilde, n)


def chi_and_sigmas(pc: PartitionedCactus, thetas: ThetasResult, s: LabelMultisets) -> tuple[OrderedSubset, Permutation, Permutation]:
    """The ordered subset (grey traversal order, labels ranked within the
    complement of the first multiset's support) and the two order-isomorphic
    compressions of the residual injections."""
    chi, s1, s2, *_ = _chi_and_sigmas_full(pc, thetas, s)
    return chi, s1, s2


# ---------------------------------------------------------------------------
# the composed map


@dataclass(frozen=True)
class ThetaStages:
    """Every intermediate object of one forward run, for inspection."""

    pc: PartitionedCactus
    incidence: LabeledTree
    upsilon: LabeledTree
    upsilon_prime: LabeledTree
    theta1: Permutation
    theta2: Permutation
    theta3: Permutation
    labels: LabelMultisets
    upsilon2: LabeledTree
    sigma_tilde1: PartialPermutation
    sigma_tilde2: PartialPermutation
    chi_tilde: OrderedSubset
    tree: ThornCactusTree
    sigma1: Permutation
    sigma2: Permutation
    chi: OrderedSubset


def theta_stages(pc: PartitionedCactus) -> ThetaStages:
    """Run the forward map, materializing every stage."""
    pc = pc.canonical()
    incidence = build_T(pc)
    upsilon = add_triangles(incidence, pc)
    thetas = relabel(upsilon)
    upsilon_prime, t1, t2, t3 = thetas
    s, upsilon2 = label_multisets(pc, thetas)
    tct = add_thorns(upsilon2, s)
    chi, sigma1, sigma2, st1, st2, chi_tilde = _chi_and_sigmas_full(pc, thetas, s)

    lam, mu, nu = pc.types()
    n = pc.n
    g, w, b = upsilon.triangles
    if degrees(tct) != (lam, mu, nu):
        raise InternalInconsistencyError("output tree degrees disagree with block types")
    if tct.triangle_counts() != (g, w, b):
        raise InternalInconsistencyError("output tree triangle counts drifted")
    if sigma1.n != n + 1 - len(lam) - len(nu) + b:
        raise InternalInconsistencyError("first residual permutation has wrong size")
    if sigma2.n != n - len(mu) - len(nu) + w:
        raise InternalInconsistencyError("second residual permutation has wrong size")
    if chi.m != n + 1 - len(lam) - len(mu) + g or len(chi) != len(nu) - w - b:
        raise InternalInconsistencyError("ordered subset has wrong shape")
    return ThetaStages(
        pc,
        incidence,
        upsilon,
        upsilon_prime,
        t1,
        t2,
        t3,
        s,
        upsilon2,
        st1,
        st2,
        chi_tilde,
        tct,
        sigma1,
        sigma2,
        chi,
    )


def theta(pc: PartitionedCactus) -> tuple[ThornCactusTree, Permutation, Permutation, OrderedSubset]:
    """Forward map: partitioned factorization -> (thorn cactus tree, two
    permutations, ordered subset).

    >>> from longcycle.perm_core import PartitionedCactus, Permutation
    >>> one = Permutation((1,))
    >>> blk = (frozenset({1}),)
    >>> tct, s1, s2, chi = theta(PartitionedCactus(blk, blk, blk, one, one))
    >>> (s1.n, s2.n, chi.entries, tct.triangle_counts())
    (0, 0, (), (0, 1, 0))
    """
    st = theta_stages(pc)
    return st.tree, st.sigma1, st.sigma2, st.chi


# ---------------------------------------------------------------------------
# the backward label walk


def _strip_thorns(root: TreeNode) -> tuple[TreeNode, dict[int, TreeNode]]:
    mapping: dict[int, TreeNode] = {}

    def copy(v: TreeNode) -> TreeNode:
        slots = tuple(
            (slot[0], copy(slot[1])) for slot in v.slots if slot != THORN
        )
        node = TreeNode(v.color, slots)
        mapping[id(v)] = node
        return node

    return copy(root), mapping


def recover_intermediate(
    tct: ThornCactusTree,
    s1: Permutation,
    s2: Permutation,
    chi: OrderedSubset,
) -> tuple[LabeledTree, LabelMultisets, OrderedSubset]:
    """Reconstruct the labeled thornless tree, the label multisets and the
    un-ranked ordered subset from a forward-image tuple.

    Labels are re-read by counting along each color stream: thorns and
    ordinary visits advance the counter, a triangle middle's self visit
    repeats it.  Raises ValueError when the tuple is malformed (invalid
    tree, stream counts that do not reach n, or size-inconsistent residual
    data).
    """
    problems = validate(tct)
    if problems:
        raise ValueError(f"invalid tree: {problems}")
    lam, mu, nu = degrees(tct)
    n = sum(lam)
    counts = tct.color_counts()
    p1, p2, p3 = counts["white"], counts["black"], counts["grey"]
    g, w, b = tct.triangle_counts()
    if s1.n != n + 1 - len(lam) - len(nu) + b:
        raise ValueError("first permutation has the wrong size for this tree")
    if s2.n != n - len(mu) - len(nu) + w:
        raise ValueError("second permutation has the wrong size for this tree")
    if chi.m != n + 1 - len(lam) - len(mu) + g or len(chi) != len(nu) - w - b:
        raise ValueError("ordered subset has the wrong shape for this tree")

    root = tct.root
    parents = parent_info(root)
    fields: dict[int, dict[str, int]] = {id(v): {} for v in iter_nodes(root)}
    key_for = {"white": "circle", "black": "square", "grey": "rhombus"}
    final_index: dict[str, dict[int, int]] = {}

    for color in ("white", "black", "grey"):
        counter = 0
        order = 0
        indices: dict[int, int] = {}
        for kind, v in rlt(tct, color):
            if kind == THORN:
                counter += 1
                continue
            is_self = v.color == color
            if is_self:
                order += 1
                indices[id(v)] = order
            if is_self and v is root:
                if counter != n:
                    raise ValueError("white stream does not count up to n")
                fields[id(v)]["root_label"] = n
                continue
            if is_self and _is_middle(parents, v):
                fields[id(v)][key_for[color]] = counter
                continue
            counter += 1
            fields[id(v)][key_for[color]] = counter
        if color != "white" and counter != n:
            raise ValueError(f"{color} stream does not count up to n")
        final_index[color] = indices

    stripped_root, mapping = _strip_thorns(root)
    marks: dict[int, VertexMark] = {}
    s1_vals: list[int] = []
    s2_vals: list[int] = []
    s3_vals: list[int] = []
    for v in iter_nodes(root):
        got = fields[id(v)]
        idx = final_index[v.color][id(v)]
        marks[id(mapping[id(v)])] = VertexMark(
            color=v.color, rlt_index=idx, **got
        )
        if v.color == "white" and v is not root:
            s1_vals.append(got["circle"])
            s3_vals.append(got["rhombus"])
        elif v.color == "black":
            s1_vals.append(got["circle"])
            if idx != p2:
                s2_vals.append(got["square"])
        elif v.color == "grey":
            s2_vals.append(got["square"])
            if idx != p3:
                s3_vals.append(got["rhombus"])

    sets = LabelMultisets(tuple(s1_vals), tuple(s2_vals), tuple(s3_vals))
    alphabet = sorted(set(range(1, n + 1)) - set(sets.s1))
    if chi.m != len(alphabet):
        raise ValueError("ordered subset range disagrees with recovered labels")
    chi_tilde = OrderedSubset(tuple(alphabet[r - 1] for r in chi.entries), n)
    upsilon2 = LabeledTree(stripped_root, "labels", marks, triangles=(g, w, b))
    return upsilon2, sets, chi_tilde


# ---------------------------------------------------------------------------
# the all-singleton-grey reduction


def reduce_trivial_nu(
    tct: ThornCactusTree,
    s1: Permutation,
    s2: Permutation,
    chi: OrderedSubset,
) -> tuple[BicoloredThornTree, Permutation]:
    """Collapse a forward image with all grey degrees 1 onto a bicolored
    thorn tree plus one permutation.

    Local rules: a black middle's edge into its white parent becomes a plain
    edge; each grey leaf under a black becomes a black thorn, except the
    black's rightmost grey (the triangle's third vertex), which disappears;
    a grey middle is cut out, its single white child re-attached.  The
    permutation is the ordered subset read as one-line images.
    """
    problems = validate(tct)
    if problems:
        raise ValueError(f"invalid tree: {problems}")
    lam, mu, nu = degrees(tct)
    n = sum(lam)
    if nu != (1,) * n:
        raise ValueError("grey degree distribution must be all ones")
    g, w, b = tct.triangle_counts()
    if (g, w, b) != (0, len(mu), len(lam) - 1):
        raise ValueError("triangle counts disagree with the reducible shape")
    thorns = tct.thorn_counts()
    if thorns["black"] or thorns["grey"]:
        raise ValueError("a reducible tree carries no black or grey thorns")
    if s1.n != 0 or s2.n != 0:
        raise ValueError("residual permutations must be empty")
    m = n + 1 - len(lam) - len(mu)
    if chi.m != m or len(chi) != m:
        raise ValueError("ordered subset must be a full permutation")

    def white_node(v: TreeNode) -> TreeNode:
        slots: list = []
        for slot in v.slots:
            if slot == THORN:
                slots.append(THORN)
            elif slot[0] == "tri_child":
                slots.append(("child", black_node(slot[1])))
            else:
                raise ValueError("white vertex has a non-triangle black child")
        return TreeNode("white", tuple(slots))

    def black_node(v: TreeNode) -> TreeNode:
        slots: list = []
        if not v.slots or v.slots[-1] == THORN or v.slots[-1][0] != "child":
            raise ValueError("black middle lacks its rightmost grey")
        for slot in v.slots[:-1]:
            kind, grey = slot
            if kind == "tri_child":
                whites = [s for s in grey.slots if s != THORN]
                if len(whites) != 1 or grey.thorn_count():
                    raise ValueError("grey middle must carry exactly one white child")
                slots.append(("child", white_node(whites[0][1])))
            else:
                if grey.slots:
                    raise ValueError("grey leaf must have no slots")
                slots.append(THORN)
        last = v.slots[-1][1]
        if last.slots:
            raise ValueError("the rightmost grey must be a leaf")
        return TreeNode("black", tuple(slots))

    bt = BicoloredThornTree(white_node(tct.root))
    problems = validate_bicolored(bt)
    if problems:
        raise InternalInconsistencyError(f"reduction produced invalid tree: {problems}")
    return bt, Permutation(chi.entries)


def expand_trivial_nu(
    bt: BicoloredThornTree, sigma: Permutation
) -> tuple[ThornCactusTree, Permutation, Permutation, OrderedSubset]:
    """Inverse of :func:`reduce_trivial_nu`."""
    problems = validate_bicolored(bt)
    if problems:
        raise ValueError(f"invalid tree: {problems}")

    def white_node(v: TreeNode) -> TreeNode:
        slots: list = []
        for slot in v.slots:
            if slot == THORN:
                slots.append(THORN)
            else:
                slots.append(("tri_child", black_node(slot[1])))
        return TreeNode("white", tuple(slots))

    def black_node(v: TreeNode) -> TreeNode:
        slots: list = []
        for slot in v.slots:
            if slot == THORN:
                slots.append(("child", TreeNode("grey")))
            else:
                inner = TreeNode("grey", (("child", white_node(slot[1])),))
                slots.append(("tri_child", inner))
        slots.append(("child", TreeNode("grey")))
        return TreeNode("black", tuple(slots))

    tct = ThornCactusTree(white_node(bt.root))
    problems = validate(tct)
    if problems:
        raise ValueError(f"expansion produced invalid tree: {problems}")
    chi = OrderedSubset(tuple(sigma(i) for i in range(1, sigma.n + 1)), sigma.n)
    return tct, Permutation(()), Permutation(()), chi
