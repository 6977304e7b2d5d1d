"""Tree families: validity, degrees, traversals, exhaustive generation."""

from __future__ import annotations

import itertools

import pytest

from longcycle.cactus import (
    THORN,
    BicoloredThornTree,
    ThornCactusTree,
    TreeNode,
    bicolored_degrees,
    count_thorn_cactus_trees,
    count_thorn_cactus_trees_box,
    degrees,
    enumerate_bicolored_thorn_trees,
    enumerate_thorn_cactus_trees,
    iter_nodes,
    rlt,
    tree_equal,
    tree_from_json,
    tree_to_json,
    validate,
    validate_bicolored,
)
from longcycle.perm_core import enumerate_partitions

from helpers_trees import (
    bicolored_chain_n3,
    n1_bare_chain,
    n1_triangle,
    n2_chain,
    regression_tree_n6,
)


class TestValidate:
    def test_n1_triangle_valid(self):
        tree = n1_triangle()
        assert validate(tree) == []
        assert tree.triangle_counts() == (0, 1, 0)
        assert tree.n == 1

    def test_n2_chain_valid(self):
        for thorn_first in (False, True):
            tree = n2_chain(thorn_first)
            assert validate(tree) == []
            assert tree.triangle_counts() == (0, 0, 0)

    def test_bare_chain_invalid(self):
        violations = validate(n1_bare_chain())
        assert violations
        assert any("thorn-budget" in v or "degree-sum" in v for v in violations)

    def test_regression_tree_valid(self):
        tree, _ = regression_tree_n6()
        assert validate(tree) == []
        assert tree.triangle_counts() == (0, 1, 1)
        assert tree.thorn_counts() == {"white": 3, "black": 2, "grey": 3}
        assert tree.n == 6

    def test_root_color(self):
        bad = ThornCactusTree(TreeNode("black"))
        assert any("root-not-white" in v for v in validate(bad))

    def test_alternation(self):
        bad = ThornCactusTree(
            TreeNode("white", (("child", TreeNode("grey")),))
        )
        assert any("color-alternation" in v for v in validate(bad))

    def test_middle_rightmost_rule(self):
        # middle black whose rightmost slot is a thorn
        grey = TreeNode("grey")
        black = TreeNode("black", (("child", grey), THORN))
        bad = ThornCactusTree(TreeNode("white", (("tri_child", black),)))
        assert any("middle-rightmost" in v for v in validate(bad))


class TestDegrees:
    def test_examples(self):
        assert degrees(n1_triangle()) == ((1,), (1,), (1,))
        assert degrees(n2_chain()) == ((2,), (2,), (2,))

    def test_regression_tree(self):
        tree, _ = regression_tree_n6()
        assert degrees(tree) == ((4, 2), (4, 2), (4, 1, 1))

    def test_invalid_raises(self):
        with pytest.raises(ValueError):
            degrees(n1_bare_chain())

    def test_bicolored(self):
        assert bicolored_degrees(bicolored_chain_n3()) == ((2, 1), (2, 1))


class TestRLT:
    def test_n1_triangle_white(self):
        tree = n1_triangle()
        events = rlt(tree, "white")
        kinds = [(k, v.color) for k, v in events]
        assert kinds == [("visit", "black"), ("visit", "white")]
        assert events[-1][1] is tree.root

    def test_n2_chain_orders(self):
        ev1 = [(k, v.color) for k, v in rlt(n2_chain(False), "white")]
        assert ev1 == [("visit", "black"), ("thorn", "white"), ("visit", "white")]
        ev2 = [(k, v.color) for k, v in rlt(n2_chain(True), "white")]
        assert ev2 == [("thorn", "white"), ("visit", "black"), ("visit", "white")]

    def test_regression_tree_streams(self):
        tree, names = regression_tree_n6()
        white = rlt(tree, "white")
        want = [
            ("thorn", names["W45"]),
            ("visit", names["W45"]),
            ("thorn", names["root"]),
            ("thorn", names["root"]),
            ("visit", names["B1345"]),
            ("visit", names["B26"]),
            ("visit", names["root"]),
        ]
        assert white == want
        black = rlt(tree, "black")
        assert [(k, v) for k, v in black] == [
            ("thorn", names["B1345"]),
            ("thorn", names["B1345"]),
            ("visit", names["G5"]),
            ("visit", names["B1345"]),
            ("visit", names["G2"]),
            ("visit", names["G1346"]),
            ("visit", names["B26"]),
        ]
        grey = rlt(tree, "grey")
        assert [(k, v) for k, v in grey] == [
            ("visit", names["W45"]),
            ("visit", names["G5"]),
            ("visit", names["G2"]),
            ("thorn", names["G1346"]),
            ("thorn", names["G1346"]),
            ("thorn", names["G1346"]),
            ("visit", names["G1346"]),
        ]

    def test_visit_coverage(self):
        # every color-c and (c+1)-color vertex visited once; c-thorns once
        tree, _ = regression_tree_n6()
        nxt = {"white": "black", "black": "grey", "grey": "white"}
        for color in ("white", "black", "grey"):
            events = rlt(tree, color)
            visited = [v for k, v in events if k == "visit"]
            assert len(visited) == len(set(id(v) for v in visited))
            expect = [
                v
                for v in iter_nodes(tree.root)
                if v.color == color
                or (v.color == nxt[color] and v is not tree.root)
            ]
            assert set(id(v) for v in visited) == set(id(v) for v in expect)
            thorn_total = sum(
                v.thorn_count() for v in iter_nodes(tree.root) if v.color == color
            )
            assert sum(1 for k, _ in events if k == "thorn") == thorn_total


class TestEnumeration:
    def test_minimal_families(self):
        assert sum(1 for _ in enumerate_thorn_cactus_trees((1,), (1,), (1,), 0, 1, 0)) == 1
        assert sum(1 for _ in enumerate_thorn_cactus_trees((2,), (2,), (2,), 0, 0, 0)) == 2
        # black budget would be negative -> empty
        assert sum(1 for _ in enumerate_thorn_cactus_trees((1,), (1,), (1,), 0, 0, 0)) == 0

    def test_generated_trees_are_valid_and_distinct(self):
        for n in range(1, 5):
            for lam in enumerate_partitions(n):
                for mu in enumerate_partitions(n):
                    for nu in enumerate_partitions(n):
                        for g, w, b in itertools.product(range(3), repeat=3):
                            seen = set()
                            for tree in enumerate_thorn_cactus_trees(lam, mu, nu, g, w, b):
                                assert validate(tree) == [], (lam, mu, nu, g, w, b)
                                assert degrees(tree) == (lam, mu, nu)
                                assert tree.triangle_counts() == (g, w, b)
                                js = tree_to_json(tree)
                                assert js not in seen
                                seen.add(js)

    def test_regression_member_found(self):
        tree, _ = regression_tree_n6()
        want = tree_to_json(tree)
        found = any(
            tree_to_json(t) == want
            for t in enumerate_thorn_cactus_trees((4, 2), (4, 2), (4, 1, 1), 0, 1, 1)
        )
        assert found

    def test_deterministic_order(self):
        a = [tree_to_json(t) for t in enumerate_thorn_cactus_trees((2, 1), (2, 1), (3,), 0, 1, 0)]
        b = [tree_to_json(t) for t in enumerate_thorn_cactus_trees((2, 1), (2, 1), (3,), 0, 1, 0)]
        assert a == b

    def test_weight_mismatch(self):
        with pytest.raises(ValueError):
            list(enumerate_thorn_cactus_trees((2,), (1,), (1,), 0, 0, 0))


class TestCounting:
    """The search-space counter and its box variant must agree with actual
    generation everywhere — they are the fast oracle the sweeps lean on."""

    def test_counter_equals_generation_full_box_small(self):
        for n in range(1, 4):
            parts = list(enumerate_partitions(n))
            for lam, mu, nu in itertools.product(parts, repeat=3):
                box = count_thorn_cactus_trees_box(lam, mu, nu)
                for g, w, b in itertools.product(range(n + 1), repeat=3):
                    generated = sum(
                        1 for _ in enumerate_thorn_cactus_trees(lam, mu, nu, g, w, b)
                    )
                    counted = count_thorn_cactus_trees(lam, mu, nu, g, w, b)
                    assert counted == generated, (lam, mu, nu, g, w, b)
                    assert box.get((g, w, b), 0) == generated, (lam, mu, nu, g, w, b)

    def test_counter_equals_generation_n4_sample(self):
        for lam, mu, nu in [
            ((2, 1, 1), (2, 1, 1), (2, 1, 1)),
            ((3, 1), (2, 2), (4,)),
            ((2, 2), (3, 1), (2, 1, 1)),
            ((1, 1, 1, 1), (4,), (2, 2)),
        ]:
            box = count_thorn_cactus_trees_box(lam, mu, nu)
            assert sum(box.values()) > 0
            for (g, w, b), counted in box.items():
                generated = sum(
                    1 for _ in enumerate_thorn_cactus_trees(lam, mu, nu, g, w, b)
                )
                assert counted == generated, (lam, mu, nu, g, w, b)

    def test_counter_equals_generation_rich_spots(self):
        for args in [
            ((3, 2), (2, 2, 1), (4, 1), 1, 1, 0),
            ((3, 2, 1), (2, 2, 1, 1), (4, 2), 1, 1, 1),
            ((4, 2), (4, 2), (4, 1, 1), 0, 1, 1),
        ]:
            generated = sum(1 for _ in enumerate_thorn_cactus_trees(*args))
            assert count_thorn_cactus_trees(*args) == generated, args

    def test_counts_outside_box_are_zero(self):
        # the box bounds are structural: nothing exists beyond them
        for lam, mu, nu in [((2, 1), (3,), (2, 1)), ((2, 2), (2, 1, 1), (4,))]:
            n = sum(lam)
            box = count_thorn_cactus_trees_box(lam, mu, nu)
            for g, w, b in itertools.product(range(n + 1), repeat=3):
                if (g, w, b) not in box:
                    assert (
                        sum(1 for _ in enumerate_thorn_cactus_trees(lam, mu, nu, g, w, b))
                        == 0
                    ), (lam, mu, nu, g, w, b)

    def test_weight_mismatch(self):
        with pytest.raises(ValueError):
            count_thorn_cactus_trees((2,), (1,), (1,), 0, 0, 0)
        with pytest.raises(ValueError):
            count_thorn_cactus_trees_box((2,), (1,), (1,))


class TestBicolored:
    def test_counts(self):
        assert sum(1 for _ in enumerate_bicolored_thorn_trees((1,), (1,))) == 1
        assert sum(1 for _ in enumerate_bicolored_thorn_trees((2,), (2,))) == 2
        assert sum(1 for _ in enumerate_bicolored_thorn_trees((2, 1), (2, 1))) == 3

    def test_members_valid_distinct(self):
        for n in range(1, 6):
            for lam in enumerate_partitions(n):
                for mu in enumerate_partitions(n):
                    seen = set()
                    for tree in enumerate_bicolored_thorn_trees(lam, mu):
                        assert validate_bicolored(tree) == []
                        assert bicolored_degrees(tree) == (lam, mu)
                        js = tree_to_json(tree)
                        assert js not in seen
                        seen.add(js)

    def test_chain_found(self):
        want = tree_to_json(bicolored_chain_n3())
        got = [tree_to_json(t) for t in enumerate_bicolored_thorn_trees((2, 1), (2, 1))]
        assert want in got

    def test_out_of_range_empty(self):
        # lengths exceed n+1: no trees
        assert list(enumerate_bicolored_thorn_trees((1, 1, 1), (1, 1, 1))) == []


class TestJson:
    def test_roundtrip_bit_exact(self):
        for builder in (n1_triangle, n2_chain, lambda: regression_tree_n6()[0]):
            tree = builder()
            s = tree_to_json(tree)
            back = tree_from_json(s)
            assert tree_to_json(back) == s
            assert tree_equal(tree, back)

    def test_bicolored_roundtrip(self):
        tree = bicolored_chain_n3()
        s = tree_to_json(tree)
        back = tree_from_json(s, bicolored=True)
        assert isinstance(back, BicoloredThornTree)
        assert tree_to_json(back) == s

    def test_bad_json(self):
        for bad in ['{"color":"white"}', '{"color":"red","slots":[]}', '{"color":"white","slots":["spike"]}']:
            with pytest.raises(ValueError):
                tree_from_json(bad)

    def test_identity_semantics(self):
        a = n1_triangle()
        b = n1_triangle()
        assert a.root is not b.root
        assert tree_equal(a, b)
