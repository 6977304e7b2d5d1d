"""Brute-force oracle self-consistency: the oracles must agree with each
other and with elementary counting facts before any formula is trusted."""

from __future__ import annotations

import itertools
import math

import pytest

from longcycle.perm_core import (
    aut,
    compose,
    cycle_type,
    enumerate_partitions,
    genus,
    long_cycle,
)
from longcycle.enumeration import (
    GuardExceeded,
    c2_brute,
    c3_direct,
    c3_via_types,
    conjugacy_class,
    enumerate_partitioned_cacti,
    k2_brute,
    k3_brute,
    k3_table,
)


def class_size(n: int, lam) -> int:
    z = aut(lam)
    for part in lam:
        z *= part
    return math.factorial(n) // z


class TestConjugacyClass:
    def test_sizes(self):
        for n in range(1, 7):
            for lam in enumerate_partitions(n):
                got = list(conjugacy_class(n, lam))
                assert len(got) == class_size(n, lam), lam
                assert len(set(got)) == len(got)
                assert all(cycle_type(p) == lam for p in got)

    def test_union_is_group(self):
        n = 5
        total = sum(1 for lam in enumerate_partitions(n) for _ in conjugacy_class(n, lam))
        assert total == math.factorial(n)

    def test_weight_mismatch(self):
        with pytest.raises(ValueError):
            list(conjugacy_class(4, (2, 1)))


class TestK3:
    def test_identity_factorization(self):
        for n in range(1, 7):
            assert k3_brute((1,) * n, (1,) * n, (n,)) == 1

    def test_square_of_long_cycle_triple(self):
        assert k3_brute((2, 1, 1, 1), (2, 2, 1), (2, 1, 1, 1)) == 25

    def test_all_transpositions_n2(self):
        assert k3_brute((2,), (2,), (2,)) == 1

    def test_guard(self):
        with pytest.raises(GuardExceeded):
            k3_brute((8,), (8,), (8,), guard=7)

    def test_table_matches_brute(self):
        for n in range(1, 5):
            table = k3_table(n)
            for lam in enumerate_partitions(n):
                for mu in enumerate_partitions(n):
                    for nu in enumerate_partitions(n):
                        assert table.get((lam, mu, nu), 0) == k3_brute(lam, mu, nu)

    def test_total_mass(self):
        # every (a1, a2) pair appears in exactly one cell of the table
        for n in range(1, 6):
            assert sum(k3_table(n).values()) == math.factorial(n) ** 2

    def test_cyclic_rotation_invariance(self):
        for n in range(1, 6):
            table = k3_table(n)
            for (lam, mu, nu), v in table.items():
                assert table.get((mu, nu, lam), 0) == v
                assert table.get((nu, lam, mu), 0) == v

    def test_genus_sentinel_forces_zero(self):
        for n in range(1, 6):
            table = k3_table(n)
            for lam in enumerate_partitions(n):
                for mu in enumerate_partitions(n):
                    for nu in enumerate_partitions(n):
                        if genus([lam, mu, nu], n) is None:
                            assert table.get((lam, mu, nu), 0) == 0

    def test_reduces_to_two_factor(self):
        for n in range(1, 7):
            ones = (1,) * n
            for lam in enumerate_partitions(n):
                for mu in enumerate_partitions(n):
                    if n <= 5:
                        assert k3_table(n).get((lam, mu, ones), 0) == k2_brute(lam, mu)
            # n = 6: spot-check a few triples without the table
            if n == 6:
                for lam, mu in [((4, 2), (4, 2)), ((6,), (3, 2, 1)), ((2, 2, 2), (5, 1))]:
                    assert k3_brute(lam, mu, ones) == k2_brute(lam, mu)


class TestK2:
    def test_trivial_ends(self):
        for n in range(1, 8):
            assert k2_brute((1,) * n, (n,)) == 1
            assert k2_brute((n,), (1,) * n) == 1

    def test_three_cycle_split(self):
        assert k2_brute((2, 1), (2, 1)) == 3

    def test_total_mass(self):
        for n in range(1, 7):
            total = sum(
                k2_brute(lam, mu)
                for lam in enumerate_partitions(n)
                for mu in enumerate_partitions(n)
            )
            assert total == math.factorial(n)


class TestC3:
    def test_examples(self):
        assert c3_via_types((2,), (2,), (2,)) == 4
        assert c3_direct((2,), (2,), (2,)) == 4
        assert c3_direct((1,), (1,), (1,)) == 1
        assert c3_direct((3,), (3,), (3,)) == 36

    def test_single_blocks_absorb_everything(self):
        # with all-single-block types, every (a1, a2) pair qualifies
        for n in range(1, 6):
            assert c3_direct((n,), (n,), (n,)) == math.factorial(n) ** 2

    def test_routes_agree_small(self):
        for n in range(1, 5):
            for lam in enumerate_partitions(n):
                for mu in enumerate_partitions(n):
                    for nu in enumerate_partitions(n):
                        assert c3_via_types(lam, mu, nu) == c3_direct(lam, mu, nu), (
                            lam,
                            mu,
                            nu,
                        )

    def test_routes_agree_n5(self):
        n = 5
        for lam in enumerate_partitions(n):
            for mu in enumerate_partitions(n):
                for nu in enumerate_partitions(n):
                    assert c3_via_types(lam, mu, nu) == c3_direct(lam, mu, nu)

    def test_routes_agree_n6_sampled(self):
        for lam, mu, nu in [
            ((4, 2), (4, 2), (4, 1, 1)),
            ((6,), (6,), (6,)),
            ((3, 2, 1), (2, 2, 2), (5, 1)),
        ]:
            assert c3_via_types(lam, mu, nu) == c3_direct(lam, mu, nu)

    def test_generator_count_matches(self):
        for n in range(1, 5):
            for lam in enumerate_partitions(n):
                for mu in enumerate_partitions(n):
                    for nu in enumerate_partitions(n):
                        got = sum(1 for _ in enumerate_partitioned_cacti(lam, mu, nu))
                        assert got == c3_direct(lam, mu, nu), (lam, mu, nu)

    def test_generator_yields_valid_distinct(self):
        seen = set()
        for pc in enumerate_partitioned_cacti((2, 1), (2, 1), (1, 1, 1)):
            key = (pc.pi1, pc.pi2, pc.pi3, pc.alpha1.images, pc.alpha2.images)
            assert key not in seen
            seen.add(key)
            assert pc.types() == ((2, 1), (2, 1), (1, 1, 1))


class TestC2:
    def test_examples(self):
        assert c2_brute((1,), (1,)) == 1
        assert c2_brute((2, 1), (2, 1)) == 3
        assert c2_brute((2,), (2,)) == 2

    def test_oracle_against_naive(self):
        # independent implementation straight from the definition
        from longcycle.perm_core import blocks_stable, enumerate_set_partitions_of_type
        from longcycle.perm_core import Permutation

        def naive(n, lam, mu):
            gamma = long_cycle(n)
            count = 0
            for p in itertools.permutations(range(1, n + 1)):
                a = Permutation(p)
                b = compose(a.inverse(), gamma)
                na = sum(
                    1
                    for P in enumerate_set_partitions_of_type(n, lam)
                    if blocks_stable(P, a)
                )
                nb = sum(
                    1
                    for P in enumerate_set_partitions_of_type(n, mu)
                    if blocks_stable(P, b)
                )
                count += na * nb
            return count

        for n in range(1, 6):
            for lam in enumerate_partitions(n):
                for mu in enumerate_partitions(n):
                    assert c2_brute(lam, mu) == naive(n, lam, mu), (lam, mu)

    def test_two_factor_genus_zero_equals_k2(self):
        # when lengths saturate the genus bound the partitions are forced
        assert c2_brute((2, 1), (2, 1)) == k2_brute((2, 1), (2, 1))


class TestSharding:
    def test_deterministic_total_under_sharding(self):
        lam, mu, nu = (3, 1), (2, 2), (2, 1, 1)
        whole = k3_brute(lam, mu, nu)
        shards = [0, 0]
        from longcycle.perm_core import long_cycle as lc

        gamma = lc(4)
        for idx, a1 in enumerate(conjugacy_class(4, lam)):
            beta = compose(a1.inverse(), gamma)
            part = sum(
                1
                for a2 in conjugacy_class(4, mu)
                if cycle_type(compose(a2.inverse(), beta)) == nu
            )
            shards[idx % 2] += part
        assert sum(shards) == whole
